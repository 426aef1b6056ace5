#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "rrboost/baselines.hpp"
#include "rrboost/errors.hpp"
#include "rrboost/importance.hpp"
#include "test_util.hpp"

using namespace rrboost;

namespace {

std::vector<double> errs_to_pred(const std::vector<double>& e) { return e; }

}  // namespace

TEST_CASE("robust MAD") {
  CHECK(robust_mad(std::vector<double>{0, 0.1, -0.1, 50}) == doctest::Approx(0.1438).epsilon(1e-12));
  CHECK(robust_mad(std::vector<double>{2, 2, 2}) == 0.0);
  const std::vector<double> v{1.0, 4.0, -2.0, 7.5, 0.3};
  std::vector<double> w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) w[i] = 3.0 * v[i];
  CHECK(robust_mad(w) == doctest::Approx(3.0 * robust_mad(v)));
  CHECK(robust_mad(v, 1.4826) == doctest::Approx(robust_mad(v) * 1.4826 / 1.438));
}

TEST_CASE("trim removes gross errors") {
  const std::vector<double> y(4, 0.0);
  const auto keep = trim_validation(errs_to_pred({0, 0.1, -0.1, 50}), y);
  CHECK(keep == std::vector<std::size_t>{0, 1, 2});
  const auto all = trim_validation(std::vector<double>(5, 2.0), std::vector<double>(5, 0.0));
  CHECK(all.size() == 5);
}

TEST_CASE("trim agrees with a scalar oracle") {
  std::mt19937_64 rng(61);
  for (int k = 0; k < 20; ++k) {
    auto e = testutil::random_vector(51, rng, 0.5);
    if (k % 2) e[k] = 9.0;
    const double mu = testutil::oracle_median(e);
    std::vector<double> dev;
    for (double v : e) dev.push_back(std::abs(v - mu));
    const double mad = 1.438 * testutil::oracle_median(dev);
    std::vector<std::size_t> expect;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (std::abs(e[i] - mu) < 3.0 * mad) expect.push_back(i);
    }
    CHECK(trim_validation(e, std::vector<double>(e.size(), 0.0)) == expect);
  }
}

TEST_CASE("recovery fraction") {
  std::vector<double> vi(10, 0.0);
  for (std::size_t j : {0u, 1u, 2u, 8u, 9u}) vi[j] = 1.0 + static_cast<double>(j);
  const std::vector<std::size_t> m{0, 1, 2, 3, 4};
  CHECK(recovery_fraction(vi, m) == doctest::Approx(0.6));
  CHECK(recovery_fraction(std::vector<double>(10, 0.5), m) == 1.0);
  std::vector<double> strong(10, 0.0);
  for (std::size_t j = 0; j < 5; ++j) strong[j] = 1.0;
  CHECK(recovery_fraction(strong, m) == 1.0);
}

TEST_CASE("seeded permutations") {
  std::vector<std::size_t> a(50), b(50), c(50);
  seeded_permutation(9, 3, 0, a);
  seeded_permutation(9, 3, 0, b);
  seeded_permutation(9, 4, 0, c);
  CHECK(a == b);
  CHECK(a != c);
  std::sort(c.begin(), c.end());
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(c[i] == i);
}

TEST_CASE("permutation importance") {
  const Dataset train = testutil::linear_dataset(200, 5, 71);
  Dataset val = testutil::linear_dataset(150, 5, 72);
  BaselineSpec s = BaselineSpec::for_method(Method::L2, 1);
  s.t_max = 60;
  const auto model = baseline_train(train, val, s).model;

  ImportanceOptions opts;
  opts.seed = 3;
  const auto report = permutation_importance(model, val, opts);
  REQUIRE(report.scores.size() == 5);
  for (std::size_t j = 0; j < 5; ++j) {
    if (!model.uses_feature(j)) CHECK(report.scores[j] == 0.0);
  }
  CHECK(report.scores[0] > report.scores[2]);
  CHECK(report.scores[1] > report.scores[2]);

  SUBCASE("identity permutation gives zero everywhere") {
    const auto id = permutation_importance(
        model, val, [](std::size_t, int, std::span<std::size_t> p) { std::iota(p.begin(), p.end(), std::size_t{0}); },
        opts);
    for (double v : id.scores) CHECK(v == 0.0);
  }
  SUBCASE("deterministic and execution-independent") {
    ImportanceOptions serial = opts;
    serial.exec = Execution::Serial;
    CHECK(permutation_importance(model, val, serial).scores == report.scores);
    CHECK(permutation_importance(model, val, opts).scores == report.scores);
  }
  SUBCASE("shifting predictions and responses together") {
    Ensemble shifted = model;
    shifted.init = Tree::leaf(model.init.nodes()[0].value + 10.0);
    Dataset v2 = val;
    for (auto& y : v2.y) y += 10.0;
    const auto r2 = permutation_importance(shifted, v2, opts);
    for (std::size_t j = 0; j < 5; ++j) CHECK(r2.scores[j] == doctest::Approx(report.scores[j]).epsilon(1e-9));
  }
  SUBCASE("repeats average over shuffles") {
    ImportanceOptions rep = opts;
    rep.repeats = 3;
    const auto r3 = permutation_importance(model, val, rep);
    CHECK(r3.repeats == 3);
    CHECK(r3.scores.size() == 5);
  }
}
