#include <doctest.h>

#include <cmath>
#include <random>

#include "rrboost/ensemble.hpp"
#include "rrboost/errors.hpp"
#include "rrboost/line_search.hpp"
#include "rrboost/mstage.hpp"
#include "test_util.hpp"

using namespace rrboost;

TEST_CASE("line search finds a known minimizer") {
  const auto r = line_search([](double a) { return (a - 1.0) * (a - 1.0); });
  CHECK(std::abs(r.alpha - 1.0) < 1e-4);
  const auto far = line_search([](double a) { return (a - 37.5) * (a - 37.5); });
  CHECK(std::abs(far.alpha - 37.5) < 1e-3);
}

TEST_CASE("increasing objective gives a zero step") {
  const auto r = line_search([](double a) { return a * a + a; });
  CHECK(r.alpha == 0.0);
  CHECK(r.value == 0.0);
}

TEST_CASE("line search never does worse than a zero step") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    const double a = u(rng), b = u(rng), c = u(rng);
    auto f = [&](double x) { return std::sin(a * x) + b * x * x * 0.1 + c * x; };
    const auto r = line_search(f);
    CHECK(r.alpha >= 0.0);
    CHECK(r.value <= f(0.0) + 1e-12);
    CHECK(r.value == f(r.alpha));
  }
}

TEST_CASE("line search rejects non-finite probes") {
  CHECK_THROWS_AS(line_search([](double a) { return a > 0.1 ? NAN : 1.0 - a; }), NumericalError);
}

TEST_CASE("residual-matching learner gives a unit stage-2 step") {
  const std::vector<double> r{0.4, -0.2, 0.1, 0.3, -0.5};
  const double sigma = 1.0;
  const auto spec = LossSpec::tukey(kTukeyEfficientC);
  auto f = [&](double a) {
    std::vector<double> c(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) c[i] = r[i] - a * r[i];
    return stage2_objective(c, sigma, spec);
  };
  const auto ls = line_search(f);
  CHECK(std::abs(ls.alpha - 1.0) < 1e-4);
  CHECK(ls.value < 1e-8);
}

TEST_CASE("argmin_stop takes the first minimum") {
  CHECK(argmin_stop(std::vector<double>{5, 3, 4}) == 1);
  CHECK(argmin_stop(std::vector<double>{2, 2, 2}) == 0);
  CHECK(argmin_stop(std::vector<double>{4, 3, 2, 1}) == 3);
  CHECK(argmin_stop(std::vector<double>{INFINITY, 2, INFINITY}) == 1);
  CHECK_THROWS(argmin_stop(std::vector<double>{}));
}

TEST_CASE("shrinkage") {
  CHECK(shrinkage_step(2.0, 0.1) == doctest::Approx(0.2));
  CHECK(shrinkage_step(1.7, 1.0) == 1.7);
}

TEST_CASE("negative-gradient fits") {
  std::mt19937_64 rng(1);
  const Matrix x = testutil::random_matrix(50, 3, rng);
  const auto y = testutil::random_vector(50, rng);
  const FeatureIndex index(x);
  const Tree zero = fit_negative_gradient(index, std::vector<double>(50, 0.0), 2, 1);
  CHECK(zero.nodes().size() == 1);
  CHECK(zero.nodes()[0].value == 0.0);
  std::vector<double> g(50);
  for (std::size_t i = 0; i < 50; ++i) g[i] = -y[i];
  CHECK(fit_negative_gradient(index, g, 2, 3) == fit_tree(index, y, {SplitCriterion::LeastSquares, 2, 3}));

  Matrix step(4, 1);
  step.set_column(0, std::vector<double>{0, 1, 2, 3});
  const Tree t = fit_negative_gradient(step, std::vector<double>{-0.0, -0.0, -10.0, -10.0}, 1, 1);
  CHECK(t.nodes()[0].threshold == 1.5);
  CHECK(t.predict(std::vector<double>{0.0}) == 0.0);
  CHECK(t.predict(std::vector<double>{3.0}) == 10.0);
}

TEST_CASE("ensemble prediction") {
  Ensemble e;
  e.init = Tree::leaf(2.0);
  Matrix step(4, 1);
  step.set_column(0, std::vector<double>{0, 1, 2, 3});
  const Tree t = fit_tree(step, std::vector<double>{0, 0, 10, 10}, {SplitCriterion::LeastSquares, 1, 1});
  e.steps = {{0.5, t}, {0.25, t}};
  e.gamma = 0.5;
  const std::vector<double> x{3.0};
  CHECK(e.predict(x) == 2.0);
  e.stop_index = 1;
  CHECK(e.predict(x) == 2.0 + 0.5 * 0.5 * 10.0);
  e.stop_index = 2;
  CHECK(e.predict(x) == doctest::Approx(2.0 + 0.5 * 0.75 * 10.0));
  CHECK(e.uses_feature(0));
  CHECK_FALSE(e.uses_feature(1));
  CHECK(e.max_feature_index() == 0);
  CHECK(e.predict(step, Execution::Serial) == e.predict(step, Execution::Parallel));
}

TEST_CASE("method names") {
  for (Method m : all_methods()) CHECK(method_from_string(to_string(m)) == m);
  CHECK_THROWS_AS(method_from_string("xgboost"), UsageError);
}

TEST_CASE("config validation") {
  BoostConfig c;
  c.gamma = 0.0;
  CHECK_THROWS_AS(c.validate(), UsageError);
  c.gamma = 1.5;
  CHECK_THROWS_AS(c.validate(), UsageError);
  CHECK(BoostConfig::for_depth(1).t1_max == 500);
  CHECK(BoostConfig::for_depth(1).t2_max == 1000);
  CHECK(BoostConfig::for_depth(3).t1_max == 300);
  CHECK(BoostConfig::for_depth(2).t2_max == 500);
}
