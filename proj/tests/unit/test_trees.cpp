#include <doctest.h>

#include <cmath>
#include <random>

#include "rrboost/errors.hpp"
#include "rrboost/init_tree.hpp"
#include "rrboost/tree.hpp"
#include "test_util.hpp"

using namespace rrboost;

namespace {

Matrix column(std::vector<double> v) {
  Matrix x(v.size(), 1);
  x.set_column(0, v);
  return x;
}

double training_impurity(const Tree& t, const Matrix& x, const std::vector<double>& y, bool lad) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double e = y[i] - t.predict(x.row(i));
    s += lad ? std::abs(e) : e * e;
  }
  return s;
}

}  // namespace

TEST_CASE("depth-0 LAD tree is the median") {
  const Matrix x = column({0.0, 1.0, 2.0});
  const std::vector<double> y{1.0, 2.0, 100.0};
  const Tree t = fit_tree(x, y, {SplitCriterion::LeastAbsolute, 0, 1});
  CHECK(t.nodes().size() == 1);
  CHECK(t.predict(std::vector<double>{5.0}) == 2.0);
}

TEST_CASE("step data gives the zero-error stump") {
  const Matrix x = column({0.0, 1.0, 2.0, 3.0});
  const std::vector<double> y{0.0, 0.0, 10.0, 10.0};
  const Tree t = fit_tree(x, y, {SplitCriterion::LeastSquares, 1, 1});
  REQUIRE(t.nodes()[0].feature == 0);
  CHECK(t.nodes()[0].threshold == 1.5);
  CHECK(t.predict(std::vector<double>{1.0}) == 0.0);
  CHECK(t.predict(std::vector<double>{3.0}) == 10.0);
  CHECK(training_impurity(t, x, y, false) == 0.0);
}

TEST_CASE("constant response is a single leaf") {
  const Matrix x = column({0.0, 1.0, 2.0, 3.0});
  const std::vector<double> y(4, 7.0);
  for (auto c : {SplitCriterion::LeastSquares, SplitCriterion::LeastAbsolute}) {
    const Tree t = fit_tree(x, y, {c, 3, 1});
    CHECK(t.nodes().size() == 1);
    CHECK(t.predict(std::vector<double>{0.5}) == 7.0);
  }
}

TEST_CASE("prediction errors") {
  const Tree t = fit_tree(column({0.0, 1.0, 2.0, 3.0}), std::vector<double>{0, 0, 10, 10},
                          {SplitCriterion::LeastSquares, 1, 1});
  CHECK_THROWS_AS(t.predict(std::vector<double>{NAN}), DataError);
  CHECK_THROWS_AS(t.predict(std::vector<double>{}), DataError);
  CHECK(Tree::leaf(2.0).predict(std::vector<double>{}) == 2.0);
  CHECK_THROWS_AS(fit_tree(Matrix(0, 1), std::vector<double>{}, {}), DataError);
}

TEST_CASE("stumps equal exhaustive enumeration") {
  std::mt19937_64 rng(1234);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 2 + rng() % 49;
    const std::size_t p = 1 + rng() % 3;
    const int min_node = 1 + static_cast<int>(rng() % 4);
    const Matrix x = testutil::random_matrix(n, p, rng);
    const auto y = testutil::random_vector(n, rng);
    for (bool lad : {false, true}) {
      const auto crit = lad ? SplitCriterion::LeastAbsolute : SplitCriterion::LeastSquares;
      const Tree t = fit_tree(x, y, {crit, 1, min_node, Execution::Serial});
      const auto o = testutil::oracle_stump(x, y, lad, min_node);
      const auto& root = t.nodes()[0];
      if (o.feature < 0 || root.feature < 0) {
        REQUIRE(root.feature == o.feature);
        CHECK(root.value == o.root);
        continue;
      }
      CHECK(root.feature == o.feature);
      CHECK(root.threshold == o.threshold);
      CHECK(t.nodes()[static_cast<std::size_t>(root.left)].value == o.left);
      CHECK(t.nodes()[static_cast<std::size_t>(root.right)].value == o.right);
    }
  }
}

TEST_CASE("ties go to the lowest feature and threshold") {
  Matrix x(4, 2);
  for (std::size_t i = 0; i < 4; ++i) {
    x(i, 0) = static_cast<double>(i);
    x(i, 1) = static_cast<double>(i);
  }
  const std::vector<double> y{0.0, 0.0, 1.0, 1.0};
  const Tree t = fit_tree(x, y, {SplitCriterion::LeastSquares, 1, 1});
  CHECK(t.nodes()[0].feature == 0);
  // Symmetric response: splits at 0.5 and 2.5 tie, the lower one wins.
  const std::vector<double> ys{0.0, 1.0, 1.0, 0.0};
  const Tree u = fit_tree(column({0.0, 1.0, 2.0, 3.0}), ys, {SplitCriterion::LeastSquares, 1, 1});
  CHECK(u.nodes()[0].threshold == 0.5);
}

TEST_CASE("depth and min_node limits") {
  std::mt19937_64 rng(9);
  const Matrix x = testutil::random_matrix(80, 3, rng);
  const auto y = testutil::random_vector(80, rng);
  for (int depth = 0; depth <= 4; ++depth) {
    for (int m : {1, 5, 20}) {
      const Tree t = fit_tree(x, y, {SplitCriterion::LeastSquares, depth, m});
      CHECK(t.depth() <= depth);
      std::vector<int> counts(t.nodes().size(), 0);
      for (std::size_t i = 0; i < x.rows(); ++i) {
        int id = 0;
        while (!t.nodes()[static_cast<std::size_t>(id)].is_leaf()) {
          const auto& nd = t.nodes()[static_cast<std::size_t>(id)];
          id = x(i, static_cast<std::size_t>(nd.feature)) <= nd.threshold ? nd.left : nd.right;
        }
        ++counts[static_cast<std::size_t>(id)];
      }
      for (std::size_t id = 0; id < counts.size(); ++id) {
        if (t.nodes()[id].is_leaf()) CHECK(counts[id] >= m);
      }
    }
  }
}

TEST_CASE("deeper trees never raise training impurity") {
  std::mt19937_64 rng(10);
  for (int k = 0; k < 10; ++k) {
    const Matrix x = testutil::random_matrix(60, 3, rng);
    const auto y = testutil::random_vector(60, rng);
    for (bool lad : {false, true}) {
      const auto crit = lad ? SplitCriterion::LeastAbsolute : SplitCriterion::LeastSquares;
      double prev = INFINITY;
      for (int d = 0; d <= 4; ++d) {
        const double imp = training_impurity(fit_tree(x, y, {crit, d, 2}), x, y, lad);
        CHECK(imp <= prev + 1e-9);
        prev = imp;
      }
    }
  }
}

TEST_CASE("serial and parallel fits agree") {
  std::mt19937_64 rng(77);
  const Matrix x = testutil::random_matrix(300, 8, rng);
  const auto y = testutil::random_vector(300, rng);
  for (auto c : {SplitCriterion::LeastSquares, SplitCriterion::LeastAbsolute}) {
    const FeatureIndex index(x);
    CHECK(fit_tree(index, y, {c, 3, 5, Execution::Serial}) == fit_tree(index, y, {c, 3, 5, Execution::Parallel}));
  }
}

TEST_CASE("initializer selection") {
  const Dataset train = testutil::linear_dataset(200, 3, 5);
  Dataset val = testutil::linear_dataset(120, 3, 6);

  SUBCASE("only depth 0") {
    const auto s = select_init_tree(train, val, {0}, {10, 20});
    CHECK(s.depth == 0);
    CHECK(s.tree.nodes().size() == 1);
    CHECK(s.tree.nodes()[0].value == median(train.y));
  }
  SUBCASE("signal prefers a deeper tree") {
    const auto s = select_init_tree(train, val, {0, 1, 2}, {10, 20, 30});
    CHECK(s.depth >= 1);
  }
  SUBCASE("a gross validation outlier does not change the choice") {
    const auto clean = select_init_tree(train, val, {0, 1, 2, 3}, {10, 20, 30});
    Dataset dirty = val;
    dirty.y[7] += 1000.0;
    const auto s = select_init_tree(train, dirty, {0, 1, 2, 3}, {10, 20, 30});
    CHECK(s.depth == clean.depth);
    CHECK(s.min_node == clean.min_node);
    CHECK(s.tree == clean.tree);
    CHECK(s.trimmed_val.size() < dirty.size());
  }
  SUBCASE("depth 0 must be a candidate") {
    CHECK_THROWS_AS(select_init_tree(train, val, {1, 2}, {10}), UsageError);
  }
}
