#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rrboost/dataset.hpp"

namespace rrboost {

enum class SplitCriterion {
  /// Sum of squared deviations from child means; leaves hold means.
  LeastSquares,
  /// Sum of absolute deviations from child medians; leaves hold medians.
  LeastAbsolute,
};

/// Whether data-parallel kernels may use the OpenMP pool.
enum class Execution { Serial, Parallel };

struct TreeNode {
  /// -1 marks a leaf.
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Binary regression tree with numeric thresholds and constant leaves.
/// Rows with x[feature] <= threshold go left. Node 0 is the root.
class Tree {
 public:
  Tree() : nodes_{TreeNode{}} {}
  explicit Tree(std::vector<TreeNode> nodes);

  static Tree leaf(double value);

  /// Throws DataError on a NaN feature or a row too short for the tree.
  double predict(std::span<const double> x) const;
  std::vector<double> predict(const Matrix& x, Execution exec = Execution::Parallel) const;

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  int depth() const;
  std::size_t num_leaves() const;
  /// Largest feature index referenced by a split, or -1 for a single leaf.
  int max_feature_index() const;
  bool uses_feature(std::size_t j) const;

  friend bool operator==(const Tree&, const Tree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

/// Per-feature row orderings of a feature matrix, sorted by value (ties by
/// row index). Built once per training matrix and reused by every tree fit.
/// Holds a reference: the matrix must outlive the index.
class FeatureIndex {
 public:
  explicit FeatureIndex(const Matrix& x);

  const Matrix& x() const { return *x_; }
  std::size_t rows() const { return x_->rows(); }
  std::size_t cols() const { return x_->cols(); }
  std::span<const std::uint32_t> order(std::size_t j) const {
    return {order_.data() + j * rows(), rows()};
  }
  std::span<const double> sorted_values(std::size_t j) const {
    return {values_.data() + j * rows(), rows()};
  }

 private:
  const Matrix* x_;
  std::vector<std::uint32_t> order_;
  std::vector<double> values_;
};

struct TreeParams {
  SplitCriterion criterion = SplitCriterion::LeastSquares;
  int max_depth = 1;
  /// Both children of every split must hold at least this many rows.
  int min_node = 1;
  Execution exec = Execution::Parallel;
};

/// Greedy top-down induction. At each node the (feature, threshold) pair
/// minimizing the criterion's total child impurity is chosen; thresholds are
/// midpoints between consecutive distinct values; ties go to the lowest
/// feature, then the lowest threshold. Growth stops at max_depth, at fewer
/// than 2 * min_node rows, or when no split lowers impurity.
Tree fit_tree(const FeatureIndex& index, std::span<const double> y, const TreeParams& params);
Tree fit_tree(const Matrix& x, std::span<const double> y, const TreeParams& params);

inline double predict_tree(const Tree& tree, std::span<const double> x) { return tree.predict(x); }

double median(std::span<const double> values);
double mean(std::span<const double> values);

}  // namespace rrboost
