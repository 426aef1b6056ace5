#include "rrboost/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rrboost/errors.hpp"
#include "rrboost/kernels.hpp"

namespace rrboost {

double mean(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double median(std::span<const double> values) {
  if (values.empty()) throw DataError("median of an empty vector");
  std::vector<double> a(values.begin(), values.end());
  const std::size_t n = a.size();
  const auto upper = a.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(a.begin(), upper, a.end());
  const double hi = *upper;
  if (n % 2 == 1) return hi;
  const double lo = *std::max_element(a.begin(), upper);
  return 0.5 * (lo + hi);
}

Tree::Tree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw DataError("tree must have at least one node");
  const int n = static_cast<int>(nodes_.size());
  for (const auto& node : nodes_) {
    if (node.is_leaf()) continue;
    if (node.left <= 0 || node.left >= n || node.right <= 0 || node.right >= n) {
      throw DataError("tree node child index out of range");
    }
  }
}

Tree Tree::leaf(double value) {
  TreeNode node;
  node.value = value;
  return Tree(std::vector<TreeNode>{node});
}

double Tree::predict(std::span<const double> x) const {
  const TreeNode* node = &nodes_[0];
  while (!node->is_leaf()) {
    const auto f = static_cast<std::size_t>(node->feature);
    if (f >= x.size()) throw DataError("feature row shorter than the tree requires");
    const double v = x[f];
    if (std::isnan(v)) throw DataError("missing feature value " + std::to_string(f + 1));
    node = &nodes_[static_cast<std::size_t>(v <= node->threshold ? node->left : node->right)];
  }
  return node->value;
}

std::vector<double> Tree::predict(const Matrix& x, Execution exec) const {
  std::vector<double> out(x.rows());
  kernels::for_each_row(x.rows(), exec, [&](std::size_t i) { out[i] = predict(x.row(i)); });
  return out;
}

int Tree::depth() const {
  std::vector<int> d(nodes_.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes_[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
    }
  }
  return best;
}

std::size_t Tree::num_leaves() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

int Tree::max_feature_index() const {
  int m = -1;
  for (const auto& n : nodes_) m = std::max(m, n.feature);
  return m;
}

bool Tree::uses_feature(std::size_t j) const {
  return std::any_of(nodes_.begin(), nodes_.end(),
                     [j](const TreeNode& n) { return n.feature == static_cast<int>(j); });
}

FeatureIndex::FeatureIndex(const Matrix& x) : x_(&x) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  order_.resize(n * p);
  values_.resize(n * p);
  std::vector<std::uint32_t> idx(n);
  for (std::size_t j = 0; j < p; ++j) {
    std::iota(idx.begin(), idx.end(), 0u);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return x(a, j) < x(b, j); });
    for (std::size_t k = 0; k < n; ++k) {
      order_[j * n + k] = idx[k];
      values_[j * n + k] = x(idx[k], j);
    }
  }
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const FeatureIndex& index, std::span<const double> y, const TreeParams& params)
      : index_(index), y_(y), params_(params), node_of_(y.size(), 0), shifted_(y.size(), 0.0) {}

  Tree build() {
    std::vector<std::uint32_t> rows(y_.size());
    std::iota(rows.begin(), rows.end(), 0u);
    nodes_.clear();
    next_label_ = 1;
    grow(rows, 0, 0);
    return Tree(std::move(nodes_));
  }

 private:
  double leaf_value(const std::vector<double>& ys) const {
    return params_.criterion == SplitCriterion::LeastSquares ? mean(ys) : median(ys);
  }

  double impurity(const std::vector<double>& shifted) const {
    if (params_.criterion == SplitCriterion::LeastSquares) {
      const double m = mean(shifted);
      double s = 0.0;
      for (double v : shifted) s += (v - m) * (v - m);
      return s;
    }
    const double med = median(shifted);
    double s = 0.0;
    for (double v : shifted) s += std::abs(v - med);
    return s;
  }

  int grow(const std::vector<std::uint32_t>& rows, int depth, int label) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    std::vector<double> ys(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) ys[k] = y_[rows[k]];
    nodes_[static_cast<std::size_t>(id)].value = leaf_value(ys);

    const auto min_rows = static_cast<std::size_t>(std::max(params_.min_node, 1));
    if (depth >= params_.max_depth || rows.size() < 2 * min_rows) return id;

    // Shift by the node's first response so constant nodes are exactly zero.
    const double shift = ys.front();
    std::vector<double> centered(ys.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      centered[k] = ys[k] - shift;
      shifted_[rows[k]] = centered[k];
    }
    const double parent = impurity(centered);
    if (!(parent > 0.0)) return id;

    for (auto r : rows) node_of_[r] = label;
    const kernels::NodeRows node{node_of_, label, rows.size()};
    const auto choice =
        params_.exec == Execution::Parallel
            ? kernels::best_split_parallel(index_, node, shifted_, params_.criterion, params_.min_node)
            : kernels::best_split_serial(index_, node, shifted_, params_.criterion, params_.min_node);
    if (choice.feature < 0 || !(choice.impurity < parent * (1.0 - 1e-10))) return id;

    std::vector<std::uint32_t> left_rows;
    std::vector<std::uint32_t> right_rows;
    const auto f = static_cast<std::size_t>(choice.feature);
    for (auto r : rows) {
      (index_.x()(r, f) <= choice.threshold ? left_rows : right_rows).push_back(r);
    }
    const int left_label = next_label_++;
    const int right_label = next_label_++;
    const int left = grow(left_rows, depth + 1, left_label);
    const int right = grow(right_rows, depth + 1, right_label);
    auto& node_ref = nodes_[static_cast<std::size_t>(id)];
    node_ref.feature = choice.feature;
    node_ref.threshold = choice.threshold;
    node_ref.left = left;
    node_ref.right = right;
    return id;
  }

  const FeatureIndex& index_;
  std::span<const double> y_;
  TreeParams params_;
  std::vector<int> node_of_;
  std::vector<double> shifted_;
  std::vector<TreeNode> nodes_;
  int next_label_ = 1;
};

}  // namespace

Tree fit_tree(const FeatureIndex& index, std::span<const double> y, const TreeParams& params) {
  if (y.empty()) throw DataError("cannot fit a tree on empty data");
  if (index.rows() != y.size()) throw DataError("feature rows and response length differ");
  if (params.max_depth < 0) throw UsageError("max_depth must be >= 0");
  for (double v : y) {
    if (!std::isfinite(v)) throw DataError("non-finite response passed to tree fit");
  }
  return TreeBuilder(index, y, params).build();
}

Tree fit_tree(const Matrix& x, std::span<const double> y, const TreeParams& params) {
  for (double v : x.data()) {
    if (!std::isfinite(v)) throw DataError("non-finite feature passed to tree fit");
  }
  const FeatureIndex index(x);
  return fit_tree(index, y, params);
}

}  // namespace rrboost
