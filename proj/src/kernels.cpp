#include "rrboost/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rrboost::kernels {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void prefix_abs_deviation(std::span<const double> values, std::span<double> out) {
  // lower holds the smaller half (and the median when the count is odd).
  std::priority_queue<double> lower;
  std::priority_queue<double, std::vector<double>, std::greater<>> upper;
  double sum_lower = 0.0;
  double sum_upper = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double v = values[k];
    if (lower.empty() || v <= lower.top()) {
      lower.push(v);
      sum_lower += v;
    } else {
      upper.push(v);
      sum_upper += v;
    }
    if (lower.size() > upper.size() + 1) {
      const double t = lower.top();
      lower.pop();
      sum_lower -= t;
      upper.push(t);
      sum_upper += t;
    } else if (upper.size() > lower.size()) {
      const double t = upper.top();
      upper.pop();
      sum_upper -= t;
      lower.push(t);
      sum_lower += t;
    }
    double sad = sum_upper - sum_lower;
    if (lower.size() > upper.size()) sad += lower.top();
    out[k] = std::max(sad, 0.0);
  }
}

namespace {

// Candidates within this relative margin of the incumbent count as ties, so the
// earlier feature and threshold win regardless of summation order.
constexpr double kTieTolerance = 1e-12;

bool improves(double candidate, const SplitChoice& best) {
  return best.feature < 0 || candidate < best.impurity - kTieTolerance * std::abs(best.impurity);
}

double midpoint_threshold(double a, double b) {
  const double mid = 0.5 * (a + b);
  return mid < b ? mid : a;
}

struct Workspace {
  std::vector<double> values;
  std::vector<double> targets;
  std::vector<double> left;
  std::vector<double> right;
  std::vector<double> reversed;
};

Workspace& workspace() {
  thread_local Workspace ws;
  return ws;
}

}  // namespace

SplitChoice scan_feature(const FeatureIndex& index, std::size_t feature, const NodeRows& node,
                         std::span<const double> targets, SplitCriterion criterion, int min_node) {
  SplitChoice best;
  const auto min_rows = static_cast<std::size_t>(std::max(min_node, 1));
  if (node.count < 2 * min_rows) return best;

  Workspace& ws = workspace();
  ws.values.clear();
  ws.targets.clear();
  const auto order = index.order(feature);
  const auto sorted = index.sorted_values(feature);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto row = order[k];
    if (node.node_of[row] == node.label) {
      ws.values.push_back(sorted[k]);
      ws.targets.push_back(targets[row]);
    }
  }
  const std::size_t m = ws.values.size();
  if (m < 2 * min_rows) return best;
  const auto& vals = ws.values;
  const auto& ys = ws.targets;

  if (criterion == SplitCriterion::LeastSquares) {
    double total = 0.0;
    double total_sq = 0.0;
    for (double v : ys) {
      total += v;
      total_sq += v * v;
    }
    double s = 0.0;
    double sq = 0.0;
    for (std::size_t k = 1; k < m; ++k) {
      s += ys[k - 1];
      sq += ys[k - 1] * ys[k - 1];
      if (k < min_rows) continue;
      if (m - k < min_rows) break;
      if (!(vals[k - 1] < vals[k])) continue;
      const double nl = static_cast<double>(k);
      const double nr = static_cast<double>(m - k);
      const double sse_l = std::max(sq - s * s / nl, 0.0);
      const double rs = total - s;
      const double sse_r = std::max((total_sq - sq) - rs * rs / nr, 0.0);
      const double imp = sse_l + sse_r;
      if (improves(imp, best)) {
        best.impurity = imp;
        best.threshold = midpoint_threshold(vals[k - 1], vals[k]);
        best.feature = static_cast<int>(feature);
      }
    }
    return best;
  }

  ws.left.resize(m);
  ws.right.resize(m);
  ws.reversed.assign(ys.rbegin(), ys.rend());
  prefix_abs_deviation(ys, ws.left);
  prefix_abs_deviation(ws.reversed, ws.right);
  for (std::size_t k = min_rows; k + min_rows <= m; ++k) {
    if (!(vals[k - 1] < vals[k])) continue;
    // left = first k rows, right = last m - k rows
    const double imp = ws.left[k - 1] + ws.right[m - k - 1];
    if (improves(imp, best)) {
      best.impurity = imp;
      best.threshold = midpoint_threshold(vals[k - 1], vals[k]);
      best.feature = static_cast<int>(feature);
    }
  }
  return best;
}

namespace {

SplitChoice reduce(const std::vector<SplitChoice>& per_feature) {
  SplitChoice best;
  for (const auto& c : per_feature) {
    if (c.feature >= 0 && improves(c.impurity, best)) best = c;
  }
  return best;
}

}  // namespace

SplitChoice best_split_serial(const FeatureIndex& index, const NodeRows& node,
                              std::span<const double> targets, SplitCriterion criterion,
                              int min_node) {
  std::vector<SplitChoice> per_feature(index.cols());
  for (std::size_t j = 0; j < index.cols(); ++j) {
    per_feature[j] = scan_feature(index, j, node, targets, criterion, min_node);
  }
  return reduce(per_feature);
}

SplitChoice best_split_parallel(const FeatureIndex& index, const NodeRows& node,
                                std::span<const double> targets, SplitCriterion criterion,
                                int min_node) {
  const auto p = static_cast<std::ptrdiff_t>(index.cols());
  std::vector<SplitChoice> per_feature(index.cols());
#pragma omp parallel for schedule(dynamic, 4) if (p > 1)
  for (std::ptrdiff_t j = 0; j < p; ++j) {
    per_feature[static_cast<std::size_t>(j)] =
        scan_feature(index, static_cast<std::size_t>(j), node, targets, criterion, min_node);
  }
  return reduce(per_feature);
}

void for_each_row(std::size_t n, Execution exec, const std::function<void(std::size_t)>& f) {
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (count > 256)
  for (std::ptrdiff_t i = 0; i < count; ++i) f(static_cast<std::size_t>(i));
}

}  // namespace rrboost::kernels
