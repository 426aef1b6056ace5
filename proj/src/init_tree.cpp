#include "rrboost/init_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rrboost/errors.hpp"

namespace rrboost {

namespace {

double trimmed_rmse(const Tree& tree, const Dataset& val, const std::vector<std::size_t>& keep) {
  double s = 0.0;
  for (auto i : keep) {
    const double e = tree.predict(val.x.row(i)) - val.y[i];
    s += e * e;
  }
  return std::sqrt(s / static_cast<double>(keep.size()));
}

}  // namespace

InitSelection select_init_tree(const Dataset& train, const FeatureIndex& train_index,
                               const Dataset& val, const std::vector<int>& depths,
                               const std::vector<int>& min_nodes, const TrimOptions& trim,
                               Execution exec) {
  if (std::find(depths.begin(), depths.end(), 0) == depths.end()) {
    throw UsageError("initializer depth set must include 0");
  }
  if (val.size() == 0) throw DataError("validation set is empty");

  TreeParams params{SplitCriterion::LeastAbsolute, 0, 1, exec};
  const Tree median_tree = fit_tree(train_index, train.y, params);
  const auto median_pred = median_tree.predict(val.x, exec);
  auto keep = trim_validation(median_pred, val.y, trim);
  if (keep.empty()) throw DataError("trimming removed every validation row");

  InitSelection best{median_tree, 0, 0, keep, trimmed_rmse(median_tree, val, keep)};

  std::vector<int> ds(depths.begin(), depths.end());
  std::vector<int> ms(min_nodes.begin(), min_nodes.end());
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());

  for (int d : ds) {
    if (d <= 0) continue;
    for (int m : ms) {
      params.max_depth = d;
      params.min_node = m;
      Tree candidate = fit_tree(train_index, train.y, params);
      const double score = trimmed_rmse(candidate, val, keep);
      // Candidates arrive in (depth, min_node) order, so strict < keeps the
      // simpler model on ties.
      if (score < best.val_rmse) {
        best.tree = std::move(candidate);
        best.depth = d;
        best.min_node = m;
        best.val_rmse = score;
      }
    }
  }
  return best;
}

InitSelection select_init_tree(const Dataset& train, const Dataset& val,
                               const std::vector<int>& depths, const std::vector<int>& min_nodes) {
  const FeatureIndex index(train.x);
  return select_init_tree(train, index, val, depths, min_nodes);
}

}  // namespace rrboost
