#pragma once

#include <vector>

#include "rrboost/dataset.hpp"
#include "rrboost/importance.hpp"
#include "rrboost/tree.hpp"

namespace rrboost {

struct InitSelection {
  Tree tree;
  int depth = 0;
  int min_node = 0;
  /// Validation rows kept after 3-MAD trimming against the median fit.
  std::vector<std::size_t> trimmed_val;
  double val_rmse = 0.0;
};

/// Chooses the LADTree initializer.
///
/// Candidates are the depth-0 tree (the response median) plus every
/// (depth, min_node) pair with depth > 0. Validation rows whose residual from
/// the median fit deviates from the residual median by more than 3 MAD are
/// trimmed; the candidate with the smallest RMSE on the remaining rows wins,
/// ties going to the smaller depth and then the smaller min_node.
InitSelection select_init_tree(const Dataset& train, const FeatureIndex& train_index,
                               const Dataset& val, const std::vector<int>& depths,
                               const std::vector<int>& min_nodes, const TrimOptions& trim = {},
                               Execution exec = Execution::Parallel);

InitSelection select_init_tree(const Dataset& train, const Dataset& val,
                               const std::vector<int>& depths, const std::vector<int>& min_nodes);

}  // namespace rrboost
