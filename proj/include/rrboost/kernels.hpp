#pragma once

// Data-parallel inner loops. Each kernel has a serial reference and an
// OpenMP variant; both produce bit-identical results because parallelism is
// only over independent units (features, rows) and every reduction runs
// serially in a fixed order.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "rrboost/tree.hpp"

namespace rrboost::kernels {

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double impurity = std::numeric_limits<double>::infinity();
};

/// Rows that belong to the node being split: node_of[row] == label.
struct NodeRows {
  std::span<const int> node_of;
  int label = 0;
  std::size_t count = 0;
};

/// Best split of one feature for the rows of a node. `targets` are indexed by
/// row and already shifted by the node's reference value.
SplitChoice scan_feature(const FeatureIndex& index, std::size_t feature, const NodeRows& node,
                         std::span<const double> targets, SplitCriterion criterion, int min_node);

/// Best split over all features. Impurities within a relative 1e-12 of the
/// incumbent count as ties, which the lower feature and threshold win.
SplitChoice best_split_serial(const FeatureIndex& index, const NodeRows& node,
                              std::span<const double> targets, SplitCriterion criterion,
                              int min_node);
SplitChoice best_split_parallel(const FeatureIndex& index, const NodeRows& node,
                                std::span<const double> targets, SplitCriterion criterion,
                                int min_node);

/// Sum of absolute deviations from the running median for every prefix of
/// `values`: out[k] is the SAD of values[0..k].
void prefix_abs_deviation(std::span<const double> values, std::span<double> out);

/// out[i] = f(i) for every row, serially or across the OpenMP pool.
void for_each_row(std::size_t n, Execution exec, const std::function<void(std::size_t)>& f);

/// Number of threads an OpenMP parallel region would use (1 without OpenMP).
int max_threads();

}  // namespace rrboost::kernels
