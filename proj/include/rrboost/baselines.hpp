#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "rrboost/dataset.hpp"
#include "rrboost/ensemble.hpp"
#include "rrboost/tree.hpp"

namespace rrboost {

/// One of the four comparison boosters.
struct BaselineSpec {
  Method method = Method::L2;
  std::size_t t_max = 1500;
  int max_depth = 1;
  int min_node = 7;
  double gamma = 1.0;
  double bracket_hint = 1.0;
  /// Replaces the adaptive Huber threshold of MBoost / Robloss.
  std::optional<double> fixed_huber_threshold;
  Execution exec = Execution::Parallel;

  /// T_max = 1500 for stumps, 800 for deeper trees.
  static BaselineSpec for_method(Method method, int depth);
  void validate() const;
};

/// Type-7 empirical quantile (linear interpolation between order statistics).
double quantile_type7(std::span<const double> values, double q);

/// Mean absolute validation residual.
double average_absolute_deviation(std::span<const double> predictions, std::span<const double> y);

/// Huber threshold of the current iteration: the 90% quantile of |r| for
/// MBoost, the 1.438-scaled MAD of r for Robloss.
double adaptive_huber_threshold(Method method, std::span<const double> residuals);

FitResult baseline_train(const Dataset& train, const FeatureIndex& train_index, const Dataset& val,
                         const BaselineSpec& spec);
FitResult baseline_train(const Dataset& train, const Dataset& val, const BaselineSpec& spec);

}  // namespace rrboost
