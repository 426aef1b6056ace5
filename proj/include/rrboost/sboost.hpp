#pragma once

#include "rrboost/dataset.hpp"
#include "rrboost/ensemble.hpp"
#include "rrboost/mscale.hpp"
#include "rrboost/tree.hpp"

namespace rrboost {

struct StageOneResult {
  /// Truncated at the Stage-1 stopping time.
  Ensemble model;
  /// Training M-scale re-solved at the stopping time.
  ScaleSolution scale;
  /// Validation M-scale at the stopping time (+inf if it could not be solved).
  double sigma_val = 0.0;
  FitTrace trace;
  Termination termination = Termination::Completed;
  std::size_t stop = 0;
};

/// Stage 1: gradient boosting on the residual M-scale.
///
/// Each iteration fits a least-squares tree to the negative M-scale gradient,
/// picks the step that minimizes the re-solved training M-scale, and records
/// the validation M-scale (same rho0 and kappa). The returned ensemble is cut
/// at the first minimum of the validation trace.
StageOneResult sboost_train(const Dataset& train, const FeatureIndex& train_index,
                            const Dataset& val, const Tree& init, const BoostConfig& config);
StageOneResult sboost_train(const Dataset& train, const Dataset& val, const Tree& init,
                            const BoostConfig& config);

}  // namespace rrboost
