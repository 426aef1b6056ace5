#pragma once

#include <span>
#include <vector>

#include "rrboost/dataset.hpp"
#include "rrboost/ensemble.hpp"
#include "rrboost/sboost.hpp"

namespace rrboost {

/// Stage-2 gradient: g_i = -(1 / sigma) psi1(r_i / sigma).
std::vector<double> stage2_gradient(std::span<const double> residuals, double sigma,
                                    const LossSpec& rho1);

/// sum_i rho1(r_i / sigma).
double stage2_objective(std::span<const double> residuals, double sigma, const LossSpec& rho1);

/// Stage 2 only: M-type boosting with bounded rho1 at the frozen Stage-1
/// scale, continuing from `stage1.model`. The validation loss divides by the
/// Stage-1 validation scale at its stopping time.
FitResult mstage_train(const Dataset& train, const FeatureIndex& train_index, const Dataset& val,
                       const StageOneResult& stage1, const BoostConfig& config);

/// Full two-stage fit: LADTree initializer, SBoost, then the M stage.
FitResult rrboost_train(const Dataset& train, const Dataset& val, const BoostConfig& config);
FitResult rrboost_train(const Dataset& train, const FeatureIndex& train_index, const Dataset& val,
                        const BoostConfig& config);

/// Stage 1 alone wrapped as a FitResult (the SBoost predictor).
FitResult sboost_fit(const Dataset& train, const FeatureIndex& train_index, const Dataset& val,
                     const BoostConfig& config);

}  // namespace rrboost
