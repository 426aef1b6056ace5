#pragma once

#include <span>

#include "rrboost/importance.hpp"

namespace rrboost {

double rmse(std::span<const double> predictions, std::span<const double> y);

/// RMSE over the rows kept by trim_validation.
double trmse(std::span<const double> predictions, std::span<const double> y,
             const TrimOptions& opts = {});

struct Summary {
  double mean = 0.0;
  /// Sample standard deviation (n - 1 denominator).
  double sd = 0.0;
};

Summary summarize(std::span<const double> values);

}  // namespace rrboost
