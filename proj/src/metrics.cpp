#include "rrboost/metrics.hpp"

#include <cmath>

#include "rrboost/errors.hpp"

namespace rrboost {

double rmse(std::span<const double> predictions, std::span<const double> y) {
  if (predictions.size() != y.size()) throw DataError("predictions and responses differ in length");
  if (y.empty()) throw DataError("rmse of an empty set");
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double e = predictions[i] - y[i];
    s += e * e;
  }
  return std::sqrt(s / static_cast<double>(y.size()));
}

double trmse(std::span<const double> predictions, std::span<const double> y, const TrimOptions& opts) {
  const auto keep = trim_validation(predictions, y, opts);
  if (keep.empty()) throw DataError("trimming removed every row");
  double s = 0.0;
  for (auto i : keep) {
    const double e = predictions[i] - y[i];
    s += e * e;
  }
  return std::sqrt(s / static_cast<double>(keep.size()));
}

Summary summarize(std::span<const double> values) {
  if (values.size() < 2) throw DataError("summary needs at least two values");
  Summary out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  return out;
}

}  // namespace rrboost
