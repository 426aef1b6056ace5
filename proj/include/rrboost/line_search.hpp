#pragma once

#include <functional>
#include <optional>

namespace rrboost {

struct LineSearchResult {
  double alpha = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

inline constexpr double kLineSearchRelTol = 1e-6;
inline constexpr int kMaxBracketDoublings = 30;

/// Minimizes a one-dimensional objective over alpha >= 0.
///
/// The bracket [0, B] starts at B = bracket_hint and doubles (at most 30
/// times) while the objective keeps decreasing at B; golden-section search
/// then shrinks it to 1e-6 * B. The best probed point is returned, and alpha
/// = 0 is always a candidate, so value <= objective(0). `value_at_zero`
/// skips evaluating objective(0) when the caller already knows it.
///
/// Throws NumericalError if a probe is non-finite.
LineSearchResult line_search(const std::function<double(double)>& objective,
                             double bracket_hint = 1.0,
                             std::optional<double> value_at_zero = std::nullopt);

}  // namespace rrboost
