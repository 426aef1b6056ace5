#include "rrboost/line_search.hpp"

#include <cmath>

#include "rrboost/errors.hpp"

namespace rrboost {

LineSearchResult line_search(const std::function<double(double)>& objective, double bracket_hint,
                             std::optional<double> value_at_zero) {
  if (!(bracket_hint > 0.0) || !std::isfinite(bracket_hint)) {
    throw UsageError("line search bracket hint must be positive");
  }
  LineSearchResult best;
  auto eval = [&](double a) {
    const double v = objective(a);
    ++best.evaluations;
    if (!std::isfinite(v)) throw NumericalError("line search objective is not finite");
    if (v < best.value) {
      best.value = v;
      best.alpha = a;
    }
    return v;
  };

  if (value_at_zero) {
    if (!std::isfinite(*value_at_zero)) throw NumericalError("line search objective is not finite at 0");
    best.value = *value_at_zero;
  } else {
    best.value = objective(0.0);
    ++best.evaluations;
    if (!std::isfinite(best.value)) throw NumericalError("line search objective is not finite at 0");
  }
  best.alpha = 0.0;

  double upper = bracket_hint;
  double previous = best.value;
  double f_upper = eval(upper);
  for (int k = 0; k < kMaxBracketDoublings && f_upper < previous; ++k) {
    previous = f_upper;
    upper *= 2.0;
    f_upper = eval(upper);
  }

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0;
  double b = upper;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  const double width = kLineSearchRelTol * upper;
  while (b - a > width) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
  }
  return best;
}

}  // namespace rrboost
