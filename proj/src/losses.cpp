#include "rrboost/losses.hpp"

#include <cmath>

#include "rrboost/errors.hpp"

namespace rrboost {

std::string_view to_string(LossFamily family) {
  switch (family) {
    case LossFamily::Tukey: return "tukey";
    case LossFamily::Huber: return "huber";
    case LossFamily::Square: return "square";
    case LossFamily::Absolute: return "absolute";
  }
  return "unknown";
}

LossFamily loss_family_from_string(std::string_view name) {
  if (name == "tukey") return LossFamily::Tukey;
  if (name == "huber") return LossFamily::Huber;
  if (name == "square") return LossFamily::Square;
  if (name == "absolute") return LossFamily::Absolute;
  throw DataError("unknown loss family '" + std::string(name) + "'");
}

void validate(const LossSpec& spec) {
  const bool needs_c = spec.family == LossFamily::Tukey || spec.family == LossFamily::Huber;
  if (needs_c && !(spec.c > 0.0 && std::isfinite(spec.c))) {
    throw UsageError("loss tuning constant c must be positive and finite");
  }
}

double rho_unchecked(const LossSpec& spec, double u) noexcept {
  switch (spec.family) {
    case LossFamily::Tukey: {
      const double a = std::abs(u);
      if (a > spec.c) return 1.0;
      const double v = u / spec.c;
      const double w = 1.0 - v * v;
      return 1.0 - w * w * w;
    }
    case LossFamily::Huber: {
      const double a = std::abs(u);
      if (a <= spec.c) return 0.5 * u * u;
      return spec.c * a - 0.5 * spec.c * spec.c;
    }
    case LossFamily::Square: return u * u;
    case LossFamily::Absolute: return std::abs(u);
  }
  return 0.0;
}

double psi_unchecked(const LossSpec& spec, double u) noexcept {
  switch (spec.family) {
    case LossFamily::Tukey: {
      if (std::abs(u) > spec.c) return 0.0;
      const double v = u / spec.c;
      const double w = 1.0 - v * v;
      return 6.0 * u / (spec.c * spec.c) * w * w;
    }
    case LossFamily::Huber:
      if (u > spec.c) return spec.c;
      if (u < -spec.c) return -spec.c;
      return u;
    case LossFamily::Square: return 2.0 * u;
    case LossFamily::Absolute: return u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
  }
  return 0.0;
}

namespace {
void check_argument(const LossSpec& spec, double u) {
  validate(spec);
  if (!std::isfinite(u)) throw DataError("non-finite residual passed to loss function");
}
}  // namespace

double rho(const LossSpec& spec, double u) {
  check_argument(spec, u);
  return rho_unchecked(spec, u);
}

double psi(const LossSpec& spec, double u) {
  check_argument(spec, u);
  return psi_unchecked(spec, u);
}

}  // namespace rrboost
