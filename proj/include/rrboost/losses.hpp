#pragma once

#include <string>
#include <string_view>

namespace rrboost {

enum class LossFamily { Tukey, Huber, Square, Absolute };

std::string_view to_string(LossFamily family);
LossFamily loss_family_from_string(std::string_view name);

/// A rho-family selector plus its tuning constants.
///
/// `c` is ignored by Square and Absolute. `kappa` is only used when the
/// loss acts as rho0 in the M-scale equation.
struct LossSpec {
  LossFamily family = LossFamily::Tukey;
  double c = 4.685;
  double kappa = 0.5;

  static LossSpec tukey(double c, double kappa = 0.5) { return {LossFamily::Tukey, c, kappa}; }
  static LossSpec huber(double c) { return {LossFamily::Huber, c, 0.5}; }
  static LossSpec square(double kappa = 1.0) { return {LossFamily::Square, 0.0, kappa}; }
  static LossSpec absolute(double kappa = 1.0) { return {LossFamily::Absolute, 0.0, kappa}; }

  bool bounded() const { return family == LossFamily::Tukey; }

  friend bool operator==(const LossSpec&, const LossSpec&) = default;
};

/// Tukey bisquare with c = 1.547, kappa = 1/2: the high-breakdown rho0.
inline constexpr double kTukeyScaleC = 1.547;
/// Tukey bisquare with c = 4.685: the efficient rho1.
inline constexpr double kTukeyEfficientC = 4.685;

/// Throws DataError on non-finite u, UsageError on c <= 0 for Tukey/Huber.
double rho(const LossSpec& spec, double u);
double psi(const LossSpec& spec, double u);

/// Unchecked versions for inner loops whose inputs were already validated.
double rho_unchecked(const LossSpec& spec, double u) noexcept;
double psi_unchecked(const LossSpec& spec, double u) noexcept;

void validate(const LossSpec& spec);

}  // namespace rrboost
