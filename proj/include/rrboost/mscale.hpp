#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rrboost/losses.hpp"

namespace rrboost {

inline constexpr double kScaleTolerance = 1e-10;
inline constexpr int kScaleMaxIterations = 200;

struct ScaleSolution {
  double sigma = 0.0;
  int n_iterations = 0;
  /// |mean rho0(r / sigma) - kappa| at the returned sigma.
  double equation_residual = 0.0;
};

/// Solves mean_i rho0(r_i / sigma) = kappa for sigma by bisection on log(sigma).
///
/// The left-hand side is continuous and non-increasing in sigma. Without a
/// hint the initial bracket is [median|r| * 1e-6, max|r| * 10]; with a hint
/// it is [hint / 2, 2 * hint]. Either bracket is expanded geometrically until
/// it straddles kappa. Iteration stops once the equation residual is below
/// `tol`, the bracket collapses to machine precision, or after
/// kScaleMaxIterations bisections.
///
/// Throws DegenerateScale when every residual is zero or, for bounded rho0,
/// when the fraction of exact zeros is at least 1 - kappa. Throws NoRoot when
/// the bracket cannot be expanded to straddle kappa.
ScaleSolution solve_mscale(std::span<const double> residuals, const LossSpec& rho0, double kappa,
                           double tol = kScaleTolerance,
                           std::optional<double> hint = std::nullopt);

/// Convenience overload using rho0.kappa.
ScaleSolution solve_mscale(std::span<const double> residuals, const LossSpec& rho0);

/// Gradient of the M-scale with respect to the fitted values:
/// g_l = -C psi0(r_l / sigma), C = [sum_i psi0(r_i / sigma) r_i / sigma]^-1.
///
/// Throws AllOutlying when the bracketed sum is at most 1e-12 * n.
std::vector<double> mscale_gradient(std::span<const double> residuals, double sigma,
                                    const LossSpec& rho0);

/// Mean of rho(r_i / sigma); the left-hand side of the M-scale equation.
double mean_rho(std::span<const double> residuals, double sigma, const LossSpec& rho);

}  // namespace rrboost
