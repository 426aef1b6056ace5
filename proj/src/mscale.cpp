#include "rrboost/mscale.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "rrboost/errors.hpp"

namespace rrboost {

double mean_rho(std::span<const double> residuals, double sigma, const LossSpec& rho) {
  double sum = 0.0;
  const double inv = 1.0 / sigma;
  for (double r : residuals) sum += rho_unchecked(rho, r * inv);
  return sum / static_cast<double>(residuals.size());
}

namespace {

constexpr int kMaxBracketExpansions = 200;
constexpr double kBracketFactor = 4.0;

double median_abs(std::span<const double> residuals) {
  std::vector<double> a(residuals.size());
  std::transform(residuals.begin(), residuals.end(), a.begin(), [](double r) { return std::abs(r); });
  const auto mid = a.begin() + static_cast<std::ptrdiff_t>(a.size() / 2);
  std::nth_element(a.begin(), mid, a.end());
  return *mid;
}

}  // namespace

ScaleSolution solve_mscale(std::span<const double> residuals, const LossSpec& rho0, double kappa,
                           double tol, std::optional<double> hint) {
  validate(rho0);
  if (residuals.empty()) throw DataError("M-scale of an empty residual vector");
  const double sup = rho0.bounded() ? 1.0 : std::numeric_limits<double>::infinity();
  if (!(kappa > 0.0) || kappa > sup) throw UsageError("kappa must lie in (0, sup rho0]");

  std::size_t zeros = 0;
  double max_abs = 0.0;
  for (double r : residuals) {
    if (!std::isfinite(r)) throw DataError("non-finite residual in M-scale equation");
    if (r == 0.0) ++zeros;
    max_abs = std::max(max_abs, std::abs(r));
  }
  const auto n = static_cast<double>(residuals.size());
  if (zeros == residuals.size()) throw DegenerateScale("all residuals are exactly zero");
  if (rho0.bounded() && static_cast<double>(zeros) / n >= 1.0 - kappa) {
    throw DegenerateScale("fraction of zero residuals leaves no positive M-scale root");
  }

  auto f = [&](double s) { return mean_rho(residuals, s, rho0) - kappa; };

  double lo = 0.0;
  double hi = 0.0;
  if (hint && *hint > 0.0 && std::isfinite(*hint)) {
    lo = *hint / 2.0;
    hi = *hint * 2.0;
  } else {
    const double med = median_abs(residuals);
    lo = (med > 0.0 ? med : max_abs) * 1e-6;
    hi = max_abs * 10.0;
  }

  ScaleSolution out;
  double f_lo = f(lo);
  for (int k = 0; f_lo < 0.0; ++k) {
    if (k == kMaxBracketExpansions) throw NoRoot("M-scale bracket: lower end never exceeds kappa");
    hi = lo;
    lo /= kBracketFactor;
    f_lo = f(lo);
  }
  double f_hi = f(hi);
  for (int k = 0; f_hi > 0.0; ++k) {
    if (k == kMaxBracketExpansions) throw NoRoot("M-scale bracket: upper end never drops below kappa");
    lo = hi;
    f_lo = f_hi;
    hi *= kBracketFactor;
    f_hi = f(hi);
  }

  double best = std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
  double best_res = std::min(std::abs(f_lo), std::abs(f_hi));
  int it = 0;
  while (best_res >= tol && it < kScaleMaxIterations) {
    ++it;
    const double mid = std::sqrt(lo) * std::sqrt(hi);
    if (!(mid > lo && mid < hi)) break;
    const double fm = f(mid);
    if (std::abs(fm) < best_res) {
      best_res = std::abs(fm);
      best = mid;
    }
    if (fm > 0.0) {
      lo = mid;
    } else if (fm < 0.0) {
      hi = mid;
    } else {
      break;
    }
  }
  out.sigma = best;
  out.n_iterations = it;
  out.equation_residual = best_res;
  assert(out.sigma > 0.0);
  return out;
}

ScaleSolution solve_mscale(std::span<const double> residuals, const LossSpec& rho0) {
  return solve_mscale(residuals, rho0, rho0.kappa);
}

std::vector<double> mscale_gradient(std::span<const double> residuals, double sigma,
                                    const LossSpec& rho0) {
  validate(rho0);
  if (!(sigma > 0.0)) throw UsageError("mscale_gradient requires sigma > 0");
  const double inv = 1.0 / sigma;
  std::vector<double> g(residuals.size());
  double denom = 0.0;
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    const double u = residuals[i] * inv;
    const double p = psi_unchecked(rho0, u);
    g[i] = p;
    denom += p * u;
  }
  if (!(denom > 1e-12 * static_cast<double>(residuals.size()))) {
    throw AllOutlying("every residual lies in the flat region of rho0");
  }
  const double c_t = 1.0 / denom;
  for (double& v : g) v = -c_t * v;
  return g;
}

}  // namespace rrboost
