#include "rrboost/sboost.hpp"

#include <cmath>
#include <limits>

#include "rrboost/errors.hpp"
#include "rrboost/line_search.hpp"

namespace rrboost {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> residuals_of(std::span<const double> y, std::span<const double> fitted) {
  std::vector<double> r(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) r[i] = y[i] - fitted[i];
  return r;
}

}  // namespace

StageOneResult sboost_train(const Dataset& train, const FeatureIndex& train_index,
                            const Dataset& val, const Tree& init, const BoostConfig& config) {
  config.validate();
  const LossSpec& rho0 = config.rho0;
  const double kappa = rho0.kappa;
  const double tol = config.scale_tol;

  StageOneResult out;
  out.model.method = Method::SBoost;
  out.model.init = init;
  out.model.gamma = config.gamma;
  out.model.stage1_loss = config.rho0;
  out.model.stage2_loss = config.rho1;

  std::vector<double> fitted = init.predict(train.x, config.exec);
  std::vector<double> fitted_val = init.predict(val.x, config.exec);
  std::vector<double> r = residuals_of(train.y, fitted);

  double sigma = solve_mscale(r, rho0, kappa, tol).sigma;
  double sigma_val_init = kInf;
  try {
    sigma_val_init = solve_mscale(residuals_of(val.y, fitted_val), rho0, kappa, tol).sigma;
  } catch (const NumericalError&) {
  }
  double last_val_sigma = sigma_val_init;

  std::vector<double> candidate(r.size());
  for (std::size_t t = 0; t < config.t1_max; ++t) {
    std::vector<double> g;
    try {
      g = mscale_gradient(r, sigma, rho0);
    } catch (const AllOutlying&) {
      out.termination = Termination::AllOutlying;
      break;
    }
    Tree tree = fit_negative_gradient(train_index, g, config.max_depth, config.min_node, config.exec);
    const std::vector<double> h = tree.predict(train.x, config.exec);

    auto objective = [&](double alpha) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        candidate[i] = train.y[i] - (fitted[i] + alpha * h[i]);
      }
      return solve_mscale(candidate, rho0, kappa, tol, sigma).sigma;
    };
    LineSearchResult ls;
    try {
      ls = line_search(objective, config.bracket_hint, sigma);
    } catch (const DegenerateScale&) {
      out.termination = Termination::Interpolation;
      break;
    }

    const double step = shrinkage_step(ls.alpha, config.gamma);
    for (std::size_t i = 0; i < r.size(); ++i) {
      fitted[i] += step * h[i];
      r[i] = train.y[i] - fitted[i];
    }
    const std::vector<double> h_val = tree.predict(val.x, config.exec);
    for (std::size_t i = 0; i < fitted_val.size(); ++i) fitted_val[i] += step * h_val[i];
    out.model.steps.push_back({ls.alpha, std::move(tree)});

    bool collapsed = false;
    if (config.gamma == 1.0) {
      // Identical residuals and hint as the accepted probe.
      sigma = ls.value;
    } else {
      try {
        sigma = solve_mscale(r, rho0, kappa, tol, sigma).sigma;
      } catch (const DegenerateScale&) {
        collapsed = true;
      }
    }

    double val_sigma = kInf;
    try {
      const auto hint = std::isfinite(last_val_sigma) ? std::optional<double>(last_val_sigma)
                                                      : std::nullopt;
      val_sigma = solve_mscale(residuals_of(val.y, fitted_val), rho0, kappa, tol, hint).sigma;
      last_val_sigma = val_sigma;
    } catch (const NumericalError&) {
    }
    out.trace.push(collapsed ? 0.0 : sigma, val_sigma, 1);
    if (collapsed) {
      out.termination = Termination::Interpolation;
      break;
    }
  }

  out.stop = out.trace.size() == 0 ? 0 : argmin_stop(out.trace.val_loss) + 1;
  out.model.steps.resize(out.stop);
  out.model.stage_boundary = out.stop;
  out.model.stop_index = out.stop;
  out.sigma_val = out.stop == 0 ? sigma_val_init : out.trace.val_loss[out.stop - 1];

  const auto fitted_stop = out.model.predict(train.x, config.exec);
  out.scale = solve_mscale(residuals_of(train.y, fitted_stop), rho0, kappa, tol);
  out.model.sigma_hat = out.scale.sigma;
  return out;
}

StageOneResult sboost_train(const Dataset& train, const Dataset& val, const Tree& init,
                            const BoostConfig& config) {
  const FeatureIndex index(train.x);
  return sboost_train(train, index, val, init, config);
}

}  // namespace rrboost
