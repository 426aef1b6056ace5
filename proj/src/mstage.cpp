#include "rrboost/mstage.hpp"

#include <cmath>

#include "rrboost/errors.hpp"
#include "rrboost/init_tree.hpp"
#include "rrboost/line_search.hpp"

namespace rrboost {

std::vector<double> stage2_gradient(std::span<const double> residuals, double sigma,
                                    const LossSpec& rho1) {
  validate(rho1);
  if (!(sigma > 0.0)) throw UsageError("stage-2 scale must be positive");
  std::vector<double> g(residuals.size());
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    g[i] = -psi(rho1, residuals[i] / sigma) / sigma;
  }
  return g;
}

double stage2_objective(std::span<const double> residuals, double sigma, const LossSpec& rho1) {
  double s = 0.0;
  for (double r : residuals) s += rho_unchecked(rho1, r / sigma);
  return s;
}

FitResult mstage_train(const Dataset& train, const FeatureIndex& train_index, const Dataset& val,
                       const StageOneResult& stage1, const BoostConfig& config) {
  config.validate();
  const LossSpec& rho1 = config.rho1;
  const double sigma = stage1.scale.sigma;
  if (!(sigma > 0.0)) throw DegenerateScale("stage-1 scale is not positive");
  // A failed validation solve falls back to the training scale.
  const double sigma_val =
      std::isfinite(stage1.sigma_val) && stage1.sigma_val > 0.0 ? stage1.sigma_val : sigma;

  FitResult out;
  out.model = stage1.model;
  out.model.method = Method::RRBoost;
  out.model.sigma_hat = sigma;
  out.model.stage2_loss = rho1;
  out.trace = stage1.trace;
  out.termination = stage1.termination;
  out.sigma_val = sigma_val;
  out.stage1_stop = stage1.stop;

  std::vector<double> fitted = out.model.predict(train.x, config.exec);
  std::vector<double> fitted_val = out.model.predict(val.x, config.exec);
  std::vector<double> r(train.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = train.y[i] - fitted[i];
  double objective_now = stage2_objective(r, sigma, rho1);

  std::vector<double> stage2_val;
  std::vector<double> candidate(r.size());
  std::vector<double> rv(val.size());
  int zero_steps = 0;
  for (std::size_t t = 0; t < config.t2_max; ++t) {
    const auto g = stage2_gradient(r, sigma, rho1);
    Tree tree = fit_negative_gradient(train_index, g, config.max_depth, config.min_node, config.exec);
    const std::vector<double> h = tree.predict(train.x, config.exec);

    auto objective = [&](double alpha) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        candidate[i] = train.y[i] - (fitted[i] + alpha * h[i]);
      }
      return stage2_objective(candidate, sigma, rho1);
    };
    const LineSearchResult ls = line_search(objective, config.bracket_hint, objective_now);

    const double step = shrinkage_step(ls.alpha, config.gamma);
    for (std::size_t i = 0; i < r.size(); ++i) {
      fitted[i] += step * h[i];
      r[i] = train.y[i] - fitted[i];
    }
    objective_now = config.gamma == 1.0 ? ls.value : stage2_objective(r, sigma, rho1);

    const std::vector<double> h_val = tree.predict(val.x, config.exec);
    for (std::size_t i = 0; i < rv.size(); ++i) {
      fitted_val[i] += step * h_val[i];
      rv[i] = val.y[i] - fitted_val[i];
    }
    const double val_loss = stage2_objective(rv, sigma_val, rho1) / static_cast<double>(rv.size());
    out.model.steps.push_back({ls.alpha, std::move(tree)});
    out.trace.push(objective_now, val_loss, 2);
    stage2_val.push_back(val_loss);

    zero_steps = ls.alpha == 0.0 ? zero_steps + 1 : 0;
    if (config.plateau_limit > 0 && zero_steps >= config.plateau_limit) {
      out.termination = Termination::Plateau;
      break;
    }
  }

  out.stage2_stop = stage2_val.empty() ? 0 : argmin_stop(stage2_val) + 1;
  out.model.stop_index = stage1.stop + out.stage2_stop;
  out.model.steps.resize(out.model.stop_index);
  return out;
}

FitResult rrboost_train(const Dataset& train, const FeatureIndex& train_index, const Dataset& val,
                        const BoostConfig& config) {
  config.validate();
  const auto init = select_init_tree(train, train_index, val, config.init_depths,
                                     config.init_min_nodes, TrimOptions{}, config.exec);
  const auto stage1 = sboost_train(train, train_index, val, init.tree, config);
  FitResult out = mstage_train(train, train_index, val, stage1, config);
  out.init_depth = init.depth;
  out.init_min_node = init.min_node;
  return out;
}

FitResult rrboost_train(const Dataset& train, const Dataset& val, const BoostConfig& config) {
  const FeatureIndex index(train.x);
  return rrboost_train(train, index, val, config);
}

FitResult sboost_fit(const Dataset& train, const FeatureIndex& train_index, const Dataset& val,
                     const BoostConfig& config) {
  config.validate();
  const auto init = select_init_tree(train, train_index, val, config.init_depths,
                                     config.init_min_nodes, TrimOptions{}, config.exec);
  auto stage1 = sboost_train(train, train_index, val, init.tree, config);
  FitResult out;
  out.model = std::move(stage1.model);
  out.trace = std::move(stage1.trace);
  out.termination = stage1.termination;
  out.sigma_val = stage1.sigma_val;
  out.stage1_stop = stage1.stop;
  out.init_depth = init.depth;
  out.init_min_node = init.min_node;
  return out;
}

}  // namespace rrboost
