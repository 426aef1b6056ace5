#include "rrboost/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "rrboost/errors.hpp"
#include "rrboost/importance.hpp"
#include "rrboost/line_search.hpp"
#include "rrboost/losses.hpp"

namespace rrboost {

BaselineSpec BaselineSpec::for_method(Method method, int depth) {
  BaselineSpec s;
  s.method = method;
  s.max_depth = depth;
  s.t_max = depth <= 1 ? 1500 : 800;
  return s;
}

void BaselineSpec::validate() const {
  if (method != Method::L2 && method != Method::LAD && method != Method::MBoost &&
      method != Method::Robloss) {
    throw UsageError("baseline_train only handles l2, lad, mboost and robloss");
  }
  if (max_depth < 0) throw UsageError("tree depth must be >= 0");
  if (min_node < 1) throw UsageError("min_node must be >= 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw UsageError("gamma must lie in (0, 1]");
  if (fixed_huber_threshold && !(*fixed_huber_threshold > 0.0)) {
    throw UsageError("fixed Huber threshold must be positive");
  }
}

double quantile_type7(std::span<const double> values, double q) {
  if (values.empty()) throw DataError("quantile of an empty vector");
  std::vector<double> a(values.begin(), values.end());
  std::sort(a.begin(), a.end());
  const double h = (static_cast<double>(a.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= a.size()) return a.back();
  return a[lo] + (h - static_cast<double>(lo)) * (a[lo + 1] - a[lo]);
}

double average_absolute_deviation(std::span<const double> predictions, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += std::abs(predictions[i] - y[i]);
  return s / static_cast<double>(y.size());
}

double adaptive_huber_threshold(Method method, std::span<const double> residuals) {
  if (method == Method::MBoost) {
    std::vector<double> a(residuals.size());
    std::transform(residuals.begin(), residuals.end(), a.begin(), [](double r) { return std::abs(r); });
    return quantile_type7(a, 0.9);
  }
  if (method == Method::Robloss) return robust_mad(residuals);
  throw UsageError("adaptive Huber threshold only applies to mboost and robloss");
}

namespace {

struct LossEval {
  Method method;
  double delta = 0.0;

  double point(double r) const {
    switch (method) {
      case Method::L2: return 0.5 * r * r;
      case Method::LAD: return std::abs(r);
      default: return rho_unchecked(LossSpec::huber(delta), r);
    }
  }
  double negative_gradient(double r) const {
    switch (method) {
      case Method::L2: return r;
      case Method::LAD: return r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
      default: return std::clamp(r, -delta, delta);
    }
  }
};

}  // namespace

FitResult baseline_train(const Dataset& train, const FeatureIndex& train_index, const Dataset& val,
                         const BaselineSpec& spec) {
  spec.validate();
  const std::size_t n = train.size();
  const std::size_t nv = val.size();
  if (n == 0 || nv == 0) throw DataError("training and validation sets must be non-empty");

  FitResult out;
  Ensemble& model = out.model;
  model.method = spec.method;
  model.gamma = spec.gamma;
  model.init = Tree::leaf(spec.method == Method::L2 ? mean(train.y) : median(train.y));
  model.stage1_loss = spec.method == Method::L2    ? LossSpec::square()
                      : spec.method == Method::LAD ? LossSpec::absolute()
                                                   : LossSpec::huber(1.0);
  model.stage2_loss = model.stage1_loss;

  std::vector<double> fitted = model.init.predict(train.x, spec.exec);
  std::vector<double> fitted_val = model.init.predict(val.x, spec.exec);
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = train.y[i] - fitted[i];

  const bool huber = spec.method == Method::MBoost || spec.method == Method::Robloss;
  std::vector<double> g(n);
  std::vector<double> rv(nv);
  for (std::size_t t = 0; t < spec.t_max; ++t) {
    LossEval loss{spec.method};
    if (huber) {
      loss.delta = spec.fixed_huber_threshold ? *spec.fixed_huber_threshold
                                              : adaptive_huber_threshold(spec.method, r);
      if (!(loss.delta > 0.0)) {
        out.termination = Termination::Interpolation;
        break;
      }
      // Records the most recent threshold.
      model.stage1_loss.c = loss.delta;
      model.stage2_loss.c = loss.delta;
    }
    for (std::size_t i = 0; i < n; ++i) g[i] = -loss.negative_gradient(r[i]);
    Tree tree = fit_negative_gradient(train_index, g, spec.max_depth, spec.min_node, spec.exec);
    const std::vector<double> h = tree.predict(train.x, spec.exec);

    auto objective = [&](double alpha) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += loss.point(train.y[i] - (fitted[i] + alpha * h[i]));
      return s;
    };
    const LineSearchResult ls = line_search(objective, spec.bracket_hint);
    const double step = shrinkage_step(ls.alpha, spec.gamma);
    double train_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      fitted[i] += step * h[i];
      r[i] = train.y[i] - fitted[i];
      train_sum += loss.point(r[i]);
    }

    const std::vector<double> h_val = tree.predict(val.x, spec.exec);
    double val_sum = 0.0;
    for (std::size_t i = 0; i < nv; ++i) {
      fitted_val[i] += step * h_val[i];
      rv[i] = val.y[i] - fitted_val[i];
      val_sum += spec.method == Method::L2 ? rv[i] * rv[i] : std::abs(rv[i]);
    }
    model.steps.push_back({ls.alpha, std::move(tree)});
    const double train_loss =
        spec.method == Method::L2 ? 2.0 * train_sum / static_cast<double>(n)
                                  : train_sum / static_cast<double>(n);
    out.trace.push(train_loss, val_sum / static_cast<double>(nv), 1);
  }

  model.stop_index = out.trace.size() == 0 ? 0 : argmin_stop(out.trace.val_loss) + 1;
  model.stage_boundary = model.stop_index;
  model.steps.resize(model.stop_index);
  out.stage1_stop = model.stop_index;
  return out;
}

FitResult baseline_train(const Dataset& train, const Dataset& val, const BaselineSpec& spec) {
  const FeatureIndex index(train.x);
  return baseline_train(train, index, val, spec);
}

}  // namespace rrboost
