#include "rrboost/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "rrboost/errors.hpp"
#include "rrboost/kernels.hpp"

namespace rrboost {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::RRBoost: return "rrboost";
    case Method::SBoost: return "sboost";
    case Method::L2: return "l2";
    case Method::LAD: return "lad";
    case Method::MBoost: return "mboost";
    case Method::Robloss: return "robloss";
  }
  return "unknown";
}

Method method_from_string(std::string_view name) {
  for (Method m : all_methods()) {
    if (to_string(m) == name) return m;
  }
  throw UsageError("unknown method '" + std::string(name) +
                   "' (expected rrboost, sboost, l2, lad, mboost or robloss)");
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods{Method::L2,      Method::MBoost, Method::LAD,
                                           Method::Robloss, Method::SBoost, Method::RRBoost};
  return methods;
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::AllOutlying: return "all_outlying";
    case Termination::Interpolation: return "interpolation";
    case Termination::Plateau: return "plateau";
  }
  return "unknown";
}

double shrinkage_step(double alpha, double gamma) { return gamma * alpha; }

double Ensemble::predict(std::span<const double> x) const {
  double v = init.predict(x);
  const std::size_t n = std::min(stop_index, steps.size());
  for (std::size_t t = 0; t < n; ++t) {
    v += shrinkage_step(steps[t].alpha, gamma) * steps[t].tree.predict(x);
  }
  return v;
}

std::vector<double> Ensemble::predict(const Matrix& x, Execution exec) const {
  std::vector<double> out(x.rows());
  kernels::for_each_row(x.rows(), exec, [&](std::size_t i) { out[i] = predict(x.row(i)); });
  return out;
}

bool Ensemble::uses_feature(std::size_t j) const {
  if (init.uses_feature(j)) return true;
  const std::size_t n = std::min(stop_index, steps.size());
  for (std::size_t t = 0; t < n; ++t) {
    if (steps[t].tree.uses_feature(j)) return true;
  }
  return false;
}

int Ensemble::max_feature_index() const {
  int m = init.max_feature_index();
  for (const auto& s : steps) m = std::max(m, s.tree.max_feature_index());
  return m;
}

std::size_t argmin_stop(std::span<const double> trace) {
  if (trace.empty()) throw UsageError("argmin_stop of an empty trace");
  std::size_t best = 0;
  for (std::size_t t = 1; t < trace.size(); ++t) {
    if (trace[t] < trace[best]) best = t;
  }
  return best;
}

Tree fit_negative_gradient(const FeatureIndex& index, std::span<const double> g, int depth,
                           int min_node, Execution exec) {
  std::vector<double> target(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i])) throw NumericalError("non-finite gradient coordinate");
    target[i] = -g[i];
  }
  return fit_tree(index, target, TreeParams{SplitCriterion::LeastSquares, depth, min_node, exec});
}

Tree fit_negative_gradient(const Matrix& x, std::span<const double> g, int depth, int min_node) {
  const FeatureIndex index(x);
  return fit_negative_gradient(index, g, depth, min_node);
}

BoostConfig BoostConfig::for_depth(int depth) {
  BoostConfig c;
  c.max_depth = depth;
  if (depth <= 1) {
    c.t1_max = 500;
    c.t2_max = 1000;
  } else {
    c.t1_max = 300;
    c.t2_max = 500;
  }
  return c;
}

void BoostConfig::validate() const {
  if (max_depth < 0) throw UsageError("tree depth must be >= 0");
  if (min_node < 1) throw UsageError("min_node must be >= 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw UsageError("gamma must lie in (0, 1]");
  if (!(scale_tol > 0.0)) throw UsageError("scale tolerance must be positive");
  rrboost::validate(rho0);
  rrboost::validate(rho1);
}

}  // namespace rrboost
