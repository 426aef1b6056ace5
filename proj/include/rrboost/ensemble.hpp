#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rrboost/dataset.hpp"
#include "rrboost/losses.hpp"
#include "rrboost/tree.hpp"

namespace rrboost {

enum class Method { RRBoost, SBoost, L2, LAD, MBoost, Robloss };

std::string_view to_string(Method method);
Method method_from_string(std::string_view name);
const std::vector<Method>& all_methods();

struct BoostStep {
  double alpha = 0.0;
  Tree tree;

  friend bool operator==(const BoostStep&, const BoostStep&) = default;
};

/// F(x) = init(x) + sum_{t < stop_index} gamma * alpha_t * tree_t(x).
struct Ensemble {
  Method method = Method::RRBoost;
  Tree init;
  std::vector<BoostStep> steps;
  double gamma = 1.0;
  /// Training M-scale at the end of Stage 1 (robust methods only).
  std::optional<double> sigma_hat;
  /// Steps [0, stage_boundary) come from Stage 1.
  std::size_t stage_boundary = 0;
  std::size_t stop_index = 0;
  LossSpec stage1_loss = LossSpec::tukey(kTukeyScaleC, 0.5);
  LossSpec stage2_loss = LossSpec::tukey(kTukeyEfficientC);

  double predict(std::span<const double> x) const;
  std::vector<double> predict(const Matrix& x, Execution exec = Execution::Parallel) const;

  /// True if the initializer or any step used for prediction splits on j.
  bool uses_feature(std::size_t j) const;
  /// Largest feature index referenced by the predictor, or -1.
  int max_feature_index() const;

  friend bool operator==(const Ensemble&, const Ensemble&) = default;
};

/// gamma * alpha.
double shrinkage_step(double alpha, double gamma);

/// Index of the first minimum of a validation-loss trace.
std::size_t argmin_stop(std::span<const double> trace);

/// Least-squares tree fitted to -g.
Tree fit_negative_gradient(const FeatureIndex& index, std::span<const double> g, int depth,
                           int min_node, Execution exec = Execution::Parallel);
Tree fit_negative_gradient(const Matrix& x, std::span<const double> g, int depth, int min_node);

struct FitTrace {
  std::vector<double> train_loss;
  std::vector<double> val_loss;
  std::vector<int> stage;

  void push(double train, double val, int stage_label) {
    train_loss.push_back(train);
    val_loss.push_back(val);
    stage.push_back(stage_label);
  }
  std::size_t size() const { return train_loss.size(); }
};

enum class Termination { Completed, AllOutlying, Interpolation, Plateau };
std::string_view to_string(Termination t);

struct BoostConfig {
  int max_depth = 1;
  int min_node = 7;
  double gamma = 1.0;
  std::size_t t1_max = 500;
  std::size_t t2_max = 1000;
  LossSpec rho0 = LossSpec::tukey(kTukeyScaleC, 0.5);
  LossSpec rho1 = LossSpec::tukey(kTukeyEfficientC);
  std::vector<int> init_depths{0, 1, 2, 3, 4};
  std::vector<int> init_min_nodes{10, 20, 30};
  double scale_tol = 1e-10;
  /// Consecutive zero-length Stage-2 steps that end training; 0 disables.
  int plateau_limit = 25;
  double bracket_hint = 1.0;
  Execution exec = Execution::Parallel;

  /// Iteration budgets used in the simulation study: (500, 1000) for stumps,
  /// (300, 500) for deeper trees.
  static BoostConfig for_depth(int depth);
  void validate() const;
};

struct FitResult {
  Ensemble model;
  FitTrace trace;
  Termination termination = Termination::Completed;
  /// Validation M-scale at the Stage-1 stopping time (robust methods).
  std::optional<double> sigma_val;
  std::size_t stage1_stop = 0;
  std::size_t stage2_stop = 0;
  int init_depth = 0;
  int init_min_node = 0;
};

}  // namespace rrboost
