#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rrboost/ensemble.hpp"
#include "rrboost/model_io.hpp"
#include "rrboost/simgen.hpp"

namespace rrboost {

/// Iteration budgets that override the per-depth defaults.
struct Budget {
  std::optional<std::size_t> t1_max;
  std::optional<std::size_t> t2_max;
  std::optional<std::size_t> t_max;
  std::optional<int> min_node;
  std::optional<double> gamma;
};

/// Fits any of the six methods with the simulation-study defaults for `depth`.
FitResult fit_method(Method method, const Dataset& train, const FeatureIndex& train_index,
                     const Dataset& val, int depth, const Budget& budget = {},
                     Execution exec = Execution::Parallel);
FitResult fit_method(Method method, const Dataset& train, const Dataset& val, int depth,
                     const Budget& budget = {}, Execution exec = Execution::Parallel);

/// Configuration record of a fit, for manifests.
Json fit_config_json(Method method, int depth, const Budget& budget);

struct BenchmarkOptions {
  /// 1, 2 or 3 selects a preset; 0 uses `custom`.
  int setting = 1;
  SimSetting custom;
  std::vector<Method> methods = all_methods();
  std::vector<ErrorSpec> errors;
  int reps = 10;
  std::uint64_t seed = 0;
  int jobs = 1;
  /// Defaults to 2 for setting 2, else 1.
  std::optional<int> depth;
  Budget budget;
  bool importance = true;
  NoiseConvention convention = NoiseConvention::Nominal;

  int resolved_depth() const;
  SimSetting setting_for(const ErrorSpec& errors, std::uint64_t data_seed) const;
  void validate() const;
};

struct ReplicationResult {
  ErrorSpec errors;
  Method method = Method::L2;
  int rep = 0;
  bool ok = false;
  double rmse = 0.0;
  /// NaN when importance was skipped.
  double recovery = 0.0;
  std::size_t stop_index = 0;
  std::string failure;
};

struct BenchmarkResult {
  /// Ordered by error model, then replication, then method.
  std::vector<ReplicationResult> runs;
};

/// Seed of replication `rep` under error model number `error_index`.
std::uint64_t replication_seed(std::uint64_t seed, std::size_t error_index, int rep);

BenchmarkResult run_benchmark(const BenchmarkOptions& opts);

/// One row per (error model, method): counts, mean/sd of test RMSE and of
/// recovery. Means need one value and sds two; otherwise the field prints as NA.
std::string results_csv(const BenchmarkOptions& opts, const BenchmarkResult& result);

/// One row per (error model, replication, method).
std::string runs_csv(const BenchmarkResult& result);

Json benchmark_manifest(const BenchmarkOptions& opts, const BenchmarkResult& result);

}  // namespace rrboost
