#include "rrboost/benchmark_harness.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "rrboost/baselines.hpp"
#include "rrboost/csv.hpp"
#include "rrboost/errors.hpp"
#include "rrboost/importance.hpp"
#include "rrboost/metrics.hpp"
#include "rrboost/mstage.hpp"

namespace rrboost {

FitResult fit_method(Method method, const Dataset& train, const FeatureIndex& train_index,
                     const Dataset& val, int depth, const Budget& budget, Execution exec) {
  if (method == Method::RRBoost || method == Method::SBoost) {
    BoostConfig c = BoostConfig::for_depth(depth);
    if (budget.t1_max) c.t1_max = *budget.t1_max;
    if (budget.t2_max) c.t2_max = *budget.t2_max;
    if (budget.min_node) c.min_node = *budget.min_node;
    if (budget.gamma) c.gamma = *budget.gamma;
    c.exec = exec;
    return method == Method::RRBoost ? rrboost_train(train, train_index, val, c)
                                     : sboost_fit(train, train_index, val, c);
  }
  BaselineSpec s = BaselineSpec::for_method(method, depth);
  if (budget.t_max) s.t_max = *budget.t_max;
  if (budget.min_node) s.min_node = *budget.min_node;
  if (budget.gamma) s.gamma = *budget.gamma;
  s.exec = exec;
  return baseline_train(train, train_index, val, s);
}

FitResult fit_method(Method method, const Dataset& train, const Dataset& val, int depth,
                     const Budget& budget, Execution exec) {
  const FeatureIndex index(train.x);
  return fit_method(method, train, index, val, depth, budget, exec);
}

Json fit_config_json(Method method, int depth, const Budget& budget) {
  Json j;
  j["method"] = std::string(to_string(method));
  j["depth"] = depth;
  if (method == Method::RRBoost || method == Method::SBoost) {
    BoostConfig c = BoostConfig::for_depth(depth);
    j["t1_max"] = budget.t1_max.value_or(c.t1_max);
    if (method == Method::RRBoost) j["t2_max"] = budget.t2_max.value_or(c.t2_max);
    j["min_node"] = budget.min_node.value_or(c.min_node);
    j["gamma"] = budget.gamma.value_or(c.gamma);
    j["init_depths"] = c.init_depths;
    j["init_min_nodes"] = c.init_min_nodes;
  } else {
    BaselineSpec s = BaselineSpec::for_method(method, depth);
    j["t_max"] = budget.t_max.value_or(s.t_max);
    j["min_node"] = budget.min_node.value_or(s.min_node);
    j["gamma"] = budget.gamma.value_or(s.gamma);
  }
  return j;
}

int BenchmarkOptions::resolved_depth() const {
  if (depth) return *depth;
  return setting == 2 ? 2 : 1;
}

SimSetting BenchmarkOptions::setting_for(const ErrorSpec& e, std::uint64_t data_seed) const {
  SimSetting s = setting == 0 ? custom : SimSetting::preset(setting, e, data_seed);
  s.errors = e;
  s.seed = data_seed;
  s.convention = convention;
  return s;
}

void BenchmarkOptions::validate() const {
  if (setting < 0 || setting > 3) throw UsageError("setting must be 1, 2, 3 or custom");
  if (reps < 1) throw UsageError("reps must be >= 1");
  if (jobs < 1) throw UsageError("jobs must be >= 1");
  if (methods.empty()) throw UsageError("no methods selected");
  if (errors.empty()) throw UsageError("no error models selected");
  if (resolved_depth() < 1) throw UsageError("base-learner depth must be >= 1");
  for (const auto& e : errors) setting_for(e, 0).validate();
}

std::uint64_t replication_seed(std::uint64_t seed, std::size_t error_index, int rep) {
  auto rng = substream(seed, 100 + error_index, static_cast<std::uint64_t>(rep));
  return rng();
}

namespace {

std::vector<ReplicationResult> run_unit(const BenchmarkOptions& opts, std::size_t error_index, int rep,
                                        Execution exec) {
  const ErrorSpec& e = opts.errors[error_index];
  const std::uint64_t data_seed = replication_seed(opts.seed, error_index, rep);
  std::vector<ReplicationResult> out;
  SimData data;
  std::string setup_failure;
  try {
    data = make_setting(opts.setting_for(e, data_seed));
  } catch (const std::exception& ex) {
    setup_failure = ex.what();
  }
  const auto truth = true_set(opts.setting_for(e, data_seed).g);
  std::optional<FeatureIndex> index;
  if (setup_failure.empty()) index.emplace(data.train.x);
  for (Method m : opts.methods) {
    ReplicationResult r;
    r.errors = e;
    r.method = m;
    r.rep = rep;
    r.recovery = std::numeric_limits<double>::quiet_NaN();
    if (!setup_failure.empty()) {
      r.failure = setup_failure;
      out.push_back(r);
      continue;
    }
    try {
      const FitResult fit =
          fit_method(m, data.train, *index, data.val, opts.resolved_depth(), opts.budget, exec);
      r.rmse = rmse(fit.model.predict(data.test.x, exec), data.test.y);
      r.stop_index = fit.model.stop_index;
      if (opts.importance) {
        ImportanceOptions io;
        io.seed = substream(data_seed, 7, static_cast<std::uint64_t>(m))();
        io.exec = exec;
        r.recovery = recovery_fraction(permutation_importance(fit.model, data.val, io).scores, truth);
      }
      r.ok = std::isfinite(r.rmse);
      if (!r.ok) r.failure = "non-finite test RMSE";
    } catch (const std::exception& ex) {
      r.failure = ex.what();
    }
    out.push_back(r);
  }
  return out;
}

std::string na_or(const std::vector<double>& v, bool sd) {
  if (v.empty() || (sd && v.size() < 2)) return "NA";
  if (v.size() == 1) return format_double(v[0]);
  const Summary s = summarize(v);
  return format_double(sd ? s.sd : s.mean);
}

}  // namespace

BenchmarkResult run_benchmark(const BenchmarkOptions& opts) {
  opts.validate();
  const std::size_t units = opts.errors.size() * static_cast<std::size_t>(opts.reps);
  std::vector<std::vector<ReplicationResult>> by_unit(units);
  // Replications are the unit of parallel work; inner kernels stay serial then.
  const Execution inner = opts.jobs > 1 ? Execution::Serial : Execution::Parallel;
  const auto count = static_cast<std::ptrdiff_t>(units);
#pragma omp parallel for schedule(dynamic, 1) num_threads(opts.jobs) if (opts.jobs > 1)
  for (std::ptrdiff_t u = 0; u < count; ++u) {
    const auto uu = static_cast<std::size_t>(u);
    by_unit[uu] = run_unit(opts, uu / static_cast<std::size_t>(opts.reps),
                           static_cast<int>(uu % static_cast<std::size_t>(opts.reps)), inner);
  }
  BenchmarkResult result;
  for (auto& v : by_unit) {
    for (auto& r : v) result.runs.push_back(std::move(r));
  }
  return result;
}

std::string results_csv(const BenchmarkOptions& opts, const BenchmarkResult& result) {
  std::ostringstream os;
  const std::string setting = opts.setting == 0 ? "custom" : std::to_string(opts.setting);
  os << "setting,depth,errors,method,n_ok,n_failed,rmse_mean,rmse_sd,recovery_mean,recovery_sd\n";
  for (const auto& e : opts.errors) {
    for (Method m : opts.methods) {
      std::vector<double> rm;
      std::vector<double> rec;
      std::size_t failed = 0;
      for (const auto& r : result.runs) {
        if (!(r.errors == e) || r.method != m) continue;
        if (!r.ok) {
          ++failed;
          continue;
        }
        rm.push_back(r.rmse);
        if (std::isfinite(r.recovery)) rec.push_back(r.recovery);
      }
      os << setting << ',' << opts.resolved_depth() << ',' << e.label() << ',' << to_string(m) << ','
         << rm.size() << ',' << failed << ',' << na_or(rm, false) << ',' << na_or(rm, true) << ','
         << na_or(rec, false) << ',' << na_or(rec, true) << '\n';
    }
  }
  return os.str();
}

std::string runs_csv(const BenchmarkResult& result) {
  std::ostringstream os;
  os << "errors,rep,method,ok,rmse,recovery,stop_index,failure\n";
  for (const auto& r : result.runs) {
    std::string failure = r.failure;
    for (auto& ch : failure) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    os << r.errors.label() << ',' << r.rep << ',' << to_string(r.method) << ',' << (r.ok ? 1 : 0) << ','
       << (r.ok ? format_double(r.rmse) : "NA") << ','
       << (r.ok && std::isfinite(r.recovery) ? format_double(r.recovery) : "NA") << ','
       << r.stop_index << ',' << failure << '\n';
  }
  return os.str();
}

Json benchmark_manifest(const BenchmarkOptions& opts, const BenchmarkResult& result) {
  Json j;
  j["setting"] = opts.setting == 0 ? Json("custom") : Json(opts.setting);
  const SimSetting s = opts.setting_for(opts.errors.front(), 0);
  j["g"] = std::string(to_string(s.g));
  j["structure"] = std::string(to_string(s.structure));
  j["n_train"] = s.n_train;
  j["n_val"] = s.n_val;
  j["n_test"] = s.n_test;
  j["p"] = s.p;
  j["snr"] = s.snr;
  j["noise_convention"] = opts.convention == NoiseConvention::Nominal ? "nominal" : "empirical";
  Json errs = Json::array();
  bool heavy_tail = false;
  for (const auto& e : opts.errors) {
    errs.push_back(e.label());
    heavy_tail = heavy_tail || e.model == ErrorModel::D4;
  }
  j["errors"] = errs;
  if (heavy_tail) j["note"] = "D4 has no variance; C uses the unit nominal error variance";
  j["reps"] = opts.reps;
  j["seed"] = opts.seed;
  j["depth"] = opts.resolved_depth();
  j["importance"] = opts.importance;
  Json methods = Json::array();
  for (Method m : opts.methods) methods.push_back(fit_config_json(m, opts.resolved_depth(), opts.budget));
  j["methods"] = methods;
  std::size_t failed = 0;
  for (const auto& r : result.runs) failed += r.ok ? 0 : 1;
  j["runs"] = result.runs.size();
  j["failed_runs"] = failed;
  return j;
}

}  // namespace rrboost
