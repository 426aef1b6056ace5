#include "rrboost/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "rrboost/benchmark_harness.hpp"
#include "rrboost/csv.hpp"
#include "rrboost/errors.hpp"
#include "rrboost/importance.hpp"
#include "rrboost/model_io.hpp"
#include "rrboost/simgen.hpp"

namespace rrboost {

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

const CLI::Validator kGamma(
    [](std::string& v) -> std::string {
      double g = 0.0;
      try {
        g = std::stod(v);
      } catch (const std::exception&) {
        return "gamma must be a number";
      }
      return g > 0.0 && g <= 1.0 ? "" : "gamma must lie in (0, 1]";
    },
    "(0,1]");

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path);
  f << text;
  if (!f) throw DataError("failed writing " + path);
}

void check_same_columns(const Dataset& train, const Dataset& val) {
  if (train.feature_names.size() != val.feature_names.size()) {
    throw DataError("train has " + std::to_string(train.feature_names.size()) +
                    " feature columns but val has " + std::to_string(val.feature_names.size()));
  }
  for (std::size_t j = 0; j < train.feature_names.size(); ++j) {
    if (train.feature_names[j] != val.feature_names[j]) {
      throw DataError("column " + std::to_string(j + 1) + " is '" + train.feature_names[j] +
                      "' in train but '" + val.feature_names[j] + "' in val");
    }
  }
}

struct TrainArgs {
  std::string train, val, target, out = "model.json", report;
  std::string method = "rrboost";
  int depth = 1;
  std::optional<std::size_t> t1_max, t2_max, t_max;
  std::optional<int> min_node;
  std::optional<double> gamma;
  std::uint64_t seed = 0;
  std::string contaminate;
  std::optional<double> snr;
};

void cmd_train(const TrainArgs& a, std::ostream& out) {
  const Method method = method_from_string(a.method);
  if (a.depth < 1) throw UsageError("--depth must be >= 1");
  Dataset train = read_dataset(a.train, a.target);
  Dataset val = read_dataset(a.val, a.target);
  check_same_columns(train, val);
  if (train.target_name != val.target_name) throw DataError("train and val responses are named differently");

  Json manifest;
  manifest["seed"] = a.seed;
  if (!a.contaminate.empty()) {
    if (!a.snr) throw UsageError("--contaminate needs --snr");
    const ErrorSpec e = ErrorSpec::parse(a.contaminate);
    const double c = contamination_scale(train.y, *a.snr);
    auto train_rng = substream(a.seed, 201);
    auto val_rng = substream(a.seed, 202);
    add_noise(train, e, c, train_rng);
    add_noise(val, e, c, val_rng);
    manifest["contamination"] = {{"errors", e.label()}, {"snr", *a.snr}, {"c", c}};
  } else if (a.snr) {
    throw UsageError("--snr only applies with --contaminate");
  }

  Budget budget;
  budget.t1_max = a.t1_max;
  budget.t2_max = a.t2_max;
  budget.t_max = a.t_max;
  budget.min_node = a.min_node;
  budget.gamma = a.gamma;
  manifest["config"] = fit_config_json(method, a.depth, budget);
  manifest["train_rows"] = train.size();
  manifest["val_rows"] = val.size();

  const auto start = std::chrono::steady_clock::now();
  const FitResult fit = fit_method(method, train, val, a.depth, budget, Execution::Parallel);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  ModelFile file;
  file.model = fit.model;
  file.feature_names = train.feature_names;
  file.target_name = train.target_name;
  file.manifest = manifest;
  save_model(a.out, file);

  Json report;
  report["method"] = std::string(to_string(method));
  report["model"] = a.out;
  report["iterations"] = fit.trace.size();
  report["stop_index"] = fit.model.stop_index;
  report["stage1_stop"] = fit.stage1_stop;
  if (method == Method::RRBoost) report["stage2_stop"] = fit.stage2_stop;
  report["termination"] = std::string(to_string(fit.termination));
  if (fit.model.stop_index > 0) {
    report["train_loss"] = fit.trace.train_loss[fit.model.stop_index - 1];
    report["val_loss"] = fit.trace.val_loss[fit.model.stop_index - 1];
  }
  if (fit.model.sigma_hat) report["sigma_hat"] = *fit.model.sigma_hat;
  if (method == Method::RRBoost || method == Method::SBoost) {
    report["init_depth"] = fit.init_depth;
    report["init_min_node"] = fit.init_min_node;
  }
  report["wall_seconds"] = seconds;
  write_text(a.report, report.dump(2) + "\n", out);
}

void cmd_predict(const std::string& model_path, const std::string& data, const std::string& dest,
                 std::ostream& out) {
  const ModelFile file = load_model(model_path);
  const CsvTable table = read_csv(data);
  const Matrix x = select_columns(table, file.feature_names);
  const auto pred = file.model.predict(x, Execution::Parallel);
  std::string text = "prediction\n";
  for (double v : pred) text += format_double(v) + "\n";
  write_text(dest, text, out);
}

void cmd_importance(const std::string& model_path, const std::string& data, const std::string& target,
                    std::uint64_t seed, int repeats, const std::string& dest, std::ostream& out) {
  const ModelFile file = load_model(model_path);
  const CsvTable table = read_csv(data);
  Dataset val;
  val.x = select_columns(table, file.feature_names);
  val.feature_names = file.feature_names;
  val.target_name = target.empty() ? file.target_name : target;
  const std::size_t ty = table.column_index(val.target_name);
  for (std::size_t i = 0; i < table.values.rows(); ++i) val.y.push_back(table.values(i, ty));
  ImportanceOptions opts;
  opts.seed = seed;
  opts.repeats = repeats;
  const auto report = permutation_importance(file.model, val, opts);
  std::vector<std::size_t> order(report.scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return report.scores[a] > report.scores[b]; });
  std::string text = "feature,importance\n";
  for (auto j : order) text += file.feature_names[j] + "," + format_double(report.scores[j]) + "\n";
  write_text(dest, text, out);
}

struct SimArgs {
  std::string setting = "1";
  std::string g = "g1", structure = "S0";
  std::size_t n = 300, p = 10;
  std::optional<std::size_t> n_val;
  double snr = 6.0;
  std::string errors = "D0";
  std::string convention = "nominal";
};

NoiseConvention parse_convention(const std::string& s) {
  if (s == "nominal") return NoiseConvention::Nominal;
  if (s == "empirical") return NoiseConvention::Empirical;
  throw UsageError("--noise-convention must be nominal or empirical");
}

int parse_setting(const std::string& s) {
  if (s == "custom") return 0;
  if (s == "1" || s == "2" || s == "3") return std::stoi(s);
  throw UsageError("--setting must be 1, 2, 3 or custom");
}

SimSetting custom_setting(const SimArgs& a) {
  SimSetting s;
  s.g = g_function_from_string(a.g);
  s.structure = structure_from_string(a.structure);
  s.n_train = a.n;
  s.n_val = a.n_val.value_or(2 * a.n / 3);
  s.p = a.p;
  s.snr = a.snr;
  return s;
}

void cmd_simulate(const SimArgs& a, std::uint64_t seed, const std::string& dir, std::ostream& out) {
  const int which = parse_setting(a.setting);
  const ErrorSpec e = ErrorSpec::parse(a.errors);
  SimSetting s = which == 0 ? custom_setting(a) : SimSetting::preset(which, e, seed);
  s.errors = e;
  s.seed = seed;
  s.convention = parse_convention(a.convention);
  const SimData d = make_setting(s);
  std::filesystem::create_directories(dir);
  const std::filesystem::path root(dir);
  write_dataset(root / "train.csv", d.train);
  write_dataset(root / "val.csv", d.val);
  write_dataset(root / "test.csv", d.test);
  Json m;
  m["setting"] = which == 0 ? Json("custom") : Json(which);
  m["g"] = std::string(to_string(s.g));
  m["structure"] = std::string(to_string(s.structure));
  m["errors"] = e.label();
  m["n_train"] = s.n_train;
  m["n_val"] = s.n_val;
  m["n_test"] = s.n_test;
  m["p"] = s.p;
  m["snr"] = s.snr;
  m["noise_convention"] = a.convention;
  m["seed"] = seed;
  m["c"] = d.c;
  if (e.model == ErrorModel::D4) m["note"] = "D4 has no variance; C uses the unit nominal error variance";
  write_json(root / "manifest.json", m);
  out << "wrote " << (root / "train.csv").string() << ", val.csv, test.csv, manifest.json\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust two-stage gradient boosting (SBoost / RRBoost) and baseline boosters"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "rrboost 1.0");

  TrainArgs ta;
  auto* train = app.add_subcommand("train", "Fit a model from train/val CSVs");
  train->add_option("--train", ta.train, "Training CSV")->required();
  train->add_option("--val", ta.val, "Validation CSV")->required();
  train->add_option("--target", ta.target, "Response column (default: last)");
  train->add_option("--method", ta.method, "rrboost, sboost, l2, lad, mboost or robloss")->capture_default_str();
  train->add_option("--depth", ta.depth, "Base-learner depth")->capture_default_str();
  train->add_option("--t1-max", ta.t1_max, "Stage-1 iteration cap");
  train->add_option("--t2-max", ta.t2_max, "Stage-2 iteration cap");
  train->add_option("--t-max", ta.t_max, "Iteration cap for the baselines");
  train->add_option("--min-node", ta.min_node, "Minimum rows per child")->check(CLI::PositiveNumber);
  train->add_option("--gamma", ta.gamma, "Shrinkage in (0, 1]")->check(kGamma);
  train->add_option("--seed", ta.seed, "Seed for --contaminate")->capture_default_str();
  train->add_option("--contaminate", ta.contaminate, "Add errors to train/val responses, e.g. D1:0.2");
  train->add_option("--snr", ta.snr, "Signal-to-noise ratio for --contaminate")->check(CLI::PositiveNumber);
  train->add_option("--out", ta.out, "Model file")->capture_default_str();
  train->add_option("--report", ta.report, "Fit report path (default: stdout)");

  std::string model_path, data_path, dest, imp_target;
  std::uint64_t seed = 0;
  int repeats = 1;
  auto* predict = app.add_subcommand("predict", "Predict the rows of a CSV");
  predict->add_option("--model", model_path, "Model file")->required();
  predict->add_option("--data", data_path, "Feature CSV")->required();
  predict->add_option("--out", dest, "Output CSV (default: stdout)");

  auto* importance = app.add_subcommand("importance", "Robust permutation importance on a validation CSV");
  importance->add_option("--model", model_path, "Model file")->required();
  importance->add_option("--data", data_path, "Validation CSV with the response")->required();
  importance->add_option("--target", imp_target, "Response column (default: the model's)");
  importance->add_option("--seed", seed, "Permutation seed")->capture_default_str();
  importance->add_option("--repeats", repeats, "Shuffles per feature")->check(CLI::PositiveNumber);
  importance->add_option("--out", dest, "Output CSV (default: stdout)");

  SimArgs sa;
  std::string dir = "sim";
  auto add_sim_flags = [&sa](CLI::App* cmd) {
    cmd->add_option("--setting", sa.setting, "1, 2, 3 or custom")->capture_default_str();
    cmd->add_option("--g", sa.g, "Custom: g1, g2 or g3");
    cmd->add_option("--structure", sa.structure, "Custom: S0, S1 or S2");
    cmd->add_option("--n", sa.n, "Custom: training size");
    cmd->add_option("--n-val", sa.n_val, "Custom: validation size (default 2n/3)");
    cmd->add_option("--p", sa.p, "Custom: feature count");
    cmd->add_option("--snr", sa.snr, "Custom: signal-to-noise ratio")->check(CLI::PositiveNumber);
    cmd->add_option("--noise-convention", sa.convention, "nominal or empirical")->capture_default_str();
  };
  auto* simulate = app.add_subcommand("simulate", "Write train/val/test CSVs of a simulated setting");
  add_sim_flags(simulate);
  simulate->add_option("--errors", sa.errors, "D0, D1:a, D2:a, D3 or D4")->capture_default_str();
  simulate->add_option("--seed", seed, "Seed")->capture_default_str();
  simulate->add_option("--out-dir", dir, "Output directory")->capture_default_str();

  std::string methods = "l2,mboost,lad,robloss,sboost,rrboost";
  std::string error_list = "D0,D1:0.1,D1:0.2,D2:0.1,D2:0.2,D3,D4";
  std::string runs_path, manifest_path;
  BenchmarkOptions bo;
  std::optional<int> bench_depth;
  bool no_importance = false;
  auto* bench = app.add_subcommand("benchmark", "Replicated simulation study");
  add_sim_flags(bench);
  bench->add_option("--methods", methods, "Comma-separated methods")->capture_default_str();
  bench->add_option("--errors", error_list, "Comma-separated error models")->capture_default_str();
  bench->add_option("--reps", bo.reps, "Replications")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--seed", bo.seed, "Seed")->capture_default_str();
  bench->add_option("--jobs", bo.jobs, "Concurrent replications")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--depth", bench_depth, "Base-learner depth (default 2 for setting 2, else 1)");
  bench->add_option("--t1-max", bo.budget.t1_max, "Stage-1 iteration cap");
  bench->add_option("--t2-max", bo.budget.t2_max, "Stage-2 iteration cap");
  bench->add_option("--t-max", bo.budget.t_max, "Iteration cap for the baselines");
  bench->add_flag("--no-importance", no_importance, "Skip variable recovery");
  bench->add_option("--out", dest, "Results CSV (default: stdout)");
  bench->add_option("--runs", runs_path, "Per-replication CSV");
  bench->add_option("--manifest", manifest_path, "Manifest path (default: <out>.manifest.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*train) {
      cmd_train(ta, out);
    } else if (*predict) {
      cmd_predict(model_path, data_path, dest, out);
    } else if (*importance) {
      cmd_importance(model_path, data_path, imp_target, seed, repeats, dest, out);
    } else if (*simulate) {
      cmd_simulate(sa, seed, dir, out);
    } else if (*bench) {
      bo.setting = parse_setting(sa.setting);
      if (bo.setting == 0) bo.custom = custom_setting(sa);
      bo.convention = parse_convention(sa.convention);
      bo.methods.clear();
      for (const auto& m : split_list(methods)) bo.methods.push_back(method_from_string(m));
      for (const auto& e : split_list(error_list)) bo.errors.push_back(ErrorSpec::parse(e));
      bo.depth = bench_depth;
      bo.importance = !no_importance;
      const auto result = run_benchmark(bo);
      write_text(dest, results_csv(bo, result), out);
      if (!runs_path.empty()) write_text(runs_path, runs_csv(result), out);
      if (manifest_path.empty() && !dest.empty() && dest != "-") manifest_path = dest + ".manifest.json";
      if (!manifest_path.empty()) write_json(manifest_path, benchmark_manifest(bo, result));
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace rrboost
