#include "rrboost/model_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rrboost/errors.hpp"

namespace rrboost {

namespace {

double finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericalError(std::string("cannot serialize non-finite ") + what);
  return v;
}

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw DataError(std::string("model file is missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DataError(std::string("model file field '") + key + "' has the wrong type");
  }
}

}  // namespace

Json tree_to_json(const Tree& tree) {
  Json nodes = Json::array();
  for (const auto& n : tree.nodes()) {
    nodes.push_back({{"feature", n.feature},
                     {"threshold", finite(n.threshold, "threshold")},
                     {"left", n.left},
                     {"right", n.right},
                     {"value", finite(n.value, "leaf value")}});
  }
  return Json{{"nodes", std::move(nodes)}};
}

Tree tree_from_json(const Json& j) {
  const auto& arr = j.contains("nodes") ? j.at("nodes") : Json();
  if (!arr.is_array() || arr.empty()) throw DataError("tree record has no nodes");
  std::vector<TreeNode> nodes;
  nodes.reserve(arr.size());
  for (const auto& n : arr) {
    TreeNode t;
    t.feature = field<int>(n, "feature");
    t.threshold = field<double>(n, "threshold");
    t.left = field<int>(n, "left");
    t.right = field<int>(n, "right");
    t.value = field<double>(n, "value");
    nodes.push_back(t);
  }
  const auto size = static_cast<int>(nodes.size());
  for (const auto& t : nodes) {
    if (t.feature >= 0 && (t.left <= 0 || t.right <= 0 || t.left >= size || t.right >= size)) {
      throw DataError("tree record has a dangling child index");
    }
  }
  return Tree(std::move(nodes));
}

Json loss_to_json(const LossSpec& spec) {
  return Json{{"family", std::string(to_string(spec.family))}, {"c", spec.c}, {"kappa", spec.kappa}};
}

LossSpec loss_from_json(const Json& j) {
  LossSpec s;
  try {
    s.family = loss_family_from_string(field<std::string>(j, "family"));
  } catch (const UsageError& e) {
    throw DataError(e.what());
  }
  s.c = field<double>(j, "c");
  s.kappa = field<double>(j, "kappa");
  return s;
}

Json model_to_json(const ModelFile& file) {
  const Ensemble& m = file.model;
  Json steps = Json::array();
  for (const auto& s : m.steps) {
    steps.push_back({{"alpha", finite(s.alpha, "step size")}, {"tree", tree_to_json(s.tree)}});
  }
  Json j;
  j["format_version"] = kModelFormatVersion;
  j["method"] = std::string(to_string(m.method));
  j["feature_names"] = file.feature_names;
  j["target_name"] = file.target_name;
  j["stage1_loss"] = loss_to_json(m.stage1_loss);
  j["stage2_loss"] = loss_to_json(m.stage2_loss);
  j["sigma_hat"] = m.sigma_hat ? Json(finite(*m.sigma_hat, "scale")) : Json(nullptr);
  j["gamma"] = m.gamma;
  j["stage_boundary"] = m.stage_boundary;
  j["stop_index"] = m.stop_index;
  j["init"] = tree_to_json(m.init);
  j["steps"] = std::move(steps);
  j["manifest"] = file.manifest;
  return j;
}

ModelFile model_from_json(const Json& j) {
  if (!j.is_object()) throw DataError("model file is not an object");
  const int version = field<int>(j, "format_version");
  if (version != kModelFormatVersion) {
    throw DataError("unsupported model format_version " + std::to_string(version));
  }
  ModelFile f;
  Ensemble& m = f.model;
  try {
    m.method = method_from_string(field<std::string>(j, "method"));
  } catch (const UsageError& e) {
    throw DataError(e.what());
  }
  f.feature_names = field<std::vector<std::string>>(j, "feature_names");
  f.target_name = field<std::string>(j, "target_name");
  m.stage1_loss = loss_from_json(j.at("stage1_loss"));
  m.stage2_loss = loss_from_json(j.at("stage2_loss"));
  if (!j.contains("sigma_hat")) throw DataError("model file is missing 'sigma_hat'");
  if (!j.at("sigma_hat").is_null()) m.sigma_hat = field<double>(j, "sigma_hat");
  m.gamma = field<double>(j, "gamma");
  m.stage_boundary = field<std::size_t>(j, "stage_boundary");
  m.stop_index = field<std::size_t>(j, "stop_index");
  if (!j.contains("init")) throw DataError("model file is missing 'init'");
  m.init = tree_from_json(j.at("init"));
  if (!j.contains("steps") || !j.at("steps").is_array()) throw DataError("model file is missing 'steps'");
  for (const auto& s : j.at("steps")) {
    if (!s.contains("tree")) throw DataError("step record is missing 'tree'");
    m.steps.push_back({field<double>(s, "alpha"), tree_from_json(s.at("tree"))});
  }
  if (m.stop_index > m.steps.size()) throw DataError("stop_index exceeds the number of steps");
  if (m.stage_boundary > m.steps.size()) throw DataError("stage_boundary exceeds the number of steps");
  if (j.contains("manifest")) f.manifest = j.at("manifest");
  const int max_feature = m.max_feature_index();
  if (max_feature >= static_cast<int>(f.feature_names.size())) {
    throw DataError("model references feature " + std::to_string(max_feature) +
                    " but names only " + std::to_string(f.feature_names.size()));
  }
  return f;
}

std::string dump_model(const ModelFile& file) { return model_to_json(file).dump(2) + "\n"; }

ModelFile parse_model(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("model file is not valid JSON: ") + e.what());
  }
  return model_from_json(j);
}

void save_model(const std::filesystem::path& path, const ModelFile& file) {
  const std::string text = dump_model(file);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("failed writing " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw DataError("failed writing " + path.string());
}

}  // namespace rrboost
