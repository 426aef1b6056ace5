#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rrboost/ensemble.hpp"

namespace rrboost {

using Json = nlohmann::ordered_json;

inline constexpr int kModelFormatVersion = 1;

/// A fitted ensemble plus what is needed to apply it to new CSVs.
struct ModelFile {
  Ensemble model;
  std::vector<std::string> feature_names;
  std::string target_name = "y";
  /// Free-form training record (seed, configuration).
  Json manifest = Json::object();
};

Json tree_to_json(const Tree& tree);
Tree tree_from_json(const Json& j);
Json loss_to_json(const LossSpec& spec);
LossSpec loss_from_json(const Json& j);

Json model_to_json(const ModelFile& file);
/// Throws DataError on a malformed document or an unsupported format_version.
ModelFile model_from_json(const Json& j);

std::string dump_model(const ModelFile& file);
ModelFile parse_model(std::string_view text);

void save_model(const std::filesystem::path& path, const ModelFile& file);
ModelFile load_model(const std::filesystem::path& path);

/// Writes `j` indented, with a trailing newline.
void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace rrboost
