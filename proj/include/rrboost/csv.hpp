#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rrboost/dataset.hpp"

namespace rrboost {

/// A numeric CSV with a header row.
struct CsvTable {
  std::vector<std::string> header;
  Matrix values;

  /// Throws DataError if the column does not exist.
  std::size_t column_index(const std::string& name) const;
};

/// Errors name the 1-based line and the column header.
CsvTable parse_csv(std::istream& in, const std::string& source = "<stream>");
CsvTable read_csv(const std::filesystem::path& path);

/// Splits a table into features and response. An empty `target` selects the
/// last column.
Dataset to_dataset(const CsvTable& table, const std::string& target = "");
Dataset read_dataset(const std::filesystem::path& path, const std::string& target = "");

/// Columns of `table` named by `names`, in that order. A missing name is a
/// DataError naming it.
Matrix select_columns(const CsvTable& table, std::span<const std::string> names);

/// Shortest text that reads back to the same double.
std::string format_double(double v);

void write_dataset(const std::filesystem::path& path, const Dataset& data);
void write_column(const std::filesystem::path& path, const std::string& name,
                  std::span<const double> values);

}  // namespace rrboost
