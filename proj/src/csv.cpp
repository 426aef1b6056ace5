#include "rrboost/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "rrboost/errors.hpp"

namespace rrboost {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  s = s.substr(b, e - b + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::size_t CsvTable::column_index(const std::string& name) const {
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == name) return j;
  }
  throw DataError("column '" + name + "' not found");
}

CsvTable parse_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  CsvTable t;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw DataError(source + ": no header row");
  t.header = split(line);
  for (std::size_t j = 0; j < t.header.size(); ++j) {
    if (t.header[j].empty()) throw DataError(source + ": empty name for column " + std::to_string(j + 1));
  }
  const std::size_t p = t.header.size();
  std::vector<double> cells;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != p) {
      throw DataError(source + ": line " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) + " fields, expected " + std::to_string(p));
    }
    for (std::size_t j = 0; j < p; ++j) {
      const auto& f = fields[j];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v)) {
        throw DataError(source + ": line " + std::to_string(line_no) + ", column '" + t.header[j] +
                        "': non-numeric value '" + f + "'");
      }
      cells.push_back(v);
    }
    ++rows;
  }
  t.values = Matrix(rows, p);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < p; ++j) t.values(i, j) = cells[i * p + j];
  }
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  return parse_csv(in, path.string());
}

Dataset to_dataset(const CsvTable& table, const std::string& target) {
  if (table.header.size() < 2) throw DataError("need at least one feature column and a response column");
  const std::size_t ty = target.empty() ? table.header.size() - 1 : table.column_index(target);
  Dataset d;
  d.target_name = table.header[ty];
  const std::size_t n = table.values.rows();
  d.x = Matrix(n, table.header.size() - 1);
  d.y.resize(n);
  for (std::size_t j = 0, k = 0; j < table.header.size(); ++j) {
    if (j == ty) continue;
    d.feature_names.push_back(table.header[j]);
    for (std::size_t i = 0; i < n; ++i) d.x(i, k) = table.values(i, j);
    ++k;
  }
  for (std::size_t i = 0; i < n; ++i) d.y[i] = table.values(i, ty);
  return d;
}

Dataset read_dataset(const std::filesystem::path& path, const std::string& target) {
  return to_dataset(read_csv(path), target);
}

Matrix select_columns(const CsvTable& table, std::span<const std::string> names) {
  Matrix x(table.values.rows(), names.size());
  for (std::size_t k = 0; k < names.size(); ++k) {
    std::size_t j = 0;
    try {
      j = table.column_index(names[k]);
    } catch (const DataError&) {
      throw DataError("data has no column for model feature '" + names[k] + "'");
    }
    for (std::size_t i = 0; i < x.rows(); ++i) x(i, k) = table.values(i, j);
  }
  return x;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

void write_dataset(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& name : data.feature_names) out << name << ',';
  out << data.target_name << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < data.num_features(); ++j) out << format_double(data.x(i, j)) << ',';
    out << format_double(data.y[i]) << '\n';
  }
  if (!out) throw DataError("failed writing " + path.string());
}

void write_column(const std::filesystem::path& path, const std::string& name,
                  std::span<const double> values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << name << '\n';
  for (double v : values) out << format_double(v) << '\n';
  if (!out) throw DataError("failed writing " + path.string());
}

}  // namespace rrboost
