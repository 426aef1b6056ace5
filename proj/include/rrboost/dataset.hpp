#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rrboost {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  std::vector<double> column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const double> values);

  std::span<const double> data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Feature matrix plus response vector with column names.
struct Dataset {
  Matrix x;
  std::vector<double> y;
  std::vector<std::string> feature_names;
  std::string target_name = "y";

  std::size_t size() const { return y.size(); }
  std::size_t num_features() const { return x.cols(); }

  /// Throws DataError if shapes disagree or any value is non-finite.
  void validate() const;

  /// Rows selected by `indices`, in that order.
  Dataset subset(std::span<const std::size_t> indices) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Names "x1", "x2", ... used when a dataset has no header.
std::vector<std::string> default_feature_names(std::size_t p);

}  // namespace rrboost
