#include "rrboost/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "rrboost/errors.hpp"

namespace rrboost {

std::vector<double> Matrix::column(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

void Matrix::set_column(std::size_t j, std::span<const double> values) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

void Dataset::validate() const {
  if (x.rows() != y.size()) {
    throw DataError("feature matrix has " + std::to_string(x.rows()) + " rows but response has " +
                    std::to_string(y.size()));
  }
  if (!feature_names.empty() && feature_names.size() != x.cols()) {
    throw DataError("feature name count does not match column count");
  }
  for (std::size_t i = 0; i < x.rows(); ++i) {
    if (!std::isfinite(y[i])) throw DataError("non-finite response at row " + std::to_string(i + 1));
    for (std::size_t j = 0; j < x.cols(); ++j) {
      if (!std::isfinite(x(i, j))) {
        throw DataError("non-finite feature at row " + std::to_string(i + 1) + ", column " +
                        std::to_string(j + 1));
      }
    }
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.x = Matrix(indices.size(), x.cols());
  out.y.resize(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const auto src = x.row(indices[k]);
    auto dst = out.x.row(k);
    std::copy(src.begin(), src.end(), dst.begin());
    out.y[k] = y[indices[k]];
  }
  out.feature_names = feature_names;
  out.target_name = target_name;
  return out;
}

std::vector<std::string> default_feature_names(std::size_t p) {
  std::vector<std::string> names(p);
  for (std::size_t j = 0; j < p; ++j) names[j] = "x" + std::to_string(j + 1);
  return names;
}

}  // namespace rrboost
