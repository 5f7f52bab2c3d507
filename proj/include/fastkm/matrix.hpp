#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fastkm/error.hpp"

namespace fastkm {

/// Dense row-major matrix of finite doubles. `Tag` keeps point data and
/// centroids as distinct types.
template <class Tag>
class RowMatrix {
 public:
  RowMatrix() = default;

  RowMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

  /// Takes ownership of `values` (length rows*cols). Throws DataError on
  /// shape mismatch or non-finite values.
  RowMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
      : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (rows_ == 0 || cols_ == 0) {
      throw DataError("matrix must have at least one row and one column");
    }
    if (values_.size() != rows_ * cols_) {
      throw DataError("matrix storage size does not match " + std::to_string(rows_) + "x" +
                      std::to_string(cols_));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        throw DataError("non-finite value at row " + std::to_string(i / cols_) + ", column " +
                        std::to_string(i % cols_));
      }
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return values_.empty(); }

  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) noexcept { return {values_.data() + i * cols_, cols_}; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * cols_ + j]; }

  std::span<const double> values() const noexcept { return values_; }
  const double* data() const noexcept { return values_.data(); }

  /// Bitwise-value equality (same shape, same doubles).
  friend bool operator==(const RowMatrix&, const RowMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

struct DatasetTag {};
struct CentersTag {};

/// n x d point matrix; row i is point i for the lifetime of the object.
using Dataset = RowMatrix<DatasetTag>;
/// k x d centroid matrix.
using Centers = RowMatrix<CentersTag>;

/// Per-point cluster label in [0, k).
using Assignment = std::vector<std::size_t>;

}  // namespace fastkm
