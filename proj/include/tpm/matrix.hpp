#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tpm {

using Vector = std::vector<double>;

/// Dense square matrix, row-major. Row i / column j follow the economy's
/// convention: entry (i, j) relates player i to good j.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  /// Throws Errc::NonSquare unless every row has rows.size() entries.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return n_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * n_, n_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

  double row_sum(std::size_t i) const;
  double col_sum(std::size_t j) const;
  double total() const;
  Vector row_sums() const;
  Vector col_sums() const;

  Matrix scaled(double factor) const;
  std::vector<std::vector<double>> to_rows() const;

  /// Largest |a - b| entrywise; sizes must match.
  static double max_abs_diff(const Matrix& a, const Matrix& b);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

}  // namespace tpm
