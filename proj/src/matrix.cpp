#include "tpm/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tpm/error.hpp"

namespace tpm {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw Error(Errc::NonSquare, "row " + std::to_string(i + 1) + " has " +
                                       std::to_string(rows[i].size()) + " entries, expected " +
                                       std::to_string(n));
    }
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

double Matrix::row_sum(std::size_t i) const {
  auto r = row(i);
  return std::accumulate(r.begin(), r.end(), 0.0);
}

double Matrix::col_sum(std::size_t j) const {
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) s += (*this)(i, j);
  return s;
}

double Matrix::total() const { return std::accumulate(data_.begin(), data_.end(), 0.0); }

Vector Matrix::row_sums() const {
  Vector out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = row_sum(i);
  return out;
}

Vector Matrix::col_sums() const {
  Vector out(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out[j] += (*this)(i, j);
  return out;
}

Matrix Matrix::scaled(double factor) const {
  Matrix out = *this;
  for (double& v : out.data_) v *= factor;
  return out;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> rows(n_);
  for (std::size_t i = 0; i < n_; ++i) rows[i].assign(row(i).begin(), row(i).end());
  return rows;
}

double Matrix::max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.n_ != b.n_) throw Error(Errc::DimensionMismatch, "matrix sizes differ");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.data_.size(); ++k)
    worst = std::max(worst, std::abs(a.data_[k] - b.data_[k]));
  return worst;
}

}  // namespace tpm
