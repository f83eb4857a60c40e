#include "sepnmf/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sepnmf/error.hpp"

namespace sepnmf {

namespace {

void check_shape(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw InvalidArgument("DenseMatrix: shape " + std::to_string(rows) + "x" +
                          std::to_string(cols) + " is empty");
  }
}

void check_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument(std::string(op) + ": shape mismatch");
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols) {
  check_shape(rows, cols);
  if (!std::isfinite(fill)) throw InvalidArgument("DenseMatrix: non-finite fill value");
  data_.assign(rows * cols, fill);
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major)
    : rows_(rows), cols_(cols), data_(std::move(column_major)) {
  check_shape(rows, cols);
  if (data_.size() != rows * cols) {
    throw InvalidArgument("DenseMatrix: expected " + std::to_string(rows * cols) +
                          " values, got " + std::to_string(data_.size()));
  }
  if (!all_finite()) throw InvalidArgument("DenseMatrix: non-finite entry");
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t m = rows.size();
  const std::size_t n = m == 0 ? 0 : rows.begin()->size();
  check_shape(m, n);
  std::vector<double> data(m * n);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != n) throw InvalidArgument("DenseMatrix::from_rows: ragged rows");
    std::size_t j = 0;
    for (double v : row) data[j++ * m + i] = v;
    ++i;
  }
  return DenseMatrix(m, n, std::move(data));
}

DenseMatrix DenseMatrix::from_columns(const std::vector<Vector>& columns) {
  const std::size_t n = columns.size();
  const std::size_t m = n == 0 ? 0 : columns.front().size();
  check_shape(m, n);
  std::vector<double> data;
  data.reserve(m * n);
  for (const auto& c : columns) {
    if (c.size() != m) throw InvalidArgument("DenseMatrix::from_columns: ragged columns");
    data.insert(data.end(), c.begin(), c.end());
  }
  return DenseMatrix(m, n, std::move(data));
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix out(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) out(j, i) = (*this)(i, j);
  return out;
}

DenseMatrix DenseMatrix::select_columns(std::span<const std::size_t> indices) const {
  DenseMatrix out(rows_, indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= cols_) throw InvalidArgument("select_columns: index out of range");
    std::ranges::copy(col(indices[k]), out.col(k).begin());
  }
  return out;
}

DenseMatrix DenseMatrix::hcat(const DenseMatrix& other) const {
  if (other.rows_ != rows_) throw InvalidArgument("hcat: row count mismatch");
  std::vector<double> data(data_);
  data.insert(data.end(), other.data_.begin(), other.data_.end());
  return DenseMatrix(rows_, cols_ + other.cols_, std::move(data));
}

bool DenseMatrix::all_finite() const noexcept {
  return std::ranges::all_of(data_, [](double v) { return std::isfinite(v); });
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  check_same_shape(a, b, "operator+");
  DenseMatrix out = a;
  auto dst = out.data();
  auto src = b.data();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
  return out;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  check_same_shape(a, b, "operator-");
  DenseMatrix out = a;
  auto dst = out.data();
  auto src = b.data();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] -= src[k];
  return out;
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
  DenseMatrix out = a;
  for (double& v : out.data()) v *= s;
  return out;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw InvalidArgument("matmul: inner dimension mismatch");
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto dst = out.col(j);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double s = b(k, j);
      if (s == 0.0) continue;
      auto src = a.col(k);
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += s * src[i];
    }
  }
  return out;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw InvalidArgument("matmul_tn: row count mismatch");
  DenseMatrix out(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t i = 0; i < a.cols(); ++i) out(i, j) = dot(a.col(i), b.col(j));
  return out;
}

Vector matvec(const DenseMatrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) throw InvalidArgument("matvec: dimension mismatch");
  Vector out(a.rows(), 0.0);
  for (std::size_t k = 0; k < a.cols(); ++k) {
    auto src = a.col(k);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += x[k] * src[i];
  }
  return out;
}

Vector matvec_t(const DenseMatrix& a, std::span<const double> x) {
  if (x.size() != a.rows()) throw InvalidArgument("matvec_t: dimension mismatch");
  Vector out(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) out[j] = dot(a.col(j), x);
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) noexcept { return std::sqrt(dot(a, a)); }

double frobenius_norm(const DenseMatrix& a) noexcept { return norm2(a.data()); }

double max_column_norm(const DenseMatrix& a) noexcept {
  double best = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) best = std::max(best, dot(a.col(j), a.col(j)));
  return std::sqrt(best);
}

}  // namespace sepnmf
