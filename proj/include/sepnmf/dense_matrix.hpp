#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace sepnmf {

using Vector = std::vector<double>;

/// Column-major dense real matrix.
///
/// Every constructor rejects empty shapes and non-finite values. Element
/// access is unchecked in release builds; columns are exposed as spans since
/// all of the extraction algorithms walk the data column by column.
class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major);

  /// Row-wise literal, e.g. `from_rows({{1, 0}, {0, 1}})`.
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static DenseMatrix from_columns(const std::vector<Vector>& columns);
  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * rows_ + i]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * rows_ + i]; }

  std::span<const double> col(std::size_t j) const noexcept {
    return {data_.data() + j * rows_, rows_};
  }
  std::span<double> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  DenseMatrix transpose() const;
  DenseMatrix select_columns(std::span<const std::size_t> indices) const;
  /// Horizontal concatenation [*this, other].
  DenseMatrix hcat(const DenseMatrix& other) const;

  bool all_finite() const noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);

/// a * b
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// a^T * b
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
/// a * x
Vector matvec(const DenseMatrix& a, std::span<const double> x);
/// a^T * x
Vector matvec_t(const DenseMatrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b) noexcept;
double norm2(std::span<const double> a) noexcept;
double frobenius_norm(const DenseMatrix& a) noexcept;
/// Largest column l2 norm.
double max_column_norm(const DenseMatrix& a) noexcept;

}  // namespace sepnmf
