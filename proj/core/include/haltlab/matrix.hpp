#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace haltlab {

// Dense row-major real matrix. Used for factors (Q, R), rectangular
// sampling buffers and intermediate products.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<const double> values() const { return data_; }

  Matrix transposed() const;
  double frobenius_norm() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Dense real symmetric matrix. Every write goes through set(), which updates
// both (i,j) and (j,i), so entry(i,j) == entry(j,i) holds bit-for-bit.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  static SymmetricMatrix identity(std::size_t n);
  static SymmetricMatrix diagonal(std::span<const double> d);
  // Builds from nested rows; only the upper triangle is read.
  static SymmetricMatrix from_rows(const std::vector<std::vector<double>>& rows);
  // Symmetrizes a square matrix as (A + A^T) / 2.
  static SymmetricMatrix symmetrized(const Matrix& a);
  // Copies the upper triangle of a square matrix.
  static SymmetricMatrix from_upper(const Matrix& a);

  std::size_t size() const { return n_; }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    data_[i * n_ + j] = v;
    data_[j * n_ + i] = v;
  }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

  // this += a * x. Both operands are exactly symmetric, so the sum is too.
  SymmetricMatrix& axpy(double a, const SymmetricMatrix& x);

  double trace() const;
  double frobenius_norm() const;
  // Sum of squared off-diagonal entries (both triangles).
  double off_diagonal_sq() const;
  bool is_finite() const;
  bool is_diagonal() const;

  // Principal submatrix on rows/columns [begin, end).
  SymmetricMatrix block(std::size_t begin, std::size_t end) const;

  Matrix to_matrix() const;

  friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
std::vector<double> multiply(const SymmetricMatrix& a, std::span<const double> x);

}  // namespace haltlab
