#include "haltlab/matrix.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace haltlab {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::frobenius_norm() const { return norm2(data_); }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix difference: shape mismatch");
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t n) {
  SymmetricMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

SymmetricMatrix SymmetricMatrix::diagonal(std::span<const double> d) {
  SymmetricMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
  return m;
}

SymmetricMatrix SymmetricMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  SymmetricMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw std::invalid_argument("from_rows: matrix is not square");
    for (std::size_t j = i; j < n; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

SymmetricMatrix SymmetricMatrix::symmetrized(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("symmetrized: matrix is not square");
  SymmetricMatrix m(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    m.set(i, i, a(i, i));
    for (std::size_t j = i + 1; j < a.cols(); ++j) m.set(i, j, 0.5 * (a(i, j) + a(j, i)));
  }
  return m;
}

SymmetricMatrix SymmetricMatrix::from_upper(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("from_upper: matrix is not square");
  SymmetricMatrix m(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j) m.set(i, j, a(i, j));
  return m;
}

SymmetricMatrix& SymmetricMatrix::axpy(double a, const SymmetricMatrix& x) {
  if (x.n_ != n_) throw std::invalid_argument("axpy: dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += a * x.data_[k];
  return *this;
}

double SymmetricMatrix::trace() const {
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) s += (*this)(i, i);
  return s;
}

double SymmetricMatrix::frobenius_norm() const { return norm2(data_); }

double SymmetricMatrix::off_diagonal_sq() const {
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j) s += (*this)(i, j) * (*this)(i, j);
  return 2.0 * s;
}

bool SymmetricMatrix::is_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

bool SymmetricMatrix::is_diagonal() const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if ((*this)(i, j) != 0.0) return false;
  return true;
}

SymmetricMatrix SymmetricMatrix::block(std::size_t begin, std::size_t end) const {
  assert(begin <= end && end <= n_);
  SymmetricMatrix b(end - begin);
  for (std::size_t i = begin; i < end; ++i)
    for (std::size_t j = i; j < end; ++j) b.set(i - begin, j - begin, (*this)(i, j));
  return b;
}

Matrix SymmetricMatrix::to_matrix() const {
  Matrix m(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) {
  // Scaled accumulation keeps tiny and huge entries representable.
  double scale = 0.0;
  double ssq = 1.0;
  for (double v : a) {
    if (v == 0.0) continue;
    const double av = std::fabs(v);
    if (scale < av) {
      ssq = 1.0 + ssq * (scale / av) * (scale / av);
      scale = av;
    } else {
      ssq += (av / scale) * (av / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

std::vector<double> multiply(const SymmetricMatrix& a, std::span<const double> x) {
  assert(a.size() == x.size());
  std::vector<double> y(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

}  // namespace haltlab
