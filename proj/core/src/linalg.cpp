#include "haltlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "haltlab/errors.hpp"

namespace haltlab {
namespace {

// Householder reflectors H_k = I - 2 v_k v_k^T, v_k supported on [k, n).
struct Reflectors {
  std::size_t n = 0;
  std::vector<std::vector<double>> v;  // v[k] has length n - k, unit norm or empty
};

// Overwrites `a` with R and returns the reflectors such that
// H_{n-2} ... H_0 a = R.
Reflectors householder_triangularize(Matrix& a) {
  const std::size_t n = a.rows();
  Reflectors refl{n, std::vector<std::vector<double>>(n)};
  if (n < 2) return refl;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::vector<double> x(n - k);
    for (std::size_t i = k; i < n; ++i) x[i - k] = a(i, k);
    // Column already reduced: no reflector, R_kk = a_kk.
    if (norm2(std::span<const double>(x).subspan(1)) == 0.0) continue;
    const double xnorm = norm2(x);
    const double alpha = x[0] >= 0.0 ? -xnorm : xnorm;
    x[0] -= alpha;
    const double vnorm = norm2(x);
    if (vnorm == 0.0) continue;
    for (double& xi : x) xi /= vnorm;

    // a[k:, k:] -= 2 v (v^T a[k:, k:])
    std::vector<double> vta(n - k, 0.0);
    for (std::size_t i = k; i < n; ++i) {
      const double vi = x[i - k];
      if (vi == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) vta[j - k] += vi * a(i, j);
    }
    for (std::size_t i = k; i < n; ++i) {
      const double vi2 = 2.0 * x[i - k];
      if (vi2 == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= vi2 * vta[j - k];
    }
    a(k, k) = alpha;
    for (std::size_t i = k + 1; i < n; ++i) a(i, k) = 0.0;
    refl.v[k] = std::move(x);
  }
  return refl;
}

// m <- m * H_k for every reflector, in order k = 0, 1, ...
void apply_reflectors_right(Matrix& m, const Reflectors& refl) {
  const std::size_t rows = m.rows();
  for (std::size_t k = 0; k < refl.v.size(); ++k) {
    const auto& v = refl.v[k];
    if (v.empty()) continue;
    for (std::size_t i = 0; i < rows; ++i) {
      auto r = m.row(i);
      double s = 0.0;
      for (std::size_t j = k; j < refl.n; ++j) s += r[j] * v[j - k];
      s *= 2.0;
      if (s == 0.0) continue;
      for (std::size_t j = k; j < refl.n; ++j) r[j] -= s * v[j - k];
    }
  }
}

// Signs d_i so that D R has a non-negative diagonal.
std::vector<double> diagonal_signs(const Matrix& r) {
  std::vector<double> d(r.rows(), 1.0);
  for (std::size_t i = 0; i < r.rows(); ++i)
    if (r(i, i) < 0.0) d[i] = -1.0;
  return d;
}

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols())
    throw std::invalid_argument(std::string(what) + ": matrix is not square");
}

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // length n - 1 (empty for n <= 1)
  Matrix q;                 // empty when not accumulated
};

Tridiagonal householder_tridiagonal(const SymmetricMatrix& m, bool accumulate) {
  const std::size_t n = m.size();
  Matrix a = m.to_matrix();
  Matrix q = accumulate ? Matrix::identity(n) : Matrix();
  std::vector<double> v, w;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t len = n - k - 1;
    v.assign(len, 0.0);
    for (std::size_t i = 0; i < len; ++i) v[i] = a(k + 1 + i, k);
    const double xnorm = norm2(v);
    if (xnorm == 0.0) continue;
    const double alpha = v[0] >= 0.0 ? -xnorm : xnorm;
    v[0] -= alpha;
    const double vnorm = norm2(v);
    if (vnorm == 0.0) continue;
    for (double& vi : v) vi /= vnorm;

    // Trailing block A22 <- H A22 H via w = A22 v, q = w - (v^T w) v.
    w.assign(len, 0.0);
    for (std::size_t i = 0; i < len; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < len; ++j) s += a(k + 1 + i, k + 1 + j) * v[j];
      w[i] = s;
    }
    const double kappa = dot(v, w);
    for (std::size_t i = 0; i < len; ++i) w[i] -= kappa * v[i];
    for (std::size_t i = 0; i < len; ++i)
      for (std::size_t j = 0; j < len; ++j)
        a(k + 1 + i, k + 1 + j) -= 2.0 * (v[i] * w[j] + w[i] * v[j]);

    a(k + 1, k) = alpha;
    a(k, k + 1) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) {
      a(i, k) = 0.0;
      a(k, i) = 0.0;
    }
    if (accumulate) {
      for (std::size_t r = 0; r < n; ++r) {
        auto qr = q.row(r);
        double s = 0.0;
        for (std::size_t j = 0; j < len; ++j) s += qr[k + 1 + j] * v[j];
        s *= 2.0;
        if (s == 0.0) continue;
        for (std::size_t j = 0; j < len; ++j) qr[k + 1 + j] -= s * v[j];
      }
    }
  }
  Tridiagonal out;
  out.diag.resize(n);
  out.off.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) out.diag[i] = a(i, i);
  // The two triangles drift apart by rounding; average them.
  for (std::size_t i = 0; i + 1 < n; ++i) out.off[i] = 0.5 * (a(i + 1, i) + a(i, i + 1));
  out.q = std::move(q);
  return out;
}

// Implicit Wilkinson-shifted QR on a symmetric tridiagonal (diag, off).
// Rotations are accumulated into the columns of z when z is non-empty.
void tridiagonal_qr(std::vector<double>& d, std::vector<double>& e, Matrix* z) {
  const std::size_t n = d.size();
  if (n < 2) return;
  constexpr double kRelDeflation = 1e-15;
  std::size_t hi = n - 1;
  std::size_t last_hi = hi;
  int sweeps = 0;
  while (true) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::fabs(e[i]) <= kRelDeflation * (std::fabs(d[i]) + std::fabs(d[i + 1])) ||
          std::fabs(e[i]) < std::numeric_limits<double>::min())
        e[i] = 0.0;
    }
    while (hi > 0 && e[hi - 1] == 0.0) --hi;
    if (hi == 0) break;
    if (hi != last_hi) {
      last_hi = hi;
      sweeps = 0;
    }
    if (++sweeps > kMaxSweepsPerEigenvalue)
      throw IterationLimitExceeded("eigen_oracle: eigenvalue " + std::to_string(hi) +
                                   " did not converge within 50 sweeps");
    std::size_t lo = hi - 1;
    while (lo > 0 && e[lo - 1] != 0.0) --lo;

    const double a = d[hi - 1];
    const double b = e[hi - 1];
    const double c = d[hi];
    const double half = 0.5 * (a - c);
    const double denom = half + std::copysign(std::hypot(half, b), half);
    const double mu = c - b * (b / denom);

    double x = d[lo] - mu;
    double zb = e[lo];
    for (std::size_t k = lo; k < hi; ++k) {
      const double r = std::hypot(x, zb);
      const double cs = r == 0.0 ? 1.0 : x / r;
      const double sn = r == 0.0 ? 0.0 : zb / r;
      if (k > lo) e[k - 1] = r;

      const double dk = d[k];
      const double ek = e[k];
      const double dk1 = d[k + 1];
      d[k] = cs * cs * dk + 2.0 * cs * sn * ek + sn * sn * dk1;
      d[k + 1] = sn * sn * dk - 2.0 * cs * sn * ek + cs * cs * dk1;
      e[k] = cs * sn * (dk1 - dk) + (cs * cs - sn * sn) * ek;
      if (k + 1 < hi) {
        zb = sn * e[k + 1];
        e[k + 1] *= cs;
      }
      x = e[k];

      if (z != nullptr) {
        for (std::size_t row = 0; row < z->rows(); ++row) {
          auto zr = z->row(row);
          const double zk = zr[k];
          const double zk1 = zr[k + 1];
          zr[k] = cs * zk + sn * zk1;
          zr[k + 1] = -sn * zk + cs * zk1;
        }
      }
    }
  }
}

}  // namespace

QRFactorization qr_factorize(const Matrix& a) {
  require_square(a, "qr_factorize");
  const std::size_t n = a.rows();
  Matrix r = a;
  const Reflectors refl = householder_triangularize(r);
  Matrix q = Matrix::identity(n);
  apply_reflectors_right(q, refl);
  const auto signs = diagonal_signs(r);
  for (std::size_t i = 0; i < n; ++i) {
    if (signs[i] > 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      r(i, j) = -r(i, j);
      q(j, i) = -q(j, i);
    }
  }
  return {std::move(q), std::move(r)};
}

Matrix rq_product(const Matrix& a) {
  require_square(a, "rq_product");
  const std::size_t n = a.rows();
  Matrix r = a;
  const Reflectors refl = householder_triangularize(r);
  const auto signs = diagonal_signs(r);
  // (D R)(Q D) = D (R Q) D
  apply_reflectors_right(r, refl);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) *= signs[i] * signs[j];
  return r;
}

Tridiagonalization tridiagonalize(const SymmetricMatrix& m) {
  Tridiagonal td = householder_tridiagonal(m, true);
  const std::size_t n = m.size();
  SymmetricMatrix t(n);
  for (std::size_t i = 0; i < n; ++i) t.set(i, i, td.diag[i]);
  for (std::size_t i = 0; i + 1 < n; ++i) t.set(i, i + 1, td.off[i]);
  return {std::move(t), std::move(td.q)};
}

std::vector<double> EigenDecomposition::first_components() const {
  std::vector<double> u(size());
  for (std::size_t j = 0; j < size(); ++j) u[j] = eigenvectors(0, j);
  return u;
}

EigenDecomposition eigen_oracle(const SymmetricMatrix& m) {
  Tridiagonal td = householder_tridiagonal(m, true);
  tridiagonal_qr(td.diag, td.off, &td.q);

  const std::size_t n = m.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return td.diag[i] > td.diag[j]; });
  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = td.diag[order[j]];
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = td.q(i, order[j]);
  }
  return out;
}

std::vector<double> symmetric_eigenvalues(const SymmetricMatrix& m) {
  Tridiagonal td = householder_tridiagonal(m, false);
  tridiagonal_qr(td.diag, td.off, nullptr);
  std::sort(td.diag.begin(), td.diag.end(), std::greater<>());
  return td.diag;
}

}  // namespace haltlab
