#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "haltlab/ensembles.hpp"
#include "haltlab/errors.hpp"
#include "haltlab/linalg.hpp"

using namespace haltlab;

namespace {

Matrix mat(std::vector<std::vector<double>> rows) {
  Matrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

SymmetricMatrix goe(std::size_t n, std::uint64_t idx) {
  EnsembleSpec spec;
  spec.n = n;
  return sample_goe(spec, {7, idx});
}

// Number of eigenvalues of the tridiagonal (d, e) strictly below x.
std::size_t sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double off = i == 0 ? 0.0 : e[i - 1] * e[i - 1];
    q = d[i] - x - (i == 0 ? 0.0 : off / q);
    if (q == 0.0) q = -1e-300;
    if (q < 0.0) ++count;
  }
  return count;
}

// Bisection oracle on the Sturm sequence, descending.
std::vector<double> sturm_eigenvalues(const SymmetricMatrix& t) {
  const std::size_t n = t.size();
  std::vector<double> d(n), e(n > 0 ? n - 1 : 0);
  double bound = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = t(i, i);
    if (i + 1 < n) e[i] = t(i, i + 1);
    double r = std::abs(d[i]);
    if (i > 0) r += std::abs(t(i, i - 1));
    if (i + 1 < n) r += std::abs(t(i, i + 1));
    bound = std::max(bound, r);
  }
  std::vector<double> out;
  for (std::size_t k = 0; k < n; ++k) {
    // k-th smallest: smallest x with count(x) > k
    double lo = -bound - 1.0, hi = bound + 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (sturm_count(d, e, mid) > k) hi = mid; else lo = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

}  // namespace

TEST_CASE("qr of the identity is trivial") {
  const auto f = qr_factorize(Matrix::identity(3));
  CHECK(max_abs_diff(f.q, Matrix::identity(3)) == 0.0);
  CHECK(max_abs_diff(f.r, Matrix::identity(3)) == 0.0);
}

TEST_CASE("qr of the swap matrix") {
  const auto f = qr_factorize(mat({{0, 1}, {1, 0}}));
  CHECK(max_abs_diff(f.q, mat({{0, 1}, {1, 0}})) < 1e-15);
  CHECK(max_abs_diff(f.r, Matrix::identity(2)) < 1e-15);
}

TEST_CASE("qr of [[2,1],[1,2]] matches Gram-Schmidt by hand") {
  const double s5 = std::sqrt(5.0);
  const auto f = qr_factorize(mat({{2, 1}, {1, 2}}));
  CHECK(max_abs_diff(f.r, mat({{s5, 4 / s5}, {0, 3 / s5}})) < 1e-14);
  CHECK(max_abs_diff(f.q, mat({{2 / s5, -1 / s5}, {1 / s5, 2 / s5}})) < 1e-14);
}

TEST_CASE("qr reconstructs random matrices with orthogonal q") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Matrix a = goe(12, s).to_matrix();
    const auto f = qr_factorize(a);
    CHECK(max_abs_diff(f.q * f.r, a) < 1e-13);
    CHECK(max_abs_diff(f.q.transposed() * f.q, Matrix::identity(12)) < 1e-13);
    for (std::size_t i = 0; i < 12; ++i) {
      CHECK(f.r(i, i) >= 0.0);
      for (std::size_t j = 0; j < i; ++j) CHECK(f.r(i, j) == 0.0);
    }
    CHECK(max_abs_diff(rq_product(a), f.r * f.q) < 1e-13);
  }
}

TEST_CASE("tridiagonalize leaves tridiagonal input alone") {
  const std::vector<double> d{4, -1, 2, 0.5};
  const auto diag = tridiagonalize(SymmetricMatrix::diagonal(d));
  CHECK(diag.t == SymmetricMatrix::diagonal(d));
  CHECK(max_abs_diff(diag.q, Matrix::identity(4)) == 0.0);

  const auto two = SymmetricMatrix::from_rows({{1.5, -0.3}, {-0.3, 2}});
  const auto r = tridiagonalize(two);
  CHECK(r.t == two);
  CHECK(max_abs_diff(r.q, Matrix::identity(2)) == 0.0);
}

TEST_CASE("tridiagonalize reconstructs a random 8x8 draw") {
  const auto m = goe(8, 3);
  const auto r = tridiagonalize(m);
  const Matrix back = r.q.transposed() * m.to_matrix() * r.q;
  CHECK((back - r.t.to_matrix()).frobenius_norm() <= 1e-12 * m.frobenius_norm());
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = i + 2; j < 8; ++j) CHECK(r.t(i, j) == 0.0);
}

TEST_CASE("eigen_oracle on hand cases") {
  const auto d = eigen_oracle(SymmetricMatrix::diagonal(std::vector<double>{5, 2, -1}));
  CHECK(d.eigenvalues == std::vector<double>{5, 2, -1});
  for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(d.eigenvectors(j, j)) == doctest::Approx(1.0));

  const auto e = eigen_oracle(SymmetricMatrix::from_rows({{2, 1}, {1, 2}}));
  CHECK(e.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(e.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
  const double r = 1 / std::sqrt(2.0);
  CHECK(std::abs(e.eigenvectors(0, 0)) == doctest::Approx(r));
  CHECK(e.eigenvectors(0, 0) * e.eigenvectors(1, 0) > 0.0);
  CHECK(e.eigenvectors(0, 1) * e.eigenvectors(1, 1) < 0.0);
}

TEST_CASE("eigen_oracle satisfies the trace identities on a 20x20 draw") {
  const auto m = goe(20, 11);
  const auto e = eigen_oracle(m);
  double s1 = 0.0, s2 = 0.0;
  for (double l : e.eigenvalues) {
    s1 += l;
    s2 += l * l;
  }
  const double f2 = m.frobenius_norm() * m.frobenius_norm();
  CHECK(std::abs(s1 - m.trace()) <= 1e-10 * std::max(1.0, std::abs(m.trace())));
  CHECK(std::abs(s2 - f2) <= 1e-10 * f2);
}

TEST_CASE("eigen_oracle agrees with Sturm bisection and has small residuals") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto m = goe(30, 100 + s);
    const auto e = eigen_oracle(m);
    const auto oracle = sturm_eigenvalues(tridiagonalize(m).t);
    REQUIRE(oracle.size() == e.size());
    for (std::size_t j = 0; j < e.size(); ++j) {
      CHECK(std::abs(e.eigenvalues[j] - oracle[j]) < 1e-12);
      if (j > 0) CHECK(e.eigenvalues[j - 1] >= e.eigenvalues[j]);
    }
    const Matrix u = e.eigenvectors;
    CHECK(max_abs_diff(u.transposed() * u, Matrix::identity(30)) < 1e-12);
    const Matrix mu = m.to_matrix() * u;
    for (std::size_t j = 0; j < 30; ++j)
      for (std::size_t i = 0; i < 30; ++i)
        CHECK(std::abs(mu(i, j) - e.eigenvalues[j] * u(i, j)) < 1e-12);
    const auto ev = symmetric_eigenvalues(m);
    for (std::size_t j = 0; j < 30; ++j) CHECK(std::abs(ev[j] - e.eigenvalues[j]) < 1e-12);
  }
}

TEST_CASE("eigen_oracle handles repeated eigenvalues and 1x1") {
  const auto e = eigen_oracle(SymmetricMatrix::identity(5));
  for (double l : e.eigenvalues) CHECK(l == 1.0);
  const auto one = eigen_oracle(SymmetricMatrix::diagonal(std::vector<double>{-3}));
  CHECK(one.eigenvalues == std::vector<double>{-3});
  CHECK(std::abs(one.first_components().at(0)) == 1.0);
}
