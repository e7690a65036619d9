#pragma once

#include <vector>

#include "haltlab/matrix.hpp"

namespace haltlab {

struct QRFactorization {
  Matrix q;  // orthogonal
  Matrix r;  // upper triangular, non-negative diagonal
};

// Householder QR of a square matrix. The sign of each reflector is fixed
// afterwards so that diag(R) >= 0; with full rank this makes (Q, R) unique.
QRFactorization qr_factorize(const Matrix& a);

// R * Q for the factorization above, without forming Q explicitly.
// This is the inner kernel of one unshifted QR iteration.
Matrix rq_product(const Matrix& a);

struct Tridiagonalization {
  SymmetricMatrix t;  // tridiagonal, exact zeros outside the band
  Matrix q;           // q^T * m * q == t
};

Tridiagonalization tridiagonalize(const SymmetricMatrix& m);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // descending
  Matrix eigenvectors;              // column j pairs with eigenvalues[j]

  std::size_t size() const { return eigenvalues.size(); }
  // First component of each eigenvector, u_{1j}.
  std::vector<double> first_components() const;
};

inline constexpr double kEigenTolerance = 1e-12;
inline constexpr int kMaxSweepsPerEigenvalue = 50;

// Householder tridiagonalization followed by implicit Wilkinson-shifted QR
// sweeps on the tridiagonal. Off-diagonals are zeroed once they fall below
// 1e-15 relative to their neighbouring diagonal entries.
// Throws IterationLimitExceeded if one eigenvalue needs more than 50 sweeps.
EigenDecomposition eigen_oracle(const SymmetricMatrix& m);

// Same iteration without eigenvector accumulation. Descending order.
std::vector<double> symmetric_eigenvalues(const SymmetricMatrix& m);

}  // namespace haltlab
