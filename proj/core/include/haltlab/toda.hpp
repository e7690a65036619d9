#pragma once

#include <vector>

#include "haltlab/linalg.hpp"
#include "haltlab/matrix.hpp"

namespace haltlab {

// Initial data of the Toda flow X' = [X, B(X)], B(X) = X_- - X_-^T:
// the eigenvalues of X(0) (descending) and the squared first components
// w_j = u_{1j}(0)^2 of its normalized eigenvectors.
struct SpectralData {
  std::vector<double> lambdas;
  std::vector<double> weights;

  static SpectralData from_decomposition(const EigenDecomposition& eig);
  static SpectralData from_matrix(const SymmetricMatrix& x0);

  std::size_t size() const { return lambdas.size(); }
  // Throws std::invalid_argument unless lambdas are non-increasing, weights
  // are non-negative and sum to 1 within 1e-12.
  void validate() const;
};

struct TodaHaltingResult {
  double t_halt = 0.0;
  double x11_at_halt = 0.0;
  double energy_at_halt = 0.0;
};

// w_j(t) = w_j e^{2 lambda_j t} / sum_k w_k e^{2 lambda_k t}, evaluated in
// log-sum-exp form so nothing overflows for large t.
std::vector<double> toda_weights_at(const SpectralData& sd, double t);

// X_11(t) = sum_j lambda_j w_j(t).
double toda_x11(const SpectralData& sd, double t);

// E(t) = sum_{k>=2} X_1k(t)^2 = sum_j (lambda_j - X_11(t))^2 w_j(t).
double toda_energy(const SpectralData& sd, double t);

struct TodaSolveOptions {
  double grid_step = 0.25;  // first grid point; the grid doubles from there
  double horizon = 1e7;
};

// First time with E(t) <= epsilon^2: scans the grid t = h 2^k for the first
// bracket whose right end satisfies the bound, then bisects down to adjacent
// doubles. Throws HorizonExceeded when no crossing exists before the
// horizon (numerically degenerate top gap).
TodaHaltingResult solve_t1(const SpectralData& sd, double epsilon,
                           const TodaSolveOptions& options = {});

// [X, B(X)]. Symmetric by construction.
SymmetricMatrix lax_rhs(const SymmetricMatrix& x);

// Classical RK4 for the Lax equation from 0 to t_end using ceil(t_end/dt)
// equal steps of size <= dt. Throws StepInvalid if dt <= 0 or dt > t_end.
SymmetricMatrix lax_rk4(const SymmetricMatrix& x0, double t_end, double dt);

// Sum of squares of the first row off the diagonal.
double first_row_energy(const SymmetricMatrix& x);

// Halting time by direct integration: RK4 steps of size dt until
// first_row_energy <= epsilon^2, then bisection on the length of the final
// partial step. Independent of the spectral engine; used to cross-check it.
double lax_t1(const SymmetricMatrix& x0, double epsilon, double dt = 1e-3,
              double horizon = 1e5);

}  // namespace haltlab
