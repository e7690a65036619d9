#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "haltlab/algorithm.hpp"
#include "haltlab/matrix.hpp"
#include "haltlab/toda.hpp"

namespace haltlab {

// One unshifted QR iteration: X = QR, return RQ. Uses the non-negative
// diag(R) convention, so the map is deterministic.
SymmetricMatrix qr_step(const SymmetricMatrix& x);

// Wilkinson shift taken from the trailing 2x2 block.
double wilkinson_shift(const SymmetricMatrix& x);

// X - mu I = QR, return RQ + mu I with mu = wilkinson_shift(X).
SymmetricMatrix qr_shifted_step(const SymmetricMatrix& x);

// Classical Jacobi: rotate away the largest |x_pq|, p < q, ties going to the
// lexicographically smallest (p, q). Diagonal input is returned unchanged.
SymmetricMatrix jacobi_step(const SymmetricMatrix& x);

// Dispatch for QR, QRShifted and Jacobi; throws std::invalid_argument otherwise.
SymmetricMatrix iterate_once(Algorithm algorithm, const SymmetricMatrix& x);

// Lazily generated iterates X_0, X_1, ... of a discrete algorithm.
class IterationTrace {
 public:
  IterationTrace(Algorithm algorithm, SymmetricMatrix x0);

  Algorithm algorithm() const { return algorithm_; }
  const SymmetricMatrix& current() const { return state_; }
  std::size_t step_count() const { return steps_; }
  const SymmetricMatrix& advance();

 private:
  Algorithm algorithm_;
  SymmetricMatrix state_;
  std::size_t steps_ = 0;
};

// Frobenius norms of the k x (n-k) coupling blocks for k = 1..n-1
// (element k-1 holds split k). O(n^2) through per-row suffix sums of
// squares, which avoids the cancellation a subtractive update would suffer
// at block norms near 1e-10.
std::vector<double> block_norms(const SymmetricMatrix& x);
double block_norm(const SymmetricMatrix& x, std::size_t k);

inline constexpr std::size_t kMaxEigenIterations = 1'000'000;

struct DeflationRecord {
  std::size_t steps = 0;   // iterations performed
  std::size_t k_hat = 1;   // split index, 1 <= k_hat <= n-1
  double block_norm = 0.0;
  SymmetricMatrix state;   // iterate at which the split was detected
};

// Smallest m such that the k-th coupling block of X_m has norm <= epsilon.
// Throws IterationLimitExceeded beyond max_steps.
DeflationRecord deflation_time_k(Algorithm algorithm, const SymmetricMatrix& x0, std::size_t k,
                                 double epsilon, std::size_t max_steps = kMaxEigenIterations);

// min over k of deflation_time_k in a single pass; k_hat is the smallest
// passing split at the first step where any split passes.
DeflationRecord deflation_time(Algorithm algorithm, const SymmetricMatrix& x0, double epsilon,
                               std::size_t max_steps = kMaxEigenIterations);

// Continuous analogue for the Toda flow. Only k = 1 is supported; the
// coupling block norm is then sqrt(E(t)) and this is solve_t1.
TodaHaltingResult toda_deflation_time_k(const SpectralData& sd, std::size_t k, double epsilon,
                                        const TodaSolveOptions& options = {});

struct SpectrumResult {
  std::vector<double> eigenvalues;       // descending
  std::size_t deflation_count = 0;
  std::size_t total_steps = 0;           // summed over all blocks
  std::vector<std::size_t> block_steps;  // per deflation, in processing order
};

// Runs to the deflation time, projects onto diag(X11, X22) and recurses on
// both blocks until all blocks are 1x1.
SpectrumResult compute_spectrum_with_deflation(const SymmetricMatrix& x0, double epsilon,
                                               Algorithm algorithm,
                                               std::size_t max_steps = kMaxEigenIterations);

struct CgResult {
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> solution;
  std::vector<double> residual_norms;  // ||r_k||, k = 0..iterations
  std::vector<double> error_a_norms;   // filled only when an exact solution is supplied
};

// Conjugate gradient from x_0 = 0, stopping at the first k with
// ||b - H x_k|| <= epsilon or after max_iterations.
// Throws NotPositiveDefinite when a curvature p^T H p <= 0 is met.
CgResult cg_solve(const SymmetricMatrix& h, std::span<const double> b, double epsilon,
                  std::size_t max_iterations, std::span<const double> exact_solution = {});

// Halting time of cg_solve capped at 10 n iterations
// (IterationLimitExceeded beyond).
std::size_t cg_halting_time(const SymmetricMatrix& h, std::span<const double> b, double epsilon);

}  // namespace haltlab
