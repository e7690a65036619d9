#include "haltlab/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "haltlab/errors.hpp"
#include "haltlab/linalg.hpp"

namespace haltlab {

SymmetricMatrix qr_step(const SymmetricMatrix& x) {
  if (x.is_diagonal()) return x;
  return SymmetricMatrix::symmetrized(rq_product(x.to_matrix()));
}

double wilkinson_shift(const SymmetricMatrix& x) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("wilkinson_shift: need n >= 2");
  const double a = x(n - 2, n - 2);
  const double b = x(n - 2, n - 1);
  const double c = x(n - 1, n - 1);
  if (b == 0.0) return c;
  const double half = 0.5 * (a - c);
  const double denom = half + std::copysign(std::hypot(half, b), half);
  return c - b * (b / denom);
}

SymmetricMatrix qr_shifted_step(const SymmetricMatrix& x) {
  if (x.is_diagonal()) return x;
  const std::size_t n = x.size();
  const double mu = wilkinson_shift(x);
  Matrix shifted = x.to_matrix();
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= mu;
  Matrix rq = rq_product(shifted);
  for (std::size_t i = 0; i < n; ++i) rq(i, i) += mu;
  return SymmetricMatrix::symmetrized(rq);
}

SymmetricMatrix jacobi_step(const SymmetricMatrix& x) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("jacobi_step: need n >= 2");
  std::size_t p = 0, q = 1;
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::fabs(x(i, j)) > best) {
        best = std::fabs(x(i, j));
        p = i;
        q = j;
      }
  if (best == 0.0) return x;

  const double app = x(p, p);
  const double aqq = x(q, q);
  const double apq = x(p, q);
  // t = tan(angle) is the smaller root of t^2 + 2 theta t - 1 = 0; for
  // theta = 0 the larger diagonal value lands at p.
  const double theta = (app - aqq) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  SymmetricMatrix y = x;
  for (std::size_t r = 0; r < n; ++r) {
    if (r == p || r == q) continue;
    const double xrp = x(r, p);
    const double xrq = x(r, q);
    y.set(r, p, c * xrp + s * xrq);
    y.set(r, q, -s * xrp + c * xrq);
  }
  y.set(p, p, app + t * apq);
  y.set(q, q, aqq - t * apq);
  y.set(p, q, 0.0);
  return y;
}

SymmetricMatrix iterate_once(Algorithm algorithm, const SymmetricMatrix& x) {
  switch (algorithm) {
    case Algorithm::QR: return qr_step(x);
    case Algorithm::QRShifted: return qr_shifted_step(x);
    case Algorithm::Jacobi: return jacobi_step(x);
    default: break;
  }
  throw std::invalid_argument("iterate_once: " + std::string(to_string(algorithm)) +
                              " is not a discrete eigenvalue iteration");
}

IterationTrace::IterationTrace(Algorithm algorithm, SymmetricMatrix x0)
    : algorithm_(algorithm), state_(std::move(x0)) {
  if (!is_discrete_eigen(algorithm))
    throw std::invalid_argument("IterationTrace: unsupported algorithm");
}

const SymmetricMatrix& IterationTrace::advance() {
  state_ = iterate_once(algorithm_, state_);
  ++steps_;
  return state_;
}

std::vector<double> block_norms(const SymmetricMatrix& x) {
  const std::size_t n = x.size();
  if (n < 2) return {};
  // sq[k-1] accumulates sum_{i<k} suffix_i(k), suffix_i(k) = sum_{j>=k} x_ij^2.
  std::vector<double> sq(n - 1, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    auto row = x.row(i);
    double suffix = 0.0;
    for (std::size_t k = n - 1; k > i; --k) {
      suffix += row[k] * row[k];
      sq[k - 1] += suffix;
    }
  }
  for (double& v : sq) v = std::sqrt(v);
  return sq;
}

double block_norm(const SymmetricMatrix& x, std::size_t k) {
  const std::size_t n = x.size();
  if (k < 1 || k >= n) throw std::invalid_argument("block_norm: need 1 <= k <= n-1");
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = k; j < n; ++j) s += x(i, j) * x(i, j);
  return std::sqrt(s);
}

namespace {

void require_split_input(const SymmetricMatrix& x0, double epsilon, const char* op) {
  if (x0.size() < 2) throw std::invalid_argument(std::string(op) + ": need n >= 2");
  if (!(epsilon > 0.0)) throw std::invalid_argument(std::string(op) + ": epsilon must be positive");
}

[[noreturn]] void iteration_limit(const char* op, std::size_t max_steps) {
  throw IterationLimitExceeded(std::string(op) + ": no deflation within " +
                               std::to_string(max_steps) + " iterations");
}

}  // namespace

DeflationRecord deflation_time_k(Algorithm algorithm, const SymmetricMatrix& x0, std::size_t k,
                                 double epsilon, std::size_t max_steps) {
  require_split_input(x0, epsilon, "deflation_time_k");
  if (k < 1 || k >= x0.size()) throw std::invalid_argument("deflation_time_k: need 1 <= k <= n-1");
  IterationTrace trace(algorithm, x0);
  while (true) {
    const double norm = block_norm(trace.current(), k);
    if (norm <= epsilon) return {trace.step_count(), k, norm, trace.current()};
    if (trace.step_count() >= max_steps) iteration_limit("deflation_time_k", max_steps);
    trace.advance();
  }
}

DeflationRecord deflation_time(Algorithm algorithm, const SymmetricMatrix& x0, double epsilon,
                               std::size_t max_steps) {
  require_split_input(x0, epsilon, "deflation_time");
  IterationTrace trace(algorithm, x0);
  while (true) {
    const auto norms = block_norms(trace.current());
    for (std::size_t k = 1; k <= norms.size(); ++k)
      if (norms[k - 1] <= epsilon) return {trace.step_count(), k, norms[k - 1], trace.current()};
    if (trace.step_count() >= max_steps) iteration_limit("deflation_time", max_steps);
    trace.advance();
  }
}

TodaHaltingResult toda_deflation_time_k(const SpectralData& sd, std::size_t k, double epsilon,
                                        const TodaSolveOptions& options) {
  if (k != 1)
    throw std::invalid_argument("toda_deflation_time_k: only the 1-deflation time is available");
  return solve_t1(sd, epsilon, options);
}

SpectrumResult compute_spectrum_with_deflation(const SymmetricMatrix& x0, double epsilon,
                                               Algorithm algorithm, std::size_t max_steps) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("compute_spectrum_with_deflation: epsilon must be positive");
  SpectrumResult out;
  std::vector<SymmetricMatrix> pending;
  pending.push_back(x0);
  while (!pending.empty()) {
    SymmetricMatrix block = std::move(pending.back());
    pending.pop_back();
    if (block.size() == 0) continue;
    if (block.size() == 1) {
      out.eigenvalues.push_back(block(0, 0));
      continue;
    }
    DeflationRecord rec = deflation_time(algorithm, block, epsilon, max_steps);
    ++out.deflation_count;
    out.total_steps += rec.steps;
    out.block_steps.push_back(rec.steps);
    const std::size_t n = rec.state.size();
    pending.push_back(rec.state.block(rec.k_hat, n));
    pending.push_back(rec.state.block(0, rec.k_hat));
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), std::greater<>());
  return out;
}

CgResult cg_solve(const SymmetricMatrix& h, std::span<const double> b, double epsilon,
                  std::size_t max_iterations, std::span<const double> exact_solution) {
  const std::size_t n = h.size();
  if (b.size() != n) throw std::invalid_argument("cg_solve: dimension mismatch");
  const bool track_error = !exact_solution.empty();

  CgResult out;
  out.solution.assign(n, 0.0);
  std::vector<double> r(b.begin(), b.end());
  std::vector<double> p = r;
  double rr = dot(r, r);
  out.residual_norms.push_back(std::sqrt(rr));

  auto record_error = [&] {
    std::vector<double> e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = out.solution[i] - exact_solution[i];
    out.error_a_norms.push_back(std::sqrt(std::max(0.0, dot(e, multiply(h, e)))));
  };
  if (track_error) record_error();

  while (true) {
    if (out.residual_norms.back() <= epsilon) {
      out.converged = true;
      return out;
    }
    if (out.iterations >= max_iterations) return out;
    const auto hp = multiply(h, p);
    const double curvature = dot(p, hp);
    if (!(curvature > 0.0))
      throw NotPositiveDefinite("cg_solve: non-positive curvature p^T H p = " +
                                std::to_string(curvature));
    const double alpha = rr / curvature;
    for (std::size_t i = 0; i < n; ++i) {
      out.solution[i] += alpha * p[i];
      r[i] -= alpha * hp[i];
    }
    const double rr_next = dot(r, r);
    const double beta = rr_next / rr;
    rr = rr_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    ++out.iterations;
    out.residual_norms.push_back(std::sqrt(rr));
    if (track_error) record_error();
  }
}

std::size_t cg_halting_time(const SymmetricMatrix& h, std::span<const double> b, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("cg_halting_time: epsilon must be positive");
  const std::size_t cap = 10 * h.size();
  const CgResult res = cg_solve(h, b, epsilon, cap);
  if (!res.converged)
    throw IterationLimitExceeded("cg_halting_time: residual above epsilon after " +
                                 std::to_string(cap) + " iterations");
  return res.iterations;
}

}  // namespace haltlab
