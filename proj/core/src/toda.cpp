#include "haltlab/toda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "haltlab/errors.hpp"

namespace haltlab {
namespace {

struct FirstRowState {
  double x11;
  double energy;
};

// Both quantities are accumulated relative to lambda_1: with
// m = sum_j w_j (lambda_j - lambda_1) <= 0 we have X_11 = lambda_1 + m and
// E = sum_j w_j (lambda_j - lambda_1 - m)^2, which keeps full relative
// accuracy when the weights have almost all collapsed onto lambda_1.
FirstRowState first_row_state(const SpectralData& sd, double t) {
  const auto w = toda_weights_at(sd, t);
  const double top = sd.lambdas.front();
  double mean_shift = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) mean_shift += w[j] * (sd.lambdas[j] - top);
  double energy = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double d = sd.lambdas[j] - top - mean_shift;
    energy += w[j] * d * d;
  }
  return {top + std::min(mean_shift, 0.0), energy};
}

SymmetricMatrix rk4_step(const SymmetricMatrix& x, double h) {
  const SymmetricMatrix k1 = lax_rhs(x);
  SymmetricMatrix tmp = x;
  tmp.axpy(0.5 * h, k1);
  const SymmetricMatrix k2 = lax_rhs(tmp);
  tmp = x;
  tmp.axpy(0.5 * h, k2);
  const SymmetricMatrix k3 = lax_rhs(tmp);
  tmp = x;
  tmp.axpy(h, k3);
  const SymmetricMatrix k4 = lax_rhs(tmp);
  SymmetricMatrix out = x;
  out.axpy(h / 6.0, k1).axpy(h / 3.0, k2).axpy(h / 3.0, k3).axpy(h / 6.0, k4);
  return out;
}

}  // namespace

SpectralData SpectralData::from_decomposition(const EigenDecomposition& eig) {
  SpectralData sd;
  sd.lambdas = eig.eigenvalues;
  sd.weights.resize(eig.size());
  double total = 0.0;
  for (std::size_t j = 0; j < eig.size(); ++j) {
    const double u = eig.eigenvectors(0, j);
    sd.weights[j] = u * u;
    total += sd.weights[j];
  }
  for (double& w : sd.weights) w /= total;
  return sd;
}

SpectralData SpectralData::from_matrix(const SymmetricMatrix& x0) {
  return from_decomposition(eigen_oracle(x0));
}

void SpectralData::validate() const {
  if (lambdas.empty() || lambdas.size() != weights.size())
    throw std::invalid_argument("SpectralData: lambdas and weights must be non-empty and equal length");
  double total = 0.0;
  for (std::size_t j = 0; j < size(); ++j) {
    if (!(weights[j] >= 0.0)) throw std::invalid_argument("SpectralData: negative weight");
    if (j > 0 && lambdas[j] > lambdas[j - 1])
      throw std::invalid_argument("SpectralData: lambdas must be non-increasing");
    total += weights[j];
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw std::invalid_argument("SpectralData: weights sum to " + std::to_string(total));
}

std::vector<double> toda_weights_at(const SpectralData& sd, double t) {
  const std::size_t n = sd.size();
  std::vector<double> logw(n, -std::numeric_limits<double>::infinity());
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    if (sd.weights[j] <= 0.0) continue;
    logw[j] = std::log(sd.weights[j]) + 2.0 * sd.lambdas[j] * t;
    shift = std::max(shift, logw[j]);
  }
  std::vector<double> w(n, 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (sd.weights[j] <= 0.0) continue;
    w[j] = std::exp(logw[j] - shift);
    total += w[j];
  }
  for (double& v : w) v /= total;
  return w;
}

double toda_x11(const SpectralData& sd, double t) { return first_row_state(sd, t).x11; }

double toda_energy(const SpectralData& sd, double t) { return first_row_state(sd, t).energy; }

TodaHaltingResult solve_t1(const SpectralData& sd, double epsilon, const TodaSolveOptions& options) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("solve_t1: epsilon must be positive");
  if (!(options.grid_step > 0.0)) throw std::invalid_argument("solve_t1: grid step must be positive");
  const double target = epsilon * epsilon;

  auto result_at = [&](double t) {
    const FirstRowState s = first_row_state(sd, t);
    return TodaHaltingResult{t, s.x11, s.energy};
  };

  TodaHaltingResult at = result_at(0.0);
  if (at.energy_at_halt <= target) return at;

  double lo = 0.0;
  double hi = options.grid_step;
  while (true) {
    hi = std::min(hi, options.horizon);
    at = result_at(hi);
    if (at.energy_at_halt <= target) break;
    if (hi >= options.horizon)
      throw HorizonExceeded("solve_t1: E(t) stays above epsilon^2 up to t = " +
                            std::to_string(options.horizon));
    lo = hi;
    hi *= 2.0;
  }

  // Invariant: E(lo) > target >= E(hi). Bisect until lo and hi are adjacent
  // doubles; E is O(n) per evaluation, so the ~60 extra steps are free.
  while (true) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const TodaHaltingResult m = result_at(mid);
    if (m.energy_at_halt <= target) {
      hi = mid;
      at = m;
    } else {
      lo = mid;
    }
  }
  return at;
}

SymmetricMatrix lax_rhs(const SymmetricMatrix& x) {
  const std::size_t n = x.size();
  // P = X B with B_kj = x_kj for k > j and -x_kj for k < j. Since
  // B^T = -B, X B - B X = P + P^T.
  Matrix p(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto xi = x.row(i);
    auto pi = p.row(i);
    for (std::size_t k = 0; k < n; ++k) {
      const double xik = xi[k];
      if (xik == 0.0) continue;
      auto xk = x.row(k);
      for (std::size_t j = 0; j < k; ++j) pi[j] += xik * xk[j];
      for (std::size_t j = k + 1; j < n; ++j) pi[j] -= xik * xk[j];
    }
  }
  SymmetricMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) out.set(i, j, p(i, j) + p(j, i));
  return out;
}

SymmetricMatrix lax_rk4(const SymmetricMatrix& x0, double t_end, double dt) {
  if (!(dt > 0.0) || dt > t_end)
    throw StepInvalid("lax_rk4: need 0 < dt <= t_end, got dt = " + std::to_string(dt) +
                      ", t_end = " + std::to_string(t_end));
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  const double h = t_end / static_cast<double>(steps);
  SymmetricMatrix x = x0;
  for (std::size_t s = 0; s < steps; ++s) x = rk4_step(x, h);
  return x;
}

double first_row_energy(const SymmetricMatrix& x) {
  double e = 0.0;
  for (std::size_t j = 1; j < x.size(); ++j) e += x(0, j) * x(0, j);
  return e;
}

double lax_t1(const SymmetricMatrix& x0, double epsilon, double dt, double horizon) {
  if (!(dt > 0.0)) throw StepInvalid("lax_t1: dt must be positive");
  if (!(epsilon > 0.0)) throw std::invalid_argument("lax_t1: epsilon must be positive");
  const double target = epsilon * epsilon;
  if (first_row_energy(x0) <= target) return 0.0;

  SymmetricMatrix x = x0;
  double t = 0.0;
  while (true) {
    SymmetricMatrix next = rk4_step(x, dt);
    if (first_row_energy(next) <= target) break;
    x = std::move(next);
    t += dt;
    if (t > horizon) throw HorizonExceeded("lax_t1: no crossing before the horizon");
  }
  double lo = 0.0;
  double hi = dt;
  while (hi - lo > 1e-12 * (1.0 + t)) {
    const double mid = 0.5 * (lo + hi);
    if (first_row_energy(rk4_step(x, mid)) <= target)
      hi = mid;
    else
      lo = mid;
  }
  return t + hi;
}

}  // namespace haltlab
