#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "haltlab/ensembles.hpp"
#include "haltlab/errors.hpp"
#include "haltlab/linalg.hpp"
#include "haltlab/toda.hpp"

using namespace haltlab;

namespace {

SpectralData two_by_two() { return {{1.0, -1.0}, {0.5, 0.5}}; }

SymmetricMatrix goe(std::size_t n, std::uint64_t idx) {
  EnsembleSpec spec;
  spec.n = n;
  return sample_goe(spec, {21, idx});
}

}  // namespace

TEST_CASE("weights at t = 0 are the input weights") {
  const SpectralData sd{{3, 1, 0}, {0.2, 0.3, 0.5}};
  const auto w = toda_weights_at(sd, 0.0);
  for (std::size_t j = 0; j < 3; ++j) CHECK(w[j] == doctest::Approx(sd.weights[j]).epsilon(1e-15));
}

TEST_CASE("2x2 weights at t = 1") {
  const auto w = toda_weights_at(two_by_two(), 1.0);
  const double e2 = std::exp(2.0), em2 = std::exp(-2.0);
  CHECK(w[0] == doctest::Approx(e2 / (e2 + em2)).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(em2 / (e2 + em2)).epsilon(1e-14));
  CHECK(w[0] == doctest::Approx(0.98201).epsilon(1e-5));
}

TEST_CASE("weights do not overflow at large t") {
  const auto w = toda_weights_at(two_by_two(), 300.0);
  CHECK(std::isfinite(w[0]));
  CHECK(w[0] == 1.0);
  CHECK(w[1] < 1e-250);
}

TEST_CASE("closed forms for the 2x2 case") {
  const auto sd = two_by_two();
  CHECK(toda_x11(sd, 0.0) == 0.0);
  CHECK(toda_x11(sd, 1.0) == doctest::Approx(std::tanh(2.0)).epsilon(1e-14));
  CHECK(toda_energy(sd, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  const double sech = 1.0 / std::cosh(2.0);
  CHECK(toda_energy(sd, 1.0) == doctest::Approx(sech * sech).epsilon(1e-13));
  CHECK(toda_energy(sd, 1.0) == doctest::Approx(0.070651).epsilon(1e-5));
  for (double t : {0.1, 0.7, 2.5, 6.0}) {
    const double s = 1.0 / std::cosh(2 * t);
    CHECK(std::abs(toda_energy(sd, t) - s * s) < 1e-12);
    CHECK(std::abs(toda_x11(sd, t) - std::tanh(2 * t)) < 1e-12);
  }
}

TEST_CASE("ordering: X11 tends to lambda1") {
  const auto sd = SpectralData::from_matrix(goe(12, 4));
  CHECK(std::abs(toda_x11(sd, 50.0) - sd.lambdas[0]) < 1e-12);
}

TEST_CASE("diagonal start has zero energy and halts at 0") {
  const SpectralData sd{{2, 1, 0}, {1, 0, 0}};
  CHECK(toda_energy(sd, 0.0) == 0.0);
  CHECK(toda_energy(sd, 4.0) == 0.0);
  const auto r = solve_t1(sd, 1e-6);
  CHECK(r.t_halt == 0.0);
  CHECK(r.x11_at_halt == 2.0);
}

TEST_CASE("2x2 halting time is arccosh(1/eps)/2") {
  const auto r = solve_t1(two_by_two(), 1e-4);
  CHECK(r.t_halt == doctest::Approx(std::acosh(1e4) / 2).epsilon(1e-10));
  CHECK(r.t_halt == doctest::Approx(4.95174).epsilon(1e-6));
  CHECK(r.energy_at_halt <= 1e-8);
}

TEST_CASE("a near-degenerate top gap exceeds the horizon") {
  // E(t) ~ gap^2 e^{-2 gap t}: with gap 1e-9 the crossing of 1e-24 is near t = 7e9.
  const SpectralData sd{{1.0, 1.0 - 1e-9, -1.0}, {0.4, 0.4, 0.2}};
  CHECK_THROWS_AS(solve_t1(sd, 1e-12, {0.25, 1e3}), HorizonExceeded);
}

TEST_CASE("spectral data validation") {
  CHECK_THROWS_AS((SpectralData{{1, 2}, {0.5, 0.5}}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((SpectralData{{2, 1}, {0.7, 0.5}}).validate(), std::invalid_argument);
  CHECK_NOTHROW(SpectralData::from_matrix(goe(8, 1)).validate());
}

TEST_CASE("lax_rhs hand cases") {
  CHECK(lax_rhs(SymmetricMatrix::diagonal(std::vector<double>{1, 2, 3})) == SymmetricMatrix(3));
  const auto r = lax_rhs(SymmetricMatrix::from_rows({{0, 1}, {1, 0}}));
  CHECK(r(0, 0) == 2.0);
  CHECK(r(1, 1) == -2.0);
  CHECK(r(0, 1) == 0.0);
  const auto x = lax_rhs(goe(6, 2));
  CHECK(std::abs(x.trace()) <= 1e-13);
}

TEST_CASE("lax_rk4 behaviour") {
  const auto d = SymmetricMatrix::diagonal(std::vector<double>{3, -1});
  CHECK(lax_rk4(d, 2.0, 0.1) == d);

  const auto x = lax_rk4(SymmetricMatrix::from_rows({{0, 1}, {1, 0}}), 1.0, 1e-3);
  CHECK(std::abs(x(0, 0) - std::tanh(2.0)) < 1e-8);

  const auto x0 = goe(10, 3);
  const auto x5 = lax_rk4(x0, 5.0, 1e-3);
  const auto a = symmetric_eigenvalues(x0), b = symmetric_eigenvalues(x5);
  for (std::size_t j = 0; j < 10; ++j) CHECK(std::abs(a[j] - b[j]) < 1e-6);

  CHECK_THROWS_AS(lax_rk4(x0, 1.0, 0.0), StepInvalid);
  CHECK_THROWS_AS(lax_rk4(x0, 1.0, 2.0), StepInvalid);
}

TEST_CASE("spectral energy matches direct integration") {
  const auto x0 = goe(10, 5);
  const auto sd = SpectralData::from_matrix(x0);
  for (double t : {0.5, 1.0, 2.0}) {
    const auto xt = lax_rk4(x0, t, 1e-3);
    CHECK(std::abs(toda_energy(sd, t) - first_row_energy(xt)) < 1e-8);
    CHECK(std::abs(toda_x11(sd, t) - xt(0, 0)) < 1e-8);
  }
}

TEST_CASE("spectral halting time matches the ODE halting time") {
  for (std::uint64_t s = 0; s < 3; ++s) {
    const auto x0 = goe(10, 10 + s);
    const double spectral = solve_t1(SpectralData::from_matrix(x0), 1e-6).t_halt;
    const double ode = lax_t1(x0, 1e-6);
    CHECK(std::abs(spectral - ode) <= 1e-3);
  }
}
