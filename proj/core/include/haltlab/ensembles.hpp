#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "haltlab/matrix.hpp"
#include "haltlab/rng.hpp"

namespace haltlab {

enum class EnsembleKind { GOE, BernoulliWigner, UniformWigner, GeneralizedWigner, WishartSystem };

enum class WishartEntries { Gaussian, Bernoulli };

std::string_view to_string(EnsembleKind kind);
std::optional<EnsembleKind> parse_ensemble_kind(std::string_view s);
std::string_view to_string(WishartEntries entries);
std::optional<WishartEntries> parse_wishart_entries(std::string_view s);

// Normalization throughout: off-diagonal variance 1/n, so the Wigner
// spectra fill [-2, 2] as n grows.
struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::GOE;
  std::size_t n = 2;
  // GeneralizedWigner: symmetric, non-negative, unit row sums.
  Matrix variance_profile;
  // WishartSystem: the factor X is n x ceil(aspect * n).
  double aspect = 2.0;
  WishartEntries wishart_entries = WishartEntries::Gaussian;
};

// s_ij = 1/n.
Matrix flat_profile(std::size_t n);

// Circulant two-band profile. With d(i,j) = min(|i-j|, n-|i-j|) and
// w = floor(n/4), entries with d <= w share mass `alpha` of each row and the
// remaining entries share 1 - alpha. Symmetric with unit row sums by
// construction (all mass goes to the near band when n <= 2w + 1).
Matrix two_band_profile(std::size_t n, double alpha = 0.5);

// Throws ProfileInvalid unless the profile is square, symmetric, non-negative
// and every row sums to 1 within 1e-12.
void validate_profile(const Matrix& profile);

SymmetricMatrix sample_goe(const EnsembleSpec& spec, const SeedPath& seed);
SymmetricMatrix sample_bernoulli_wigner(const EnsembleSpec& spec, const SeedPath& seed);
SymmetricMatrix sample_uniform_wigner(const EnsembleSpec& spec, const SeedPath& seed);
SymmetricMatrix sample_generalized_wigner(const EnsembleSpec& spec, const SeedPath& seed);

// Dispatches on spec.kind for the Wigner-type kinds.
SymmetricMatrix sample_matrix(const EnsembleSpec& spec, const SeedPath& seed);

struct LinearSystem {
  SymmetricMatrix h;      // positive definite
  std::vector<double> b;  // unit vector
};

// H = X X^T / m with X an n x m matrix of iid N(0,1) or +-1 entries,
// m = ceil(aspect * n); b uniform on the unit sphere.
// Throws AspectTooSmall if m <= n.
LinearSystem sample_wishart_system(const EnsembleSpec& spec, const SeedPath& seed);

}  // namespace haltlab
