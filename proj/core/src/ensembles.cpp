#include "haltlab/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "haltlab/errors.hpp"

namespace haltlab {
namespace {

template <class Draw>
SymmetricMatrix fill_upper(std::size_t n, Draw&& draw) {
  SymmetricMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m.set(i, j, draw(i, j));
  return m;
}

void require_kind(const EnsembleSpec& spec, EnsembleKind kind, const char* op) {
  if (spec.kind != kind)
    throw std::invalid_argument(std::string(op) + ": ensemble kind is " +
                                std::string(to_string(spec.kind)));
  if (spec.n == 0) throw std::invalid_argument(std::string(op) + ": n must be positive");
}

}  // namespace

std::string_view to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::GOE: return "GOE";
    case EnsembleKind::BernoulliWigner: return "BernoulliWigner";
    case EnsembleKind::UniformWigner: return "UniformWigner";
    case EnsembleKind::GeneralizedWigner: return "GeneralizedWigner";
    case EnsembleKind::WishartSystem: return "WishartSystem";
  }
  return "?";
}

std::optional<EnsembleKind> parse_ensemble_kind(std::string_view s) {
  for (auto k : {EnsembleKind::GOE, EnsembleKind::BernoulliWigner, EnsembleKind::UniformWigner,
                 EnsembleKind::GeneralizedWigner, EnsembleKind::WishartSystem})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

std::string_view to_string(WishartEntries entries) {
  return entries == WishartEntries::Gaussian ? "gaussian" : "bernoulli";
}

std::optional<WishartEntries> parse_wishart_entries(std::string_view s) {
  if (s == "gaussian") return WishartEntries::Gaussian;
  if (s == "bernoulli") return WishartEntries::Bernoulli;
  return std::nullopt;
}

Matrix flat_profile(std::size_t n) { return Matrix(n, n, 1.0 / static_cast<double>(n)); }

Matrix two_band_profile(std::size_t n, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw ProfileInvalid("two_band_profile: alpha must lie in [0, 1]");
  const std::size_t width = n / 4;
  const std::size_t near_count = std::min(n, 2 * width + 1);
  const std::size_t far_count = n - near_count;
  const double near = far_count == 0 ? 1.0 / static_cast<double>(near_count)
                                     : alpha / static_cast<double>(near_count);
  const double far = far_count == 0 ? 0.0 : (1.0 - alpha) / static_cast<double>(far_count);
  Matrix s(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t diff = i > j ? i - j : j - i;
      const std::size_t dist = std::min(diff, n - diff);
      s(i, j) = dist <= width ? near : far;
    }
  }
  return s;
}

void validate_profile(const Matrix& profile) {
  const std::size_t n = profile.rows();
  if (n == 0 || profile.cols() != n) throw ProfileInvalid("variance profile must be square");
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double s = profile(i, j);
      if (!(s >= 0.0) || !std::isfinite(s))
        throw ProfileInvalid("variance profile entry (" + std::to_string(i) + "," +
                             std::to_string(j) + ") is negative or not finite");
      if (s != profile(j, i)) throw ProfileInvalid("variance profile is not symmetric");
      row_sum += s;
    }
    if (std::fabs(row_sum - 1.0) > 1e-12)
      throw ProfileInvalid("variance profile row " + std::to_string(i) +
                           " sums to " + std::to_string(row_sum));
  }
}

SymmetricMatrix sample_goe(const EnsembleSpec& spec, const SeedPath& seed) {
  require_kind(spec, EnsembleKind::GOE, "sample_goe");
  RandomStream rng(seed);
  const double n = static_cast<double>(spec.n);
  const double sd_off = std::sqrt(1.0 / n);
  const double sd_diag = std::sqrt(2.0 / n);
  return fill_upper(spec.n, [&](std::size_t i, std::size_t j) {
    return (i == j ? sd_diag : sd_off) * rng.normal();
  });
}

SymmetricMatrix sample_bernoulli_wigner(const EnsembleSpec& spec, const SeedPath& seed) {
  require_kind(spec, EnsembleKind::BernoulliWigner, "sample_bernoulli_wigner");
  RandomStream rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.n));
  return fill_upper(spec.n, [&](std::size_t, std::size_t) { return scale * rng.sign(); });
}

SymmetricMatrix sample_uniform_wigner(const EnsembleSpec& spec, const SeedPath& seed) {
  require_kind(spec, EnsembleKind::UniformWigner, "sample_uniform_wigner");
  RandomStream rng(seed);
  const double half_width = std::sqrt(3.0 / static_cast<double>(spec.n));
  return fill_upper(spec.n, [&](std::size_t, std::size_t) {
    return half_width * (2.0 * rng.uniform01() - 1.0);
  });
}

SymmetricMatrix sample_generalized_wigner(const EnsembleSpec& spec, const SeedPath& seed) {
  require_kind(spec, EnsembleKind::GeneralizedWigner, "sample_generalized_wigner");
  if (spec.variance_profile.rows() != spec.n)
    throw ProfileInvalid("variance profile dimension does not match n");
  validate_profile(spec.variance_profile);
  RandomStream rng(seed);
  return fill_upper(spec.n, [&](std::size_t i, std::size_t j) {
    return std::sqrt(spec.variance_profile(i, j)) * rng.normal();
  });
}

SymmetricMatrix sample_matrix(const EnsembleSpec& spec, const SeedPath& seed) {
  switch (spec.kind) {
    case EnsembleKind::GOE: return sample_goe(spec, seed);
    case EnsembleKind::BernoulliWigner: return sample_bernoulli_wigner(spec, seed);
    case EnsembleKind::UniformWigner: return sample_uniform_wigner(spec, seed);
    case EnsembleKind::GeneralizedWigner: return sample_generalized_wigner(spec, seed);
    case EnsembleKind::WishartSystem: break;
  }
  throw std::invalid_argument("sample_matrix: WishartSystem draws a linear system");
}

LinearSystem sample_wishart_system(const EnsembleSpec& spec, const SeedPath& seed) {
  require_kind(spec, EnsembleKind::WishartSystem, "sample_wishart_system");
  const std::size_t n = spec.n;
  const auto m = static_cast<std::size_t>(std::ceil(spec.aspect * static_cast<double>(n)));
  if (!(spec.aspect > 0.0) || m <= n)
    throw AspectTooSmall("wishart system needs m = ceil(aspect * n) > n, got m = " +
                         std::to_string(m) + ", n = " + std::to_string(n));
  RandomStream rng(seed);
  Matrix x(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      x(i, j) = spec.wishart_entries == WishartEntries::Gaussian ? rng.normal() : rng.sign();

  const double inv_m = 1.0 / static_cast<double>(m);
  SymmetricMatrix h(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) h.set(i, j, dot(x.row(i), x.row(j)) * inv_m);

  std::vector<double> b(n);
  for (double& bi : b) bi = rng.normal();
  const double bn = norm2(b);
  for (double& bi : b) bi /= bn;
  return {std::move(h), std::move(b)};
}

}  // namespace haltlab
