#include "haltlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "haltlab/errors.hpp"
#include "haltlab/rng.hpp"

namespace haltlab {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw DegenerateSample("mean of an empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_sd(std::span<const double> xs) {
  if (xs.size() < 2) throw DegenerateSample("sample standard deviation needs two values");
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

std::vector<double> normalize_times(std::span<const double> samples) {
  if (samples.size() < 2) throw DegenerateSample("normalize_times: need at least two samples");
  const double m = mean(samples);
  const double sd = sample_sd(samples);
  if (!(sd > 0.0)) throw DegenerateSample("normalize_times: zero sample standard deviation");
  std::vector<double> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) out[i] = (samples[i] - m) / sd;
  return out;
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("EmpiricalDistribution: empty sample");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("EmpiricalDistribution: non-finite value");
  std::sort(values_.begin(), values_.end());
}

double EmpiricalDistribution::cdf(double x) const {
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double EmpiricalDistribution::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p outside [0, 1]");
  const double pos = p * static_cast<double>(values_.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values_.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values_[lo] + frac * (values_[hi] - values_[lo]);
}

double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  const auto va = a.values();
  const auto vb = b.values();
  const double na = static_cast<double>(va.size());
  const double nb = static_cast<double>(vb.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  // Advance past every copy of the next smallest value in both samples, then
  // compare the two ECDFs just after it.
  while (i < va.size() || j < vb.size()) {
    double x;
    if (j >= vb.size() || (i < va.size() && va[i] <= vb[j]))
      x = va[i];
    else
      x = vb[j];
    while (i < va.size() && va[i] == x) ++i;
    while (j < vb.size() && vb[j] == x) ++j;
    best = std::max(best, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

std::uint64_t Histogram::total() const {
  std::uint64_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

std::vector<double> Histogram::heights() const {
  std::vector<double> h(counts.size());
  const double tot = static_cast<double>(total());
  for (std::size_t b = 0; b < counts.size(); ++b) {
    h[b] = static_cast<double>(counts[b]);
    if (normalization == HistogramNormalization::Density && tot > 0.0)
      h[b] /= tot * (bin_edges[b + 1] - bin_edges[b]);
  }
  return h;
}

std::vector<double> histogram_edges(std::span<const double> values,
                                    std::optional<std::size_t> bin_count) {
  if (values.empty()) throw std::invalid_argument("histogram: no values");
  if (bin_count && *bin_count == 0) throw std::invalid_argument("histogram: bin_count must be >= 1");
  const EmpiricalDistribution dist({values.begin(), values.end()});
  double lo = dist.values().front();
  double hi = dist.values().back();
  std::size_t bins = 1;
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
    bins = bin_count.value_or(1);
  } else if (bin_count) {
    bins = *bin_count;
  } else {
    const double iqr = dist.quantile(0.75) - dist.quantile(0.25);
    const double width = 2.0 * iqr / std::cbrt(static_cast<double>(values.size()));
    if (width > 0.0)
      bins = static_cast<std::size_t>(std::ceil((hi - lo) / width));
    else
      bins = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(values.size())))) + 1;
    bins = std::max<std::size_t>(bins, 1);
  }
  std::vector<double> edges(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b)
    edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
  edges.back() = hi;
  return edges;
}

Histogram histogram(std::span<const double> values, std::vector<double> edges,
                    HistogramNormalization normalization) {
  if (edges.size() < 2) throw std::invalid_argument("histogram: need at least two edges");
  for (std::size_t b = 1; b < edges.size(); ++b)
    if (!(edges[b] > edges[b - 1]))
      throw std::invalid_argument("histogram: edges must be strictly ascending");
  Histogram h;
  h.counts.assign(edges.size() - 1, 0);
  for (double v : values) {
    if (!(v >= edges.front() && v <= edges.back()))
      throw std::invalid_argument("histogram: value " + std::to_string(v) + " outside the edges");
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    std::size_t bin = static_cast<std::size_t>(it - edges.begin()) - 1;
    bin = std::min(bin, h.counts.size() - 1);
    ++h.counts[bin];
  }
  h.bin_edges = std::move(edges);
  h.normalization = normalization;
  return h;
}

Histogram histogram(std::span<const double> values, std::optional<std::size_t> bin_count,
                    HistogramNormalization normalization) {
  return histogram(values, histogram_edges(values, bin_count), normalization);
}

GapSample gap_statistic(std::span<const double> eigenvalues_desc, std::size_t n) {
  if (n < 2 || eigenvalues_desc.size() < 2)
    throw std::invalid_argument("gap_statistic: need n >= 2");
  GapSample g;
  g.lambda1 = eigenvalues_desc[0];
  g.lambda2 = eigenvalues_desc[1];
  g.n = n;
  if (!(g.gap() > kDegenerateGap))
    throw DegenerateGap("gap_statistic: top gap " + std::to_string(g.gap()) + " is degenerate");
  g.scaled_inverse_gap = 1.0 / (std::pow(static_cast<double>(n), 2.0 / 3.0) * g.gap());
  return g;
}

GapSample gap_statistic(const EigenDecomposition& eig, std::size_t n) {
  return gap_statistic(eig.eigenvalues, n);
}

double t1_log_scale(std::size_t n, double epsilon) {
  return std::log(1.0 / epsilon) - (2.0 / 3.0) * std::log(static_cast<double>(n));
}

double scaled_t1(double t1, std::size_t n, double epsilon) {
  const double bracket = t1_log_scale(n, epsilon);
  if (!(bracket > 0.0))
    throw ScalingViolation("scaled_t1: log(1/eps) - (2/3) log n = " + std::to_string(bracket) +
                           " is not positive");
  return t1 / (std::pow(static_cast<double>(n), 2.0 / 3.0) * bracket);
}

bool check_scaling_region(double epsilon, std::size_t n, double sigma) {
  if (!(epsilon > 0.0 && epsilon < 1.0) || n < 2 || !(sigma > 0.0 && sigma < 1.0))
    throw std::invalid_argument("check_scaling_region: need eps in (0,1), n >= 2, sigma in (0,1)");
  return std::log(1.0 / epsilon) / std::log(static_cast<double>(n)) >= 5.0 / 3.0 + sigma / 2.0;
}

double clt_sanity(std::size_t n_terms, std::size_t n_samples, BaseLaw law, std::uint64_t seed) {
  if (n_terms < 1) throw std::invalid_argument("clt_sanity: n_terms must be >= 1");
  RandomStream sums_rng({seed, 0});
  RandomStream ref_rng({seed, 1});
  std::vector<double> sums(n_samples);
  for (double& s : sums) {
    s = 0.0;
    for (std::size_t k = 0; k < n_terms; ++k) {
      switch (law) {
        case BaseLaw::Gaussian: s += sums_rng.normal(); break;
        case BaseLaw::Bernoulli: s += sums_rng.sign(); break;
        case BaseLaw::Uniform: s += sums_rng.uniform01(); break;
      }
    }
  }
  std::vector<double> reference(n_samples);
  for (double& r : reference) r = ref_rng.normal();
  return ks_distance(EmpiricalDistribution(normalize_times(sums)),
                     EmpiricalDistribution(std::move(reference)));
}

}  // namespace haltlab
