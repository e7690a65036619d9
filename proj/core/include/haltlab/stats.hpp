#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "haltlab/linalg.hpp"

namespace haltlab {

double mean(std::span<const double> xs);
// Sample standard deviation with the n-1 denominator.
double sample_sd(std::span<const double> xs);

// (x - mean) / sd with the n-1 denominator. Throws DegenerateSample for
// fewer than two values or zero spread.
std::vector<double> normalize_times(std::span<const double> samples);

// Sorted finite sample set.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  // Fraction of samples <= x.
  double cdf(double x) const;
  // Linear-interpolation quantile, p in [0, 1].
  double quantile(double p) const;

 private:
  std::vector<double> values_;
};

// sup_x |F_a(x) - F_b(x)|, exact, by merging the two sorted samples.
double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

enum class HistogramNormalization { Count, Density };

struct Histogram {
  std::vector<double> bin_edges;        // strictly ascending
  std::vector<std::uint64_t> counts;    // bin_edges.size() - 1
  HistogramNormalization normalization = HistogramNormalization::Count;

  std::size_t bin_count() const { return counts.size(); }
  std::uint64_t total() const;
  // counts, or counts / (total * width) for Density.
  std::vector<double> heights() const;
};

// Equal-width edges over [min, max]. With bin_count unset the width follows
// the Freedman-Diaconis rule 2 IQR n^{-1/3}. Degenerate ranges get a unit
// interval around the single value.
std::vector<double> histogram_edges(std::span<const double> values,
                                    std::optional<std::size_t> bin_count = std::nullopt);

// Values on an interior edge go to the bin on the right; the top edge
// belongs to the last bin. Throws std::invalid_argument for values outside
// the edges.
Histogram histogram(std::span<const double> values, std::vector<double> edges,
                    HistogramNormalization normalization = HistogramNormalization::Count);
Histogram histogram(std::span<const double> values,
                    std::optional<std::size_t> bin_count = std::nullopt,
                    HistogramNormalization normalization = HistogramNormalization::Count);

inline constexpr double kDegenerateGap = 1e-14;

struct GapSample {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::size_t n = 0;
  // 1 / (n^{2/3} (lambda1 - lambda2)); ensemble constants are left out.
  double scaled_inverse_gap = 0.0;

  double gap() const { return lambda1 - lambda2; }
};

// Throws DegenerateGap when lambda1 - lambda2 <= 1e-14.
GapSample gap_statistic(std::span<const double> eigenvalues_desc, std::size_t n);
GapSample gap_statistic(const EigenDecomposition& eig, std::size_t n);

// log(1/epsilon) - (2/3) log n, natural logs.
double t1_log_scale(std::size_t n, double epsilon);

// t1 / (n^{2/3} (log(1/epsilon) - (2/3) log n)), with the same constants left
// out as in gap_statistic. Throws ScalingViolation when the bracket is <= 0.
double scaled_t1(double t1, std::size_t n, double epsilon);

// log(1/epsilon) / log(n) >= 5/3 + sigma/2.
bool check_scaling_region(double epsilon, std::size_t n, double sigma);

enum class BaseLaw { Gaussian, Bernoulli, Uniform };

// Draws n_samples sums of n_terms iid variates from `law`, normalizes them
// and returns the KS distance to n_samples standard normal draws.
double clt_sanity(std::size_t n_terms, std::size_t n_samples, BaseLaw law,
                  std::uint64_t seed = 20160101);

}  // namespace haltlab
