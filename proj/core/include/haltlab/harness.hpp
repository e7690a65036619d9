#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "haltlab/config.hpp"
#include "haltlab/rng.hpp"
#include "haltlab/stats.hpp"

namespace haltlab {

// One Monte Carlo record. A non-empty discarded_reason marks a sample that
// did not produce a halting time; its numeric fields are then unset.
struct HaltingSample {
  std::uint64_t sample_index = 0;
  SeedPath seed;
  std::optional<double> t;
  std::optional<std::size_t> k_hat;
  std::optional<double> lambda1_est;
  std::optional<double> lambda1_true;
  std::optional<double> gap;
  std::string discarded_reason;
  // full_spectrum mode only; reported in summary.json, not in raw.csv.
  std::size_t deflations = 0;

  bool retained() const { return discarded_reason.empty(); }
};

inline constexpr const char* kOutsideScalingRegion = "outside_scaling_region";

struct RunSummary {
  std::size_t requested = 0;
  std::size_t retained = 0;
  std::map<std::string, std::size_t> discards;
  std::optional<double> mean_t;
  std::optional<double> sd_t;
  std::vector<double> normalized;  // in sample-index order
  std::optional<Histogram> histogram;
  // KS distance between scaled_t1 and scaled_inverse_gap on the same draws
  // (TodaT1 only).
  std::optional<double> gap_pairing_ks;
  std::optional<double> mean_deflations;
  std::vector<std::string> flags;
};

struct RunArtifact {
  ExperimentConfig config;
  std::vector<HaltingSample> samples;  // one per requested index, in order
  RunSummary summary;
  double wall_time_seconds = 0.0;

  std::vector<double> retained_times() const;
  std::string label() const;  // e.g. "GOE_QR"
};

// Runs one sample; failures become a discard reason, never an exception.
HaltingSample run_sample(const ExperimentConfig& config, std::uint64_t sample_index);

// Static partition of sample indices over the workers, merged in index
// order; output does not depend on the worker count.
RunArtifact run_experiment(const ExperimentConfig& config);

// Recomputes the summary from the per-sample records.
RunSummary summarize(const ExperimentConfig& config, const std::vector<HaltingSample>& samples);

// raw.csv body with the fixed header
// sample_index,seed_path,t,k_hat,lambda1_est,lambda1_true,gap,discarded_reason
std::string raw_csv(const RunArtifact& artifact);
std::string summary_json(const RunArtifact& artifact, bool include_wall_time = true);

// Writes raw.csv, summary.json, hist.csv and ecdf.csv into
// root / ("run-" + config_hash) and returns that directory.
std::filesystem::path write_artifact(const RunArtifact& artifact, const std::filesystem::path& root);
RunArtifact load_artifact(const std::filesystem::path& dir);

struct ComparisonReport {
  std::string label_a;
  std::string label_b;
  double ks = 0.0;
  std::vector<double> bin_edges;
  std::vector<double> density_a;
  std::vector<double> density_b;
};

inline constexpr std::size_t kMinCompareSamples = 100;

// KS distance between the two normalized halting-time sets plus histogram
// densities on shared edges. Throws MismatchedConfig unless algorithm, n and
// epsilon agree, InsufficientSamples below 100 retained samples.
ComparisonReport compare_runs(const RunArtifact& a, const RunArtifact& b);
std::string comparison_json(const ComparisonReport& report);

struct PlotFiles {
  std::filesystem::path histogram_csv;
  std::filesystem::path ecdf_csv;
};

// hist.csv: bin_left,bin_right,density_<label>... on edges spanning the union
// of the normalized samples; ecdf.csv: x,F_<label>... at every sample point.
// Throws IoError when the directory cannot be written.
PlotFiles emit_plot_data(const std::vector<const RunArtifact*>& artifacts,
                         const std::filesystem::path& dir,
                         std::optional<std::size_t> bin_count = std::nullopt);

}  // namespace haltlab
