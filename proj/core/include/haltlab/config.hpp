#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "haltlab/algorithm.hpp"
#include "haltlab/ensembles.hpp"

namespace haltlab {

enum class HaltingMode { FirstDeflation, T1Only, FullSpectrum };

std::string_view to_string(HaltingMode m);
std::optional<HaltingMode> parse_halting_mode(std::string_view s);

enum class ProfileKind { Flat, TwoBand };

// Declarative description of one Monte Carlo run. Field names double as the
// config-file keys and CLI flag names.
struct ExperimentConfig {
  EnsembleKind ensemble = EnsembleKind::GOE;
  Algorithm algorithm = Algorithm::QR;
  std::size_t n = 100;
  double epsilon = 1e-10;
  std::size_t samples = 2000;
  std::uint64_t master_seed = 1;
  std::size_t workers = 0;  // 0 = one per hardware thread
  double sigma_scaling = 0.5;
  HaltingMode halting_mode = HaltingMode::FirstDeflation;

  // Ensemble extras.
  double wishart_aspect = 2.0;
  WishartEntries wishart_entries = WishartEntries::Gaussian;
  ProfileKind profile = ProfileKind::Flat;
  double profile_alpha = 0.5;

  // Algorithm extras.
  bool tridiagonalize = false;
  double toda_grid_step = 0.25;

  EnsembleSpec ensemble_spec() const;
  // TodaT1 runs outside the scaling region are flagged, not rejected.
  bool outside_scaling_region() const;
  std::size_t resolved_workers() const;
};

using ConfigEntries = std::map<std::string, std::string, std::less<>>;

// Ordered list of every recognised key.
const std::vector<std::string>& config_keys();

// Parses `key = value` lines; blank lines and '#' comments are skipped.
ConfigEntries parse_config_text(std::string_view text);
ConfigEntries read_config_file(const std::filesystem::path& path);

// Named starting points: qr_n100, toda_n100, desk_qr, desk_toda, gap_pairing, cg.
std::optional<ConfigEntries> preset_entries(std::string_view name);

// Builds and validates a config. Missing keys take defaults, with epsilon
// defaulting to 1e-8 for TodaT1 and 1e-10 otherwise, and halting_mode
// defaulting to t1_only for TodaT1. Throws ConfigInvalid listing every bad
// field.
ExperimentConfig make_config(const ConfigEntries& entries);

// Re-checks field invariants of an already built config.
void validate_config(const ExperimentConfig& config);

// Canonical `key = value` text with all effective values, in config_keys() order.
std::string to_config_text(const ExperimentConfig& config);

// 16 hex digits of FNV-1a over the canonical text minus the workers line, so
// the same run lands in the same directory whatever the worker count.
std::string config_hash(const ExperimentConfig& config);

}  // namespace haltlab
