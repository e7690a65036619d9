#include "haltlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "haltlab/errors.hpp"
#include "haltlab/format.hpp"
#include "haltlab/stats.hpp"

namespace haltlab {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

// Collects field-level problems so a bad config reports all of them at once.
class Problems {
 public:
  void add(std::string_view key, std::string_view message) {
    text_ += text_.empty() ? "" : "; ";
    text_ += std::string(key) + ": " + std::string(message);
  }
  void raise_if_any() const {
    if (!text_.empty()) throw ConfigInvalid("invalid config: " + text_);
  }

 private:
  std::string text_;
};

std::optional<std::uint64_t> parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> parse_double(std::string_view s) {
  const std::string str(s);
  if (str.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(str.c_str(), &end);
  if (end != str.c_str() + str.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<bool> parse_bool(std::string_view s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  return std::nullopt;
}

std::string_view to_string(ProfileKind p) { return p == ProfileKind::Flat ? "flat" : "two_band"; }

std::optional<ProfileKind> parse_profile(std::string_view s) {
  if (s == "flat") return ProfileKind::Flat;
  if (s == "two_band") return ProfileKind::TwoBand;
  return std::nullopt;
}

void check_invariants(const ExperimentConfig& c, Problems& problems) {
  if (c.n < 2) problems.add("n", "must be >= 2");
  if (!(c.epsilon >= 1e-14 && c.epsilon < 1.0)) problems.add("epsilon", "must lie in [1e-14, 1)");
  if (c.samples < 2) problems.add("samples", "must be >= 2");
  if (!(c.sigma_scaling > 0.0 && c.sigma_scaling < 1.0))
    problems.add("sigma_scaling", "must lie in (0, 1)");
  if (!(c.toda_grid_step > 0.0)) problems.add("toda_grid_step", "must be positive");
  if (!(c.profile_alpha >= 0.0 && c.profile_alpha <= 1.0))
    problems.add("profile_alpha", "must lie in [0, 1]");

  const bool system = c.ensemble == EnsembleKind::WishartSystem;
  if (system != (c.algorithm == Algorithm::CG))
    problems.add("algorithm", "CG runs on WishartSystem and WishartSystem only feeds CG");
  if (system && std::ceil(c.wishart_aspect * static_cast<double>(c.n)) <= static_cast<double>(c.n))
    problems.add("wishart_aspect", "ceil(aspect * n) must exceed n");
  if (c.algorithm == Algorithm::TodaT1 && c.halting_mode != HaltingMode::T1Only)
    problems.add("halting_mode", "TodaT1 supports t1_only");
  if (c.algorithm == Algorithm::CG && c.halting_mode != HaltingMode::FirstDeflation)
    problems.add("halting_mode", "CG halts on its residual; leave halting_mode at first_deflation");
}

}  // namespace

std::string_view to_string(HaltingMode m) {
  switch (m) {
    case HaltingMode::FirstDeflation: return "first_deflation";
    case HaltingMode::T1Only: return "t1_only";
    case HaltingMode::FullSpectrum: return "full_spectrum";
  }
  return "?";
}

std::optional<HaltingMode> parse_halting_mode(std::string_view s) {
  for (auto m : {HaltingMode::FirstDeflation, HaltingMode::T1Only, HaltingMode::FullSpectrum})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

EnsembleSpec ExperimentConfig::ensemble_spec() const {
  EnsembleSpec spec;
  spec.kind = ensemble;
  spec.n = n;
  spec.aspect = wishart_aspect;
  spec.wishart_entries = wishart_entries;
  if (ensemble == EnsembleKind::GeneralizedWigner)
    spec.variance_profile =
        profile == ProfileKind::Flat ? flat_profile(n) : two_band_profile(n, profile_alpha);
  return spec;
}

bool ExperimentConfig::outside_scaling_region() const {
  return algorithm == Algorithm::TodaT1 && !check_scaling_region(epsilon, n, sigma_scaling);
}

std::size_t ExperimentConfig::resolved_workers() const {
  if (workers > 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "ensemble",       "algorithm",       "n",       "epsilon",       "samples",
      "master_seed",    "workers",         "sigma_scaling", "halting_mode",
      "wishart_aspect", "wishart_entries", "profile", "profile_alpha", "tridiagonalize",
      "toda_grid_step"};
  return keys;
}

ConfigEntries parse_config_text(std::string_view text) {
  ConfigEntries entries;
  Problems problems;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      problems.add("line " + std::to_string(lineno), "expected key = value");
      continue;
    }
    entries[trim(std::string_view(body).substr(0, eq))] = trim(std::string_view(body).substr(eq + 1));
  }
  problems.raise_if_any();
  return entries;
}

ConfigEntries read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::optional<ConfigEntries> preset_entries(std::string_view name) {
  if (name == "qr_n100")
    return ConfigEntries{{"ensemble", "GOE"}, {"algorithm", "QR"}, {"n", "100"},
                         {"epsilon", "1e-10"}, {"samples", "5000"}};
  if (name == "toda_n100")
    return ConfigEntries{{"ensemble", "GOE"}, {"algorithm", "TodaT1"}, {"n", "100"},
                         {"epsilon", "1e-8"}, {"samples", "5000"}};
  if (name == "desk_qr")
    return ConfigEntries{{"ensemble", "GOE"}, {"algorithm", "QR"}, {"n", "60"},
                         {"epsilon", "1e-10"}, {"samples", "2000"}};
  if (name == "desk_toda")
    return ConfigEntries{{"ensemble", "GOE"}, {"algorithm", "TodaT1"}, {"n", "60"},
                         {"epsilon", "1e-8"}, {"samples", "2000"}};
  if (name == "gap_pairing")
    return ConfigEntries{{"ensemble", "GOE"}, {"algorithm", "TodaT1"}, {"n", "100"},
                         {"epsilon", "1e-8"}, {"samples", "2000"}, {"sigma_scaling", "0.5"}};
  if (name == "cg")
    return ConfigEntries{{"ensemble", "WishartSystem"}, {"algorithm", "CG"}, {"n", "100"},
                         {"epsilon", "1e-10"}, {"samples", "1000"}, {"wishart_aspect", "2"}};
  return std::nullopt;
}

ExperimentConfig make_config(const ConfigEntries& entries) {
  ExperimentConfig c;
  Problems problems;
  const auto& keys = config_keys();
  for (const auto& [key, value] : entries)
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) problems.add(key, "unknown key");

  auto get = [&](std::string_view key) -> std::optional<std::string> {
    const auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    return it->second;
  };
  auto size_field = [&](std::string_view key, std::size_t& out) {
    if (auto v = get(key)) {
      if (auto parsed = parse_u64(*v)) out = static_cast<std::size_t>(*parsed);
      else problems.add(key, "expected a non-negative integer, got '" + *v + "'");
    }
  };
  auto double_field = [&](std::string_view key, double& out) {
    if (auto v = get(key)) {
      if (auto parsed = parse_double(*v)) out = *parsed;
      else problems.add(key, "expected a finite number, got '" + *v + "'");
    }
  };

  if (auto v = get("ensemble")) {
    if (auto k = parse_ensemble_kind(*v)) c.ensemble = *k;
    else problems.add("ensemble", "unknown ensemble '" + *v + "'");
  }
  if (auto v = get("algorithm")) {
    if (auto a = parse_algorithm(*v)) c.algorithm = *a;
    else problems.add("algorithm", "unknown algorithm '" + *v + "'");
  }
  size_field("n", c.n);
  c.epsilon = c.algorithm == Algorithm::TodaT1 ? 1e-8 : 1e-10;
  double_field("epsilon", c.epsilon);
  size_field("samples", c.samples);
  if (auto v = get("master_seed")) {
    if (auto parsed = parse_u64(*v)) c.master_seed = *parsed;
    else problems.add("master_seed", "expected a 64-bit unsigned integer, got '" + *v + "'");
  }
  if (auto v = get("workers"); v && *v != "auto") size_field("workers", c.workers);
  double_field("sigma_scaling", c.sigma_scaling);
  c.halting_mode =
      c.algorithm == Algorithm::TodaT1 ? HaltingMode::T1Only : HaltingMode::FirstDeflation;
  if (auto v = get("halting_mode")) {
    if (auto m = parse_halting_mode(*v)) c.halting_mode = *m;
    else problems.add("halting_mode", "unknown halting mode '" + *v + "'");
  }
  double_field("wishart_aspect", c.wishart_aspect);
  if (auto v = get("wishart_entries")) {
    if (auto e = parse_wishart_entries(*v)) c.wishart_entries = *e;
    else problems.add("wishart_entries", "expected gaussian or bernoulli, got '" + *v + "'");
  }
  if (auto v = get("profile")) {
    if (auto p = parse_profile(*v)) c.profile = *p;
    else problems.add("profile", "expected flat or two_band, got '" + *v + "'");
  }
  double_field("profile_alpha", c.profile_alpha);
  if (auto v = get("tridiagonalize")) {
    if (auto b = parse_bool(*v)) c.tridiagonalize = *b;
    else problems.add("tridiagonalize", "expected true or false, got '" + *v + "'");
  }
  double_field("toda_grid_step", c.toda_grid_step);

  // invariants are checked on the parsed fields so every problem is reported at once
  check_invariants(c, problems);
  problems.raise_if_any();
  return c;
}

void validate_config(const ExperimentConfig& config) {
  Problems problems;
  check_invariants(config, problems);
  problems.raise_if_any();
}

std::string to_config_text(const ExperimentConfig& c) {
  std::string out;
  auto line = [&](std::string_view key, std::string_view value) {
    out += std::string(key) + " = " + std::string(value) + "\n";
  };
  line("ensemble", to_string(c.ensemble));
  line("algorithm", to_string(c.algorithm));
  line("n", std::to_string(c.n));
  line("epsilon", format_double(c.epsilon));
  line("samples", std::to_string(c.samples));
  line("master_seed", std::to_string(c.master_seed));
  line("workers", c.workers == 0 ? "auto" : std::to_string(c.workers));
  line("sigma_scaling", format_double(c.sigma_scaling));
  line("halting_mode", to_string(c.halting_mode));
  line("wishart_aspect", format_double(c.wishart_aspect));
  line("wishart_entries", to_string(c.wishart_entries));
  line("profile", to_string(c.profile));
  line("profile_alpha", format_double(c.profile_alpha));
  line("tridiagonalize", c.tridiagonalize ? "true" : "false");
  line("toda_grid_step", format_double(c.toda_grid_step));
  return out;
}

std::string config_hash(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.workers = 0;
  const std::string text = to_config_text(c);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace haltlab
