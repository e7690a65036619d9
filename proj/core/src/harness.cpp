#include "haltlab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "haltlab/discrete.hpp"
#include "haltlab/errors.hpp"
#include "haltlab/format.hpp"
#include "haltlab/linalg.hpp"
#include "haltlab/toda.hpp"

namespace haltlab {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kRawHeader =
    "sample_index,seed_path,t,k_hat,lambda1_est,lambda1_true,gap,discarded_reason";

double largest_diagonal(const SymmetricMatrix& x) {
  double best = x(0, 0);
  for (std::size_t i = 1; i < x.size(); ++i) best = std::max(best, x(i, i));
  return best;
}

HaltingSample run_sample_with(const ExperimentConfig& config, const EnsembleSpec& spec,
                              std::uint64_t sample_index) {
  HaltingSample s;
  s.sample_index = sample_index;
  s.seed = {config.master_seed, sample_index};
  try {
    if (config.algorithm == Algorithm::CG) {
      const LinearSystem sys = sample_wishart_system(spec, s.seed);
      s.t = static_cast<double>(cg_halting_time(sys.h, sys.b, config.epsilon));
      return s;
    }

    SymmetricMatrix x = sample_matrix(spec, s.seed);
    if (config.algorithm == Algorithm::TodaT1) {
      const EigenDecomposition eig = eigen_oracle(x);
      const GapSample gap = gap_statistic(eig, config.n);
      const TodaHaltingResult res = solve_t1(SpectralData::from_decomposition(eig), config.epsilon,
                                             {config.toda_grid_step, 1e7});
      s.t = res.t_halt;
      s.k_hat = 1;
      s.lambda1_est = res.x11_at_halt;
      s.lambda1_true = gap.lambda1;
      s.gap = gap.gap();
      return s;
    }

    const GapSample gap = gap_statistic(symmetric_eigenvalues(x), config.n);
    if (config.tridiagonalize) x = tridiagonalize(x).t;
    switch (config.halting_mode) {
      case HaltingMode::FirstDeflation: {
        const DeflationRecord rec = deflation_time(config.algorithm, x, config.epsilon);
        s.t = static_cast<double>(rec.steps);
        s.k_hat = rec.k_hat;
        s.lambda1_est = largest_diagonal(rec.state);
        break;
      }
      case HaltingMode::T1Only: {
        const DeflationRecord rec = deflation_time_k(config.algorithm, x, 1, config.epsilon);
        s.t = static_cast<double>(rec.steps);
        s.k_hat = 1;
        s.lambda1_est = rec.state(0, 0);
        break;
      }
      case HaltingMode::FullSpectrum: {
        const SpectrumResult res =
            compute_spectrum_with_deflation(x, config.epsilon, config.algorithm);
        s.t = static_cast<double>(res.total_steps);
        s.lambda1_est = res.eigenvalues.front();
        s.deflations = res.deflation_count;
        break;
      }
    }
    s.lambda1_true = gap.lambda1;
    s.gap = gap.gap();
  } catch (const Error& e) {
    HaltingSample discarded;
    discarded.sample_index = s.sample_index;
    discarded.seed = s.seed;
    discarded.discarded_reason = e.reason();
    return discarded;
  }
  return s;
}

std::string opt_double(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> parse_opt_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string flag_lines(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) out += "# " + f + "\n";
  return out;
}

std::vector<std::string> unique_labels(const std::vector<const RunArtifact*>& artifacts) {
  std::vector<std::string> labels;
  std::map<std::string, int> seen;
  for (const auto* a : artifacts) {
    std::string label = a->label();
    const int count = ++seen[label];
    if (count > 1) label += "_" + std::to_string(count);
    labels.push_back(label);
  }
  return labels;
}

}  // namespace

std::vector<double> RunArtifact::retained_times() const {
  std::vector<double> out;
  for (const auto& s : samples)
    if (s.retained() && s.t) out.push_back(*s.t);
  return out;
}

std::string RunArtifact::label() const {
  std::string ens(to_string(config.ensemble));
  if (config.ensemble == EnsembleKind::WishartSystem)
    ens += "-" + std::string(to_string(config.wishart_entries));
  return ens + "_" + std::string(to_string(config.algorithm));
}

HaltingSample run_sample(const ExperimentConfig& config, std::uint64_t sample_index) {
  return run_sample_with(config, config.ensemble_spec(), sample_index);
}

RunSummary summarize(const ExperimentConfig& config, const std::vector<HaltingSample>& samples) {
  RunSummary sum;
  sum.requested = samples.size();
  std::vector<double> times, t1_scaled, gap_scaled;
  double deflation_total = 0.0;
  const bool pair_gap =
      config.algorithm == Algorithm::TodaT1 && t1_log_scale(config.n, config.epsilon) > 0.0;
  for (const auto& s : samples) {
    if (!s.retained()) {
      ++sum.discards[s.discarded_reason];
      continue;
    }
    ++sum.retained;
    times.push_back(*s.t);
    deflation_total += static_cast<double>(s.deflations);
    if (pair_gap && s.gap) {
      t1_scaled.push_back(scaled_t1(*s.t, config.n, config.epsilon));
      gap_scaled.push_back(1.0 / (std::pow(static_cast<double>(config.n), 2.0 / 3.0) * *s.gap));
    }
  }
  if (config.outside_scaling_region()) sum.flags.push_back(kOutsideScalingRegion);
  if (!times.empty()) sum.mean_t = mean(times);
  if (times.size() >= 2) sum.sd_t = sample_sd(times);
  try {
    sum.normalized = normalize_times(times);
    sum.histogram = histogram(sum.normalized, std::nullopt, HistogramNormalization::Density);
  } catch (const DegenerateSample&) {
    sum.flags.push_back("degenerate_sample");
  }
  if (!t1_scaled.empty())
    sum.gap_pairing_ks = ks_distance(EmpiricalDistribution(t1_scaled), EmpiricalDistribution(gap_scaled));
  if (config.halting_mode == HaltingMode::FullSpectrum && sum.retained > 0)
    sum.mean_deflations = deflation_total / static_cast<double>(sum.retained);
  return sum;
}

RunArtifact run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const auto start = std::chrono::steady_clock::now();
  const EnsembleSpec spec = config.ensemble_spec();

  RunArtifact art;
  art.config = config;
  art.samples.resize(config.samples);
  const std::size_t workers = std::min(config.resolved_workers(), config.samples);
  std::vector<std::exception_ptr> failures(workers);
  auto work = [&](std::size_t w) {
    const std::size_t begin = config.samples * w / workers;
    const std::size_t end = config.samples * (w + 1) / workers;
    try {
      for (std::size_t i = begin; i < end; ++i) art.samples[i] = run_sample_with(config, spec, i);
    } catch (...) {
      failures[w] = std::current_exception();
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  art.summary = summarize(config, art.samples);
  art.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return art;
}

std::string raw_csv(const RunArtifact& artifact) {
  std::string out = flag_lines(artifact.summary.flags);
  out += kRawHeader;
  out += "\n";
  for (const auto& s : artifact.samples) {
    out += std::to_string(s.sample_index) + ",";
    out += std::to_string(s.seed.master_seed) + "/" + std::to_string(s.seed.sample_index) + ",";
    out += opt_double(s.t) + ",";
    out += (s.k_hat ? std::to_string(*s.k_hat) : std::string()) + ",";
    out += opt_double(s.lambda1_est) + ",";
    out += opt_double(s.lambda1_true) + ",";
    out += opt_double(s.gap) + ",";
    out += s.discarded_reason + "\n";
  }
  return out;
}

std::string summary_json(const RunArtifact& artifact, bool include_wall_time) {
  const RunSummary& sum = artifact.summary;
  ordered_json j;
  ordered_json cfg = ordered_json::object();
  for (const auto& [key, value] : parse_config_text(to_config_text(artifact.config)))
    cfg[key] = value;
  j["config"] = cfg;
  j["config_hash"] = config_hash(artifact.config);
  j["label"] = artifact.label();
  j["requested"] = sum.requested;
  j["retained"] = sum.retained;
  j["discards"] = ordered_json::object();
  for (const auto& [reason, count] : sum.discards) j["discards"][reason] = count;
  j["mean_t"] = sum.mean_t ? ordered_json(*sum.mean_t) : ordered_json();
  j["sd_t"] = sum.sd_t ? ordered_json(*sum.sd_t) : ordered_json();
  if (sum.histogram) {
    j["histogram"] = {{"bin_edges", sum.histogram->bin_edges},
                      {"counts", sum.histogram->counts},
                      {"density", sum.histogram->heights()}};
  }
  j["gap_pairing_ks"] = sum.gap_pairing_ks ? ordered_json(*sum.gap_pairing_ks) : ordered_json();
  if (sum.mean_deflations) j["mean_deflations"] = *sum.mean_deflations;
  j["flags"] = sum.flags;
  j["normalized"] = sum.normalized;
  if (include_wall_time) j["wall_time_seconds"] = artifact.wall_time_seconds;
  return j.dump(2) + "\n";
}

std::filesystem::path write_artifact(const RunArtifact& artifact, const std::filesystem::path& root) {
  const auto dir = root / ("run-" + config_hash(artifact.config));
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_text(dir / "raw.csv", raw_csv(artifact));
  write_text(dir / "summary.json", summary_json(artifact));
  if (!artifact.summary.normalized.empty()) emit_plot_data({&artifact}, dir);
  return dir;
}

RunArtifact load_artifact(const std::filesystem::path& dir) {
  RunArtifact art;
  ordered_json summary;
  try {
    summary = ordered_json::parse(read_text(dir / "summary.json"));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed " + (dir / "summary.json").string() + ": " + e.what());
  }
  ConfigEntries entries;
  for (const auto& [key, value] : summary.at("config").items()) entries[key] = value.get<std::string>();
  art.config = make_config(entries);
  if (summary.contains("wall_time_seconds")) art.wall_time_seconds = summary["wall_time_seconds"];

  std::istringstream raw(read_text(dir / "raw.csv"));
  std::string line;
  bool header_seen = false;
  while (std::getline(raw, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kRawHeader) throw IoError("unexpected raw.csv header in " + dir.string());
      header_seen = true;
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 8) throw IoError("malformed raw.csv row: " + line);
    HaltingSample s;
    try {
      s.sample_index = std::stoull(f[0]);
      const auto slash = f[1].find('/');
      s.seed = {std::stoull(f[1].substr(0, slash)), std::stoull(f[1].substr(slash + 1))};
      s.t = parse_opt_double(f[2]);
      if (!f[3].empty()) s.k_hat = std::stoull(f[3]);
      s.lambda1_est = parse_opt_double(f[4]);
      s.lambda1_true = parse_opt_double(f[5]);
      s.gap = parse_opt_double(f[6]);
    } catch (const std::exception&) {
      throw IoError("malformed raw.csv row: " + line);
    }
    s.discarded_reason = f[7];
    art.samples.push_back(std::move(s));
  }
  art.summary = summarize(art.config, art.samples);
  if (summary.contains("mean_deflations"))
    art.summary.mean_deflations = summary["mean_deflations"].get<double>();
  return art;
}

ComparisonReport compare_runs(const RunArtifact& a, const RunArtifact& b) {
  if (a.config.algorithm != b.config.algorithm || a.config.n != b.config.n ||
      a.config.epsilon != b.config.epsilon)
    throw MismatchedConfig("compare_runs: runs differ in algorithm, n or epsilon (" + a.label() +
                           " vs " + b.label() + ")");
  if (a.summary.retained < kMinCompareSamples || b.summary.retained < kMinCompareSamples ||
      a.summary.normalized.empty() || b.summary.normalized.empty())
    throw InsufficientSamples("compare_runs: need at least 100 retained samples per run");

  const auto labels = unique_labels({&a, &b});
  ComparisonReport rep;
  rep.label_a = labels[0];
  rep.label_b = labels[1];
  rep.ks = ks_distance(EmpiricalDistribution(a.summary.normalized),
                       EmpiricalDistribution(b.summary.normalized));
  std::vector<double> pooled = a.summary.normalized;
  pooled.insert(pooled.end(), b.summary.normalized.begin(), b.summary.normalized.end());
  rep.bin_edges = histogram_edges(pooled);
  rep.density_a = histogram(a.summary.normalized, rep.bin_edges, HistogramNormalization::Density).heights();
  rep.density_b = histogram(b.summary.normalized, rep.bin_edges, HistogramNormalization::Density).heights();
  return rep;
}

std::string comparison_json(const ComparisonReport& report) {
  ordered_json j;
  j["label_a"] = report.label_a;
  j["label_b"] = report.label_b;
  j["ks"] = report.ks;
  j["bin_edges"] = report.bin_edges;
  j["density_a"] = report.density_a;
  j["density_b"] = report.density_b;
  return j.dump(2) + "\n";
}

PlotFiles emit_plot_data(const std::vector<const RunArtifact*>& artifacts,
                         const std::filesystem::path& dir, std::optional<std::size_t> bin_count) {
  if (artifacts.empty()) throw std::invalid_argument("emit_plot_data: no artifacts");
  std::vector<double> pooled;
  std::vector<std::string> flags;
  for (const auto* a : artifacts) {
    if (a->summary.normalized.empty())
      throw std::invalid_argument("emit_plot_data: artifact " + a->label() + " has no normalized samples");
    pooled.insert(pooled.end(), a->summary.normalized.begin(), a->summary.normalized.end());
    for (const auto& f : a->summary.flags)
      if (std::find(flags.begin(), flags.end(), f) == flags.end()) flags.push_back(f);
  }
  const auto labels = unique_labels(artifacts);
  const auto edges = histogram_edges(pooled, bin_count);

  std::vector<std::vector<double>> densities;
  std::vector<EmpiricalDistribution> ecdfs;
  for (const auto* a : artifacts) {
    densities.push_back(
        histogram(a->summary.normalized, edges, HistogramNormalization::Density).heights());
    ecdfs.emplace_back(a->summary.normalized);
  }

  std::string hist = flag_lines(flags) + "bin_left,bin_right";
  for (const auto& l : labels) hist += ",density_" + l;
  hist += "\n";
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    hist += format_double(edges[b]) + "," + format_double(edges[b + 1]);
    for (const auto& d : densities) hist += "," + format_double(d[b]);
    hist += "\n";
  }

  std::set<double> xs(pooled.begin(), pooled.end());
  std::string ecdf = flag_lines(flags) + "x";
  for (const auto& l : labels) ecdf += ",F_" + l;
  ecdf += "\n";
  for (double x : xs) {
    ecdf += format_double(x);
    for (const auto& e : ecdfs) ecdf += "," + format_double(e.cdf(x));
    ecdf += "\n";
  }

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  PlotFiles files{dir / "hist.csv", dir / "ecdf.csv"};
  write_text(files.histogram_csv, hist);
  write_text(files.ecdf_csv, ecdf);
  return files;
}

}  // namespace haltlab
