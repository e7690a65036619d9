// haltlab: run, compare and plot halting-time experiments.
//
//   haltlab run --preset desk_qr --samples 500 --out runs
//   haltlab compare runs/run-<a> runs/run-<b> --assert --max-ks 0.08
//   haltlab plot runs/run-<a> runs/run-<b> --out plots
//   haltlab validate --config my.cfg
//
// Exit codes: 0 ok, 2 config error, 3 I/O error, 4 --assert threshold failed.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "haltlab/config.hpp"
#include "haltlab/errors.hpp"
#include "haltlab/format.hpp"
#include "haltlab/harness.hpp"
#include "haltlab/stats.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitAssert = 4;

struct ConfigSource {
  std::string config_file;
  std::string preset;
  std::map<std::string, std::string> overrides;
};

void add_config_options(CLI::App* cmd, ConfigSource& src) {
  cmd->add_option("--config", src.config_file, "key = value config file");
  cmd->add_option("--preset", src.preset, "qr_n100, toda_n100, desk_qr, desk_toda, gap_pairing, cg");
  for (const auto& key : haltlab::config_keys())
    cmd->add_option("--" + key, src.overrides[key], "overrides `" + key + "`");
}

// Preset, then file, then flags; later sources win.
haltlab::ExperimentConfig resolve_config(const ConfigSource& src) {
  haltlab::ConfigEntries entries;
  if (!src.preset.empty()) {
    auto preset = haltlab::preset_entries(src.preset);
    if (!preset) throw haltlab::ConfigInvalid("unknown preset '" + src.preset + "'");
    entries = *preset;
  }
  if (!src.config_file.empty())
    for (auto& [k, v] : haltlab::read_config_file(src.config_file)) entries[k] = v;
  for (const auto& [k, v] : src.overrides)
    if (!v.empty()) entries[k] = v;
  return haltlab::make_config(entries);
}

void print_summary(const haltlab::RunArtifact& art, const std::filesystem::path& dir) {
  const auto& s = art.summary;
  std::cout << dir.string() << "\n";
  std::cout << "  " << art.label() << "  retained " << s.retained << "/" << s.requested;
  for (const auto& [reason, count] : s.discards) std::cout << "  " << reason << "=" << count;
  std::cout << "\n";
  if (s.mean_t)
    std::cout << "  mean_t " << haltlab::format_double(*s.mean_t) << "  sd_t "
              << (s.sd_t ? haltlab::format_double(*s.sd_t) : "-") << "\n";
  if (s.gap_pairing_ks) std::cout << "  gap_pairing_ks " << haltlab::format_double(*s.gap_pairing_ks) << "\n";
  for (const auto& f : s.flags) std::cout << "  flag: " << f << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Halting-time universality lab"};
  app.require_subcommand(1);

  ConfigSource run_src;
  std::string run_out = "runs";
  bool run_assert = false;
  double run_max_ks = 0.10;
  auto* run = app.add_subcommand("run", "run a Monte Carlo experiment");
  add_config_options(run, run_src);
  run->add_option("--out", run_out, "root directory for run-<hash> outputs");
  run->add_flag("--assert", run_assert, "exit 4 unless gap_pairing_ks <= --max-ks and nothing was discarded");
  run->add_option("--max-ks", run_max_ks, "threshold for --assert");

  std::vector<std::string> cmp_paths;
  std::string cmp_out;
  bool cmp_assert = false;
  std::optional<double> cmp_max_ks, cmp_min_ks;
  auto* cmp = app.add_subcommand("compare", "KS distance between two runs");
  cmp->add_option("runs", cmp_paths, "two run directories")->required()->expected(2);
  cmp->add_option("--out", cmp_out, "write the comparison JSON here as well");
  cmp->add_flag("--assert", cmp_assert, "exit 4 when the KS distance breaks --max-ks / --min-ks");
  cmp->add_option("--max-ks", cmp_max_ks, "universality threshold: ks must be below");
  cmp->add_option("--min-ks", cmp_min_ks, "separation threshold: ks must be above");

  std::vector<std::string> plot_paths;
  std::string plot_out;
  std::optional<std::size_t> plot_bins;
  auto* plot = app.add_subcommand("plot", "write hist.csv and ecdf.csv for one or more runs");
  plot->add_option("runs", plot_paths, "run directories")->required();
  plot->add_option("--out", plot_out, "output directory")->required();
  plot->add_option("--bins", plot_bins, "bin count (default: Freedman-Diaconis)");

  ConfigSource val_src;
  auto* validate = app.add_subcommand("validate", "check a config and echo the effective values");
  add_config_options(validate, val_src);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) {
      const auto config = resolve_config(run_src);
      const auto art = haltlab::run_experiment(config);
      const auto dir = haltlab::write_artifact(art, run_out);
      print_summary(art, dir);
      if (run_assert) {
        bool ok = art.summary.retained == art.summary.requested;
        if (art.summary.gap_pairing_ks) ok = ok && *art.summary.gap_pairing_ks <= run_max_ks;
        if (!ok) {
          std::cerr << "assert failed\n";
          return kExitAssert;
        }
      }
      return kExitOk;
    }

    if (*cmp) {
      const auto a = haltlab::load_artifact(cmp_paths[0]);
      const auto b = haltlab::load_artifact(cmp_paths[1]);
      const auto report = haltlab::compare_runs(a, b);
      const auto json = haltlab::comparison_json(report);
      std::cout << json;
      if (!cmp_out.empty()) {
        std::FILE* f = std::fopen(cmp_out.c_str(), "wb");
        if (!f || std::fwrite(json.data(), 1, json.size(), f) != json.size())
          throw haltlab::IoError("cannot write " + cmp_out);
        std::fclose(f);
      }
      if (cmp_assert) {
        bool ok = true;
        if (cmp_max_ks) ok = ok && report.ks < *cmp_max_ks;
        if (cmp_min_ks) ok = ok && report.ks > *cmp_min_ks;
        if (!ok) {
          std::cerr << "assert failed: ks " << haltlab::format_double(report.ks) << "\n";
          return kExitAssert;
        }
      }
      return kExitOk;
    }

    if (*plot) {
      std::vector<haltlab::RunArtifact> arts;
      for (const auto& p : plot_paths) arts.push_back(haltlab::load_artifact(p));
      std::vector<const haltlab::RunArtifact*> ptrs;
      for (const auto& a : arts) ptrs.push_back(&a);
      const auto files = haltlab::emit_plot_data(ptrs, plot_out, plot_bins);
      std::cout << files.histogram_csv.string() << "\n" << files.ecdf_csv.string() << "\n";
      return kExitOk;
    }

    if (*validate) {
      const auto config = resolve_config(val_src);
      std::cout << haltlab::to_config_text(config);
      std::cout << "# config_hash = " << haltlab::config_hash(config) << "\n";
      const bool inside =
          haltlab::check_scaling_region(config.epsilon, config.n, config.sigma_scaling);
      std::cout << "# scaling_region = " << (inside ? "inside" : "outside") << "\n";
      return kExitOk;
    }
  } catch (const haltlab::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const haltlab::Error& e) {
    std::cerr << e.reason() << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
