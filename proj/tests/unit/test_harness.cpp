#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "haltlab/errors.hpp"
#include "haltlab/harness.hpp"

using namespace haltlab;
namespace fs = std::filesystem;

namespace {

ExperimentConfig cfg(ConfigEntries e) { return make_config(e); }

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("haltlab_test_" + name);
  fs::remove_all(p);
  return p;
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

}  // namespace

TEST_CASE("tiny runs are byte-identical across reruns") {
  const auto c = cfg({{"n", "2"}, {"samples", "2"}, {"master_seed", "99"}});
  CHECK(raw_csv(run_experiment(c)) == raw_csv(run_experiment(c)));
}

TEST_CASE("raw rows do not depend on the worker count") {
  for (const char* alg : {"QR", "QRShifted", "Jacobi", "TodaT1"}) {
    CAPTURE(alg);
    auto c = cfg({{"algorithm", alg}, {"n", "12"}, {"samples", "40"}, {"workers", "1"}});
    const auto one = raw_csv(run_experiment(c));
    c.workers = 8;
    const auto eight = raw_csv(run_experiment(c));
    CHECK(one == eight);
    auto art = run_experiment(c);
    art.wall_time_seconds = 0;
    CHECK(summary_json(art, false) == summary_json(run_experiment(c), false));
  }
}

TEST_CASE("raw.csv layout and accounting") {
  // 2x2 Bernoulli draws include the swap-like matrices on which unshifted QR
  // never deflates, so this run has discards as well as retained rows.
  const auto art = run_experiment(cfg({{"ensemble", "BernoulliWigner"}, {"n", "2"}, {"samples", "16"}}));
  std::size_t discarded = 0;
  for (const auto& [reason, count] : art.summary.discards) discarded += count;
  CHECK(discarded > 0);
  CHECK(art.summary.discards.count("IterationLimitExceeded") == 1);
  CHECK(art.summary.retained + discarded == art.summary.requested);
  CHECK(art.summary.requested == 16);

  std::stringstream in(raw_csv(art));
  std::string line;
  while (std::getline(in, line) && line.rfind("#", 0) == 0) {
  }
  CHECK(line == "sample_index,seed_path,t,k_hat,lambda1_est,lambda1_true,gap,discarded_reason");
  std::size_t rows = 0;
  for (; std::getline(in, line); ++rows) {
    REQUIRE(rows < art.samples.size());
    const auto& s = art.samples[rows];
    CHECK(line.rfind(std::to_string(rows) + "," + std::to_string(art.config.master_seed) + "/", 0) == 0);
    if (!s.retained()) CHECK(line.find(",,,,," + s.discarded_reason) != std::string::npos);
  }
  CHECK(rows == 16);
}

TEST_CASE("discrete samples record the oracle gap and a captured eigenvalue") {
  const auto art = run_experiment(cfg({{"algorithm", "QRShifted"}, {"n", "20"}, {"samples", "20"}}));
  CHECK(art.summary.retained == 20);
  for (const auto& s : art.samples) {
    REQUIRE(s.retained());
    CHECK(*s.gap > 0.0);
    CHECK(*s.lambda1_est <= *s.lambda1_true + 1e-9);
    CHECK(*s.k_hat >= 1);
    CHECK(*s.k_hat <= 19);
  }
}

TEST_CASE("Toda samples halt next to lambda1 and carry the pairing statistic") {
  const auto art = run_experiment(cfg({{"algorithm", "TodaT1"}, {"n", "30"}, {"samples", "50"}}));
  REQUIRE(art.summary.gap_pairing_ks.has_value());
  for (const auto& s : art.samples) CHECK(std::abs(*s.lambda1_est - *s.lambda1_true) <= 1e-8);
  const auto j = nlohmann::json::parse(summary_json(art));
  CHECK(j["config"]["algorithm"] == "TodaT1");
  CHECK(j["config"]["n"] == "30");
  CHECK(j["retained"] == 50);
  CHECK(j.contains("wall_time_seconds"));
  CHECK(j["normalized"].size() == 50);
}

TEST_CASE("full spectrum mode reports deflations") {
  const auto art = run_experiment(
      cfg({{"algorithm", "QRShifted"}, {"n", "8"}, {"samples", "10"}, {"halting_mode", "full_spectrum"}}));
  REQUIRE(art.summary.mean_deflations.has_value());
  CHECK(*art.summary.mean_deflations == 7.0);
}

TEST_CASE("CG runs") {
  const auto art = run_experiment(
      cfg({{"ensemble", "WishartSystem"}, {"algorithm", "CG"}, {"n", "30"}, {"samples", "20"},
           {"wishart_entries", "bernoulli"}}));
  CHECK(art.summary.retained == 20);
  CHECK(art.label() == "WishartSystem-bernoulli_CG");
}

TEST_CASE("outside-scaling-region flag reaches every file") {
  const auto art = run_experiment(
      cfg({{"algorithm", "TodaT1"}, {"n", "30"}, {"epsilon", "1e-2"}, {"samples", "30"}}));
  const auto root = scratch("flag");
  const auto dir = write_artifact(art, root);
  CHECK(dir.filename().string() == "run-" + config_hash(art.config));
  for (const char* f : {"raw.csv", "hist.csv", "ecdf.csv"}) {
    CAPTURE(f);
    CHECK(lines_of(dir / f).at(0) == "# outside_scaling_region");
  }
  const auto j = nlohmann::json::parse(std::ifstream(dir / "summary.json"));
  CHECK(j["flags"][0] == "outside_scaling_region");
  const auto back = load_artifact(dir);
  CHECK(back.summary.flags == art.summary.flags);
  fs::remove_all(root);
}

TEST_CASE("artifacts round-trip through disk") {
  const auto art = run_experiment(cfg({{"n", "10"}, {"samples", "30"}, {"algorithm", "Jacobi"}}));
  const auto root = scratch("roundtrip");
  const auto dir = write_artifact(art, root);
  for (const char* f : {"raw.csv", "summary.json", "hist.csv", "ecdf.csv"}) CHECK(fs::exists(dir / f));
  const auto back = load_artifact(dir);
  CHECK(raw_csv(back) == raw_csv(art));
  CHECK(summary_json(back) == summary_json(art));
  CHECK_THROWS_AS(load_artifact(root / "missing"), IoError);
  fs::remove_all(root);
}

TEST_CASE("compare_runs") {
  const auto a = run_experiment(cfg({{"n", "10"}, {"samples", "150"}}));
  const auto self = compare_runs(a, a);
  CHECK(self.ks == 0.0);
  CHECK(self.label_a == "GOE_QR");
  CHECK(self.label_b == "GOE_QR_2");
  CHECK(self.density_a == self.density_b);

  const auto toda = run_experiment(cfg({{"algorithm", "TodaT1"}, {"n", "10"}, {"samples", "150"}}));
  CHECK_THROWS_AS(compare_runs(a, toda), MismatchedConfig);
  const auto small = run_experiment(cfg({{"n", "10"}, {"samples", "50"}}));
  CHECK_THROWS_AS(compare_runs(a, small), InsufficientSamples);

  const auto b = run_experiment(cfg({{"ensemble", "UniformWigner"}, {"n", "10"}, {"samples", "150"}}));
  const auto rep = compare_runs(a, b);
  CHECK(rep.ks > 0.0);
  CHECK(rep.ks < 1.0);
  CHECK(rep.density_a.size() + 1 == rep.bin_edges.size());
}

TEST_CASE("plot data") {
  const auto a = run_experiment(cfg({{"n", "10"}, {"samples", "150"}}));
  const auto b = run_experiment(cfg({{"ensemble", "BernoulliWigner"}, {"n", "10"}, {"samples", "150"}}));
  const auto root = scratch("plot");

  const auto one = emit_plot_data({&a}, root / "one", 4);
  const auto hist = lines_of(one.histogram_csv);
  CHECK(hist.size() == 5);
  CHECK(hist[0] == "bin_left,bin_right,density_GOE_QR");

  const auto two = emit_plot_data({&a, &b}, root / "two");
  const auto h2 = lines_of(two.histogram_csv);
  CHECK(h2[0] == "bin_left,bin_right,density_GOE_QR,density_BernoulliWigner_QR");
  double lo = 1e300, hi = -1e300;
  for (const auto* art : {&a, &b})
    for (double v : art->summary.normalized) lo = std::min(lo, v), hi = std::max(hi, v);
  CHECK(std::stod(split(h2[1])[0]) == lo);
  CHECK(std::stod(split(h2.back())[1]) == hi);

  // the ECDF columns reproduce the compare_runs distance
  const auto e = lines_of(two.ecdf_csv);
  CHECK(e[0] == "x,F_GOE_QR,F_BernoulliWigner_QR");
  double d = 0.0;
  for (std::size_t i = 1; i < e.size(); ++i) {
    const auto f = split(e[i]);
    d = std::max(d, std::abs(std::stod(f[1]) - std::stod(f[2])));
  }
  CHECK(d == doctest::Approx(compare_runs(a, b).ks).epsilon(1e-12));

  std::ofstream(root / "blocker") << "x";
  CHECK_THROWS_AS(emit_plot_data({&a}, root / "blocker" / "sub"), IoError);
  CHECK_THROWS_AS(emit_plot_data({}, root / "none"), std::invalid_argument);
  fs::remove_all(root);
}

TEST_CASE("run_sample matches the run") {
  const auto c = cfg({{"n", "9"}, {"samples", "5"}, {"algorithm", "Jacobi"}});
  const auto art = run_experiment(c);
  for (std::uint64_t i = 0; i < 5; ++i) CHECK(run_sample(c, i).t == art.samples[i].t);
}
