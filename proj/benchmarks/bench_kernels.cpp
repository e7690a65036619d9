#include <benchmark/benchmark.h>

#include "haltlab/discrete.hpp"
#include "haltlab/ensembles.hpp"
#include "haltlab/linalg.hpp"
#include "haltlab/toda.hpp"

using namespace haltlab;

namespace {

SymmetricMatrix goe(std::size_t n) {
  EnsembleSpec spec;
  spec.n = n;
  return sample_goe(spec, {1, 0});
}

void BM_QrStep(benchmark::State& state) {
  const auto x = goe(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qr_step(x));
}
BENCHMARK(BM_QrStep)->Arg(20)->Arg(60)->Arg(100);

void BM_JacobiStep(benchmark::State& state) {
  const auto x = goe(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_step(x));
}
BENCHMARK(BM_JacobiStep)->Arg(60)->Arg(100);

void BM_BlockNorms(benchmark::State& state) {
  const auto x = goe(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(block_norms(x));
}
BENCHMARK(BM_BlockNorms)->Arg(60)->Arg(100);

void BM_EigenOracle(benchmark::State& state) {
  const auto x = goe(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eigen_oracle(x));
}
BENCHMARK(BM_EigenOracle)->Arg(60)->Arg(100);

void BM_SolveT1(benchmark::State& state) {
  const auto sd = SpectralData::from_matrix(goe(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(solve_t1(sd, 1e-8));
}
BENCHMARK(BM_SolveT1)->Arg(60)->Arg(100);

void BM_CgHalting(benchmark::State& state) {
  EnsembleSpec spec;
  spec.kind = EnsembleKind::WishartSystem;
  spec.n = static_cast<std::size_t>(state.range(0));
  const auto sys = sample_wishart_system(spec, {1, 0});
  for (auto _ : state) benchmark::DoNotOptimize(cg_halting_time(sys.h, sys.b, 1e-10));
}
BENCHMARK(BM_CgHalting)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
