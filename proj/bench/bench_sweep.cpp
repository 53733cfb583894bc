// Serial reference vs OpenMP sweep on the same kernels.
#include <benchmark/benchmark.h>

#include "quasitop/majorana.hpp"
#include "quasitop/momentum.hpp"
#include "quasitop/topology.hpp"

using namespace quasitop;

static Exec exec_of(const benchmark::State& st) { return st.range(0) ? Exec::Parallel : Exec::Serial; }

static void BM_BandStructure(benchmark::State& st) {
  auto flux = golden_approximant(10);
  for (auto _ : st) benchmark::DoNotOptimize(band_structure(flux, 1.0, {16, 64}, exec_of(st)));
  st.SetLabel(st.range(0) ? "openmp" : "serial");
}
BENCHMARK(BM_BandStructure)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_BerryFluxes(benchmark::State& st) {
  auto flux = golden_approximant(9);
  for (auto _ : st) benchmark::DoNotOptimize(berry_fluxes(flux, 1.0, default_chern_grid(flux), exec_of(st)));
  st.SetLabel(st.range(0) ? "openmp" : "serial");
}
BENCHMARK(BM_BerryFluxes)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_SeaMomentum(benchmark::State& st) {
  auto flux = golden_approximant(10);
  for (auto _ : st) benchmark::DoNotOptimize(sea_momentum(flux, 1.0, 21, {}, exec_of(st)));
  st.SetLabel(st.range(0) ? "openmp" : "serial");
}
BENCHMARK(BM_SeaMomentum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_PhaseScan(benchmark::State& st) {
  auto flux = golden_approximant(11);
  auto lams = linspace(0.8, 1.3, 11);
  for (auto _ : st) benchmark::DoNotOptimize(phase_scan(0.02, flux, 0.0, 89, lams, exec_of(st)));
  st.SetLabel(st.range(0) ? "openmp" : "serial");
}
BENCHMARK(BM_PhaseScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
