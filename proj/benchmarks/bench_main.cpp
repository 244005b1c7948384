#include <benchmark/benchmark.h>

#include <numeric>

#include "diffusion/calibrate.hpp"
#include "diffusion/sweep.hpp"

using namespace diffusion;

static void BM_BuildAndRewire(benchmark::State& state) {
  const double p_r = static_cast<double>(state.range(0)) / 10000.0;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    Rng rng(seed++);
    const auto net = rewire(build_lattice({200, 200, Neighborhood::Moore}), p_r, rng);
    benchmark::DoNotOptimize(net.edge_count());
  }
}
BENCHMARK(BM_BuildAndRewire)->Arg(0)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_SimulateFullLattice(benchmark::State& state) {
  SimConfig c;
  c.sigma = SeedPattern::Uniform;
  c.gamma = static_cast<int>(state.range(0));
  c.p_r = 0.01;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    c.seed = seed++;
    benchmark::DoNotOptimize(run_config(c).record.saturation_tick);
  }
}
BENCHMARK(BM_SimulateFullLattice)->Arg(125)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_FitBass(benchmark::State& state) {
  std::vector<double> t(static_cast<std::size_t>(state.range(0)) + 1);
  std::iota(t.begin(), t.end(), 0.0);
  std::vector<double> y;
  for (double x : t) y.push_back(bass_curve({0.01, 0.5}, x));
  for (auto _ : state) benchmark::DoNotOptimize(fit_bass(t, y).params);
}
BENCHMARK(BM_FitBass)->Arg(30)->Arg(120);

BENCHMARK_MAIN();
