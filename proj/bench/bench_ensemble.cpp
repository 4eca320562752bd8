#include <benchmark/benchmark.h>

#include "mixnoise/ensemble.hpp"

namespace {

mixnoise::EnsemblePoint bench_point(std::size_t n_traj) {
  mixnoise::EnsemblePoint pt;
  pt.noise = mixnoise::MixtureNoise{mixnoise::OuNoise{15.0, 2.0}, mixnoise::FlickerNoise{1.0, 2.0, 2.0}, 0.5};
  pt.n_traj = n_traj;
  pt.grid = mixnoise::TimeGrid::span(0.0, 5.0, 1e-3);
  return pt;
}

void BM_EnsembleSerial(benchmark::State& state) {
  const auto pt = bench_point(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mixnoise::run_ensemble_serial(pt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EnsembleParallel(benchmark::State& state) {
  const auto pt = bench_point(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mixnoise::run_ensemble(pt, 0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_EnsembleSerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EnsembleParallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
