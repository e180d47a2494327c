// Serial reference vs OpenMP kernels: observable rows and scenario sweeps.
// Set OMP_NUM_THREADS to vary the parallel width.

#include <benchmark/benchmark.h>

#include "lbe/observables.hpp"
#include "lbe/scenarios.hpp"

namespace {

const std::vector<lbe::TimeSeriesRecord>& records(std::size_t n) {
  static std::vector<lbe::TimeSeriesRecord> cache;
  if (cache.size() != n) {
    cache.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const lbe::ComplexMatrix rho = lbe::random_density_matrix(2 + i % 3, 100 + i);
      cache.push_back({0.01 * static_cast<double>(i), rho, lbe::rho_to_eta(rho)});
    }
  }
  return cache;
}

std::vector<lbe::ScenarioConfig> sweep_configs(std::size_t n) {
  std::vector<lbe::ScenarioConfig> out;
  for (std::size_t i = 0; i < n; ++i) {
    lbe::ScenarioConfig c = lbe::preset_config("fig1b");
    c.gamma = 0.1 + 0.05 * static_cast<double>(i);
    c.t_end = 5.0;
    c.samples = 501;
    out.push_back(c);
  }
  return out;
}

void BM_RowsSerial(benchmark::State& state) {
  const auto& recs = records(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lbe::evaluate_rows_serial(recs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RowsParallel(benchmark::State& state) {
  const auto& recs = records(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lbe::evaluate_rows(recs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepSerial(benchmark::State& state) {
  const auto configs = sweep_configs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lbe::run_sweep_serial(configs));
}

void BM_SweepParallel(benchmark::State& state) {
  const auto configs = sweep_configs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lbe::run_sweep(configs));
}

}  // namespace

BENCHMARK(BM_RowsSerial)->Arg(2001)->Arg(20001);
BENCHMARK(BM_RowsParallel)->Arg(2001)->Arg(20001);
BENCHMARK(BM_SweepSerial)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
