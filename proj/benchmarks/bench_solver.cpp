#include <cmath>
#include <numbers>
#include <vector>

#include <benchmark/benchmark.h>

#include "gem/config.hpp"
#include "gem/kspace.hpp"
#include "gem/metrics.hpp"
#include "gem/pulse.hpp"
#include "gem/solver.hpp"

namespace {

gem::GemConfig bench_config(double beta)
{
    return gem::make_gem_config(gem::Grid{-3.0, 3.0, 1700, 100.0, 4001}, 8.0, beta,
                                40.0);
}

void BM_RunGem(benchmark::State& state)
{
    const auto config = bench_config(1.0);
    const auto pulse = gem::make_gaussian(5.0, 1.5);
    for (auto _ : state)
        benchmark::DoNotOptimize(gem::run_gem(config, pulse));
    state.SetItemsProcessed(state.iterations() *
                            static_cast<long>(config.grid.nz * config.grid.nt));
}
BENCHMARK(BM_RunGem)->Unit(benchmark::kMillisecond);

void BM_RunGemBatch(benchmark::State& state)
{
    const auto config = bench_config(1.0);
    std::vector<gem::PulseSpec> pulses;
    for (long n = 0; n < state.range(0); ++n)
        pulses.push_back(gem::make_plane_wave_mode(n - state.range(0) / 2, 10.0, 20.0));
    for (auto _ : state)
        benchmark::DoNotOptimize(gem::run_gem_batch(config, pulses));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunGemBatch)->Arg(1)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Fidelity(benchmark::State& state)
{
    const auto record =
        gem::run_gem(bench_config(1.0), gem::make_plane_wave_mode(3L, 10.0, 20.0));
    for (auto _ : state)
        benchmark::DoNotOptimize(gem::storage_report(record));
}
BENCHMARK(BM_Fidelity)->Unit(benchmark::kMillisecond);

void BM_KSpace(benchmark::State& state)
{
    const auto record = gem::run_gem(bench_config(1.0), gem::make_gaussian(5.0, 1.5),
                                     {.history_stride = 40});
    for (auto _ : state)
        benchmark::DoNotOptimize(gem::to_kspace(record, record.config.linear_density));
}
BENCHMARK(BM_KSpace)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
