#include <benchmark/benchmark.h>

#include <omp.h>

#include "epci/exceedance.hpp"
#include "epci/models.hpp"
#include "epci/simulation.hpp"

namespace {

epci::CoverageConfig small_config() {
    epci::CoverageConfig config = epci::default_coverage_config(epci::Scenario::sample_mean);
    config.sample_sizes = {20, 100};
    config.replications = 200;
    return config;
}

void BM_CoverageSerial(benchmark::State& state) {
    const auto config = small_config();
    for (auto _ : state) benchmark::DoNotOptimize(epci::serial::run_mean_coverage(config));
}

void BM_CoverageParallel(benchmark::State& state) {
    const auto config = small_config();
    omp_set_num_threads(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(epci::run_mean_coverage(config));
}

void BM_CurveSerial(benchmark::State& state) {
    const auto fit = epci::summary_from_stats(0.25, 1.1, 100);
    const auto grid = epci::default_cutoff_grid(fit);
    for (auto _ : state)
        benchmark::DoNotOptimize(epci::ep_curve_serial(fit, grid, 100, 0.05, epci::Side::two_sided));
}

void BM_CurveParallel(benchmark::State& state) {
    const auto fit = epci::summary_from_stats(0.25, 1.1, 100);
    const auto grid = epci::default_cutoff_grid(fit);
    omp_set_num_threads(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(epci::ep_curve(fit, grid, 100, 0.05, epci::Side::two_sided));
}

}  // namespace

BENCHMARK(BM_CoverageSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoverageParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CurveSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CurveParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
