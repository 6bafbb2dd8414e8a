// Serial vs OpenMP comparison for the replicate-level simulation kernels.
#include <benchmark/benchmark.h>

#include "expapprox/simulate.hpp"

using namespace expapprox;

namespace {

const DistributionSpec& offspring() {
    static const DistributionSpec off =
        make_finite_pmf({{0.0, 0.25}, {1.0, 0.5}, {2.0, 0.25}});
    return off;
}

void bench_random_sum(benchmark::State& state, ParallelMode mode) {
    const auto n_dist = make_builtin("geometric-from-1", {0.05});
    SummandGen gen;
    gen.dists = {make_builtin("exponential", {1.0})};
    const auto reps = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto s = simulate_random_sum(n_dist, gen, 20.0, reps, 42, mode);
        benchmark::DoNotOptimize(s.values.data());
    }
    state.SetItemsProcessed(state.iterations() * reps);
}

void bench_spine(benchmark::State& state, ParallelMode mode) {
    const auto reps = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto stats = spine_sample_many(offspring(), 16, reps, 42, mode);
        benchmark::DoNotOptimize(stats.data());
    }
    state.SetItemsProcessed(state.iterations() * reps);
}

void bench_pattern(benchmark::State& state, ParallelMode mode) {
    const auto reps = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto s = simulate_pattern_time(0.5, "", PatternMode::declumped_head_run, 8,
                                       reps, 42, 1.0 / 512.0, mode);
        benchmark::DoNotOptimize(s.values.data());
    }
    state.SetItemsProcessed(state.iterations() * reps);
}

}  // namespace

BENCHMARK_CAPTURE(bench_random_sum, serial, ParallelMode::serial)->Arg(20000);
BENCHMARK_CAPTURE(bench_random_sum, openmp, ParallelMode::openmp)->Arg(20000);
BENCHMARK_CAPTURE(bench_spine, serial, ParallelMode::serial)->Arg(5000);
BENCHMARK_CAPTURE(bench_spine, openmp, ParallelMode::openmp)->Arg(5000);
BENCHMARK_CAPTURE(bench_pattern, serial, ParallelMode::serial)->Arg(20000);
BENCHMARK_CAPTURE(bench_pattern, openmp, ParallelMode::openmp)->Arg(20000);

BENCHMARK_MAIN();
