#include <benchmark/benchmark.h>

#include "hybridtherm/dot_model.hpp"
#include "hybridtherm/gillespie.hpp"
#include "hybridtherm/sweep.hpp"

using namespace hybridtherm;

namespace {

DotParams filter_machine(double mu_c, double mu_h) {
    return DotParams{0.0, -50.0, 90.0, mu_c, mu_h, 20.0, 30.0, 25.0, 1.0, 0.0, {}};
}

void BM_SteadyState(benchmark::State& state) {
    DotParams p = filter_machine(25, 15);
    p.gamma_leak = 0.01 * static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(steady_state(p));
}
BENCHMARK(BM_SteadyState)->Arg(0)->Arg(10);

void BM_AnalyticalCurrent(benchmark::State& state) {
    const DotParams p = filter_machine(25, 15);
    for (auto _ : state) benchmark::DoNotOptimize(analytical_particle_current(p));
}
BENCHMARK(BM_AnalyticalCurrent);

void BM_RegimeMap(benchmark::State& state) {
    SweepSpec spec;
    spec.base = filter_machine(0, 0);
    const auto n = static_cast<std::size_t>(state.range(0));
    spec.axes = {{AxisKind::MuC, -50.0, 150.0, n}, {AxisKind::MuH, -50.0, 150.0, n}};
    spec.reference = {SweepReferenceKind::Fixed, 25.0};
    const auto threads = static_cast<unsigned>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(run_sweep(spec, threads));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_RegimeMap)->Args({101, 1})->Args({201, 1})->Args({201, 0})->Unit(benchmark::kMillisecond);

void BM_Trajectory(benchmark::State& state) {
    TrajectoryConfig c;
    c.params = filter_machine(25, 15);
    c.total_time = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(simulate(c));
}
BENCHMARK(BM_Trajectory)->Arg(100000)->Arg(10000000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
