// Serial reference vs OpenMP kernels.

#include "slbi/conditions.hpp"
#include "slbi/metrics.hpp"
#include "slbi/rng.hpp"
#include "slbi/split_lbi.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace slbi;

namespace {

SimulationSpec bench_spec() {
    SimulationSpec spec;
    spec.time_horizon = 20.0;
    return spec;
}

const std::vector<HarnessHyper> kHypers = {{1.0, 200.0}, {10.0, 200.0}};

void BM_HarnessSerial(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::replicate_harness(bench_spec(), 1, static_cast<std::size_t>(state.range(0)), kHypers));
}

void BM_HarnessParallel(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(replicate_harness(bench_spec(), 1, static_cast<std::size_t>(state.range(0)), kHypers));
}

std::vector<double> nu_grid(int count) {
    std::vector<double> g;
    for (int i = 0; i < count; ++i) g.push_back(std::pow(10.0, -2.0 + 4.0 * i / (count - 1)));
    return g;
}

Problem fused_problem() {
    SimulationSpec spec;
    spec.design = HarnessDesign::fused1d;
    return simulate_problem(spec, 3);
}

void BM_IrrCurveSerial(benchmark::State& state) {
    const Problem p = fused_problem();
    const auto grid = nu_grid(static_cast<int>(state.range(0)));
    const auto signs = truth_sign_pattern(p);
    for (auto _ : state) benchmark::DoNotOptimize(serial::irr_curve(p, p.truth()->support, grid, signs));
}

void BM_IrrCurveParallel(benchmark::State& state) {
    const Problem p = fused_problem();
    const auto grid = nu_grid(static_cast<int>(state.range(0)));
    const auto signs = truth_sign_pattern(p);
    for (auto _ : state) benchmark::DoNotOptimize(irr_curve(p, p.truth()->support, grid, signs));
}

void BM_LbiSteps(benchmark::State& state) {
    const Problem p = simulate_problem(bench_spec(), 5);
    const LbiStepper stepper(p, resolve(p, {10.0, 200.0, std::nullopt}));
    PathPoint pt = initial_point(p, 10.0);
    for (auto _ : state) stepper.advance(pt);
    state.SetItemsProcessed(state.iterations());
}

}  // namespace

BENCHMARK(BM_HarnessSerial)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HarnessParallel)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_IrrCurveSerial)->Arg(41)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IrrCurveParallel)->Arg(41)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_LbiSteps);

BENCHMARK_MAIN();
