// Serial reference sweep against the OpenMP sweep on short runs.

#include <benchmark/benchmark.h>

#include "rftrack/config.hpp"
#include "rftrack/sweep.hpp"

namespace {

rftrack::Experiment short_experiment(int samples)
{
    auto exp = rftrack::reference_experiment();
    exp.sim.t_end = 0.1;
    exp.sweep.samples = samples;
    return exp;
}

void BM_SweepSerial(benchmark::State& state)
{
    const auto exp = short_experiment(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(rftrack::robustness_sweep_serial(exp.sim, exp.sweep));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepParallel(benchmark::State& state)
{
    const auto exp = short_experiment(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(rftrack::robustness_sweep(exp.sim, exp.sweep));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
