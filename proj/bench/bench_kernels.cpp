// Serial reference vs OpenMP path for the two parallel kernels: multi-start
// fitting and the pump-strength sweep.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "eitats/fitter.hpp"
#include "eitats/lineshape.hpp"
#include "eitats/simulation.hpp"

using namespace eitats;

namespace {

Spectrum profile(double omega)
{
    TlaParams p;
    p.omega = omega;
    return absorption_profile(p, default_grid());
}

void BM_FitEit(benchmark::State& state)
{
    const auto exec = state.range(0) ? Execution::Parallel : Execution::Serial;
    const auto data = profile(0.9);
    for (auto _ : state) benchmark::DoNotOptimize(fit(ModelKind::Eit, data, {}, exec));
    state.SetLabel(state.range(0) ? "parallel" : "serial");
}

void BM_Sweep(benchmark::State& state)
{
    const auto exec = state.range(0) ? Execution::Parallel : Execution::Serial;
    const auto omegas = make_grid(0.8, 0.95, 0.01);
    for (auto _ : state) benchmark::DoNotOptimize(sweep_omega(1.0, 0.1, NoiseSpec{}, omegas, {}, exec));
    state.SetLabel(state.range(0) ? "parallel" : "serial");
    state.counters["threads"] = omp_get_max_threads();
}

} // namespace

BENCHMARK(BM_FitEit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
