#include <benchmark/benchmark.h>

#include <cmath>

#include "specprobe/eigensolve.hpp"
#include "specprobe/kernel.hpp"
#include "specprobe/probe.hpp"
#include "specprobe/specfun.hpp"
#include "specprobe/wkb.hpp"

using namespace specprobe;

namespace {

const SpectrumTable& quartic_table() {
    static const SpectrumTable t = solve_spectrum(Channel(3, 0), PotentialModel::quartic(), 60);
    return t;
}

void BM_BesselJ(benchmark::State& state) {
    const double nu = static_cast<double>(state.range(0)) + 0.5;
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bessel_j(nu, x));
        x = x < 200 ? x * 1.07 : 0.1;
    }
}
BENCHMARK(BM_BesselJ)->Arg(0)->Arg(5)->Arg(40);

void BM_SolveLevel(benchmark::State& state) {
    const int l = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_level(Channel(3, 0), PotentialModel::quartic(), l));
}
BENCHMARK(BM_SolveLevel)->Arg(0)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_SolveSpectrum(benchmark::State& state) {
    SolverOptions opts;
    opts.threads = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            solve_spectrum(Channel(3, 0), PotentialModel::quartic(), static_cast<int>(state.range(0)), opts));
    }
}
BENCHMARK(BM_SolveSpectrum)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_ProbeG(benchmark::State& state) {
    const auto& q = quartic_table();
    const auto phi = make_bump(1.0, 0.2, q.grid);
    const auto psi = make_bump(1.5, 0.2, q.grid);
    const double tau = q.pairs[30].lambda;
    for (auto _ : state) {
        benchmark::DoNotOptimize(probe_G(q, tau, std::sqrt(tau), std::sqrt(tau), WindowSpec{1.0}, phi, psi));
    }
}
BENCHMARK(BM_ProbeG)->Unit(benchmark::kMicrosecond);

void BM_ProbeSequence(benchmark::State& state) {
    const auto& q = quartic_table();
    const auto phi = make_bump(1.0, 0.2, q.grid);
    const auto psi = make_bump(1.5, 0.2, q.grid);
    for (auto _ : state) benchmark::DoNotOptimize(probe_sequence(q, phi, psi, WindowSpec{1.0}, 20, 50));
}
BENCHMARK(BM_ProbeSequence)->Unit(benchmark::kMillisecond);

void BM_ChannelKernel(benchmark::State& state) {
    const auto& q = quartic_table();
    for (auto _ : state) benchmark::DoNotOptimize(channel_kernel(q, 0.7, 1.1, 1.3, 20));
}
BENCHMARK(BM_ChannelKernel)->Unit(benchmark::kMicrosecond);

void BM_AppendixIntegral(benchmark::State& state) {
    const double lambda = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(appendix_error_integral(Channel(3, 0), PotentialModel::quartic(), lambda, 0.1));
    }
}
BENCHMARK(BM_AppendixIntegral)->Arg(100)->Arg(1600)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
