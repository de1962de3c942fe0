// Microbenchmarks for the hot kernels: coefficient convolutions, the
// diagonal semigroup, DFTs, and whole solver steps.

#include <benchmark/benchmark.h>

#include <random>

#include "apcgl/dft.hpp"
#include "apcgl/linear_propagator.hpp"
#include "apcgl/reference.hpp"
#include "apcgl/splitting.hpp"

namespace {

using namespace apcgl;

const CglParams kCubic{1.0, 1.0, 0.1, 1.0, 1.0, 3, {-1.0, -1.0}};

ApSeries make_series(std::size_t modes) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> mag(0.0, 0.5);
    std::uniform_real_distribution<double> phase(0.0, 6.28);
    ApSeries u(1.0, modes);
    for (std::size_t j = 1; j <= modes; ++j) {
        u.set_coeff(j, std::polar(mag(rng) * std::pow(0.8, double(j)), phase(rng)));
    }
    return u;
}

void BM_CauchyProduct(benchmark::State& state) {
    const ApSeries u = make_series(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cauchy_product(u, u));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CauchyProduct)->RangeMultiplier(2)->Range(32, 512)->Complexity();

void BM_PowerCubic(benchmark::State& state) {
    const ApSeries u = make_series(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(power(u, 3));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PowerCubic)->RangeMultiplier(2)->Range(32, 512)->Complexity();

void BM_LinearStep(benchmark::State& state) {
    const ApSeries u = make_series(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(linear_step(u, kCubic, 0.01));
    }
}
BENCHMARK(BM_LinearStep)->RangeMultiplier(4)->Range(32, 512);

void BM_LieTrotterStep(benchmark::State& state) {
    const ApSeries u = make_series(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(lie_trotter_step(u, kCubic, 0.01));
    }
}
BENCHMARK(BM_LieTrotterStep)->RangeMultiplier(2)->Range(32, 256);

void BM_Fft(benchmark::State& state) {
    std::vector<Complex> data(state.range(0), Complex{0.3, -0.1});
    for (auto _ : state) {
        fft_radix2(data, -1);
        benchmark::DoNotOptimize(data.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fft)->RangeMultiplier(2)->Range(256, 2048)->Complexity();

void BM_PseudospectralEtdrk4(benchmark::State& state) {
    const ApSeries u0 = make_series(32);
    PseudospectralOptions opts;
    opts.scheme = Scheme::etdrk4;
    // 64 steps per iteration at N = state.range(0).
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            pseudospectral_solve(u0, kCubic, 0.064, state.range(0), 1e-3, opts));
    }
}
BENCHMARK(BM_PseudospectralEtdrk4)->Arg(256)->Arg(512);

void BM_KernelQuadrature(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernel_convolve_mode(kCubic, 0.5, 4, 1.0));
    }
}
BENCHMARK(BM_KernelQuadrature);

} // namespace

BENCHMARK_MAIN();
