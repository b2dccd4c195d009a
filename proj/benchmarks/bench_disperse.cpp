// bench_disperse.cpp -- microbenchmarks for the hot numerical paths.

#include <benchmark/benchmark.h>

#include <complex>

#include "disperse/kernels.hpp"
#include "disperse/models.hpp"
#include "disperse/response.hpp"
#include "disperse/special_functions.hpp"
#include "disperse/transforms.hpp"

using namespace disperse;

namespace {

const DielectricModel kDrude = Drude{1.0, 0.5};
const DielectricModel kLorentz = LorentzSum{{{1.0, 1.0, 0.1}}};
const GaussianPulse kPulse{1.0, 0.2};

void BM_FaddeevaSumRegion(benchmark::State& state) {
    std::complex<double> z{1.3, 0.7};
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfn::faddeeva_w(z));
        z += std::complex<double>(1e-9, 0.0);
    }
}
BENCHMARK(BM_FaddeevaSumRegion);

void BM_FaddeevaAsymptotic(benchmark::State& state) {
    std::complex<double> z{40.0, 15.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfn::faddeeva_w(z));
        z += std::complex<double>(1e-9, 0.0);
    }
}
BENCHMARK(BM_FaddeevaAsymptotic);

void BM_ErfcxReal(benchmark::State& state) {
    double x = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfn::erfcx_real(x));
        x += 1e-9;
    }
}
BENCHMARK(BM_ErfcxReal);

void BM_EvalEpsilonLorentz(benchmark::State& state) {
    double w = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_epsilon(kLorentz, {w, 0.0}));
        w += 1e-9;
    }
}
BENCHMARK(BM_EvalEpsilonLorentz);

void BM_EvalKernelLorentz(benchmark::State& state) {
    const auto kernel = kernel_for(kLorentz);
    double tau = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_kernel(kernel, tau));
        tau += 1e-9;
    }
}
BENCHMARK(BM_EvalKernelLorentz);

void BM_AbelSineDamped(benchmark::State& state) {
    const auto kernel = kernel_for(kDrude);
    for (auto _ : state)
        benchmark::DoNotOptimize(abel_halfline_sine(kernel, 1.0, 0.05));
}
BENCHMARK(BM_AbelSineDamped);

void BM_DisplacementConvolution(benchmark::State& state) {
    const auto kernel = kernel_for(kDrude);
    for (auto _ : state)
        benchmark::DoNotOptimize(displacement_convolution(kernel, kPulse, 2.0));
}
BENCHMARK(BM_DisplacementConvolution);

void BM_DisplacementClosedFormLorentz(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(displacement_closed_form(kLorentz, kPulse, 2.0));
}
BENCHMARK(BM_DisplacementClosedFormLorentz);

void BM_SpectralPathSinglePoint(benchmark::State& state) {
    SpectralSettings settings;
    settings.pairs = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            displacement_spectral(kDrude, kPulse, TimeGrid{2.0, 1.0, 1}, settings));
}
BENCHMARK(BM_SpectralPathSinglePoint)->Arg(4096)->Arg(32768);

void BM_ThetaRecoverySingleTau(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(theta_regularized_kernel_recovery(kDrude, {2.0}));
}
BENCHMARK(BM_ThetaRecoverySingleTau);

} // namespace

BENCHMARK_MAIN();
