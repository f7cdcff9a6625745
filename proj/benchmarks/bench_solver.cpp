// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <random>

#include "pulsecomp/admm.hpp"
#include "pulsecomp/ao.hpp"
#include "pulsecomp/quartic.hpp"
#include "pulsecomp/random.hpp"
#include "pulsecomp/signal_model.hpp"

using namespace pulsecomp;

namespace {

PaddedCode make_padded(Eigen::Index n, Eigen::Index pad) {
    auto gen = rng::engine(5);
    return zero_pad(PhaseCode(rng::random_unimodular(n, gen)), pad);
}

void BM_BuildCovariance(benchmark::State& state) {
    const Eigen::Index n = state.range(0);
    const PaddedCode padded = make_padded(n, 0);
    const ClutterProfile profile = ClutterProfile::uniform(static_cast<int>(n) - 1, 1.0, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_covariance(padded, profile));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildCovariance)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void BM_FilterUpdate(benchmark::State& state) {
    const Eigen::Index n = state.range(0);
    const PaddedCode padded = make_padded(n, 0);
    const ClutterProfile profile = ClutterProfile::uniform(static_cast<int>(n) - 1, 1.0, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ao::update_filter(padded, profile));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FilterUpdate)->RangeMultiplier(2)->Range(16, 256)->Complexity();

void BM_QuarticSolve(benchmark::State& state) {
    auto gen = rng::engine(7);
    std::uniform_real_distribution<double> unit(0.1, 10.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            quartic::optimal_magnitude({unit(gen), unit(gen), unit(gen)}));
    }
}
BENCHMARK(BM_QuarticSolve);

void BM_AdmmSweep(benchmark::State& state) {
    const Eigen::Index n = state.range(0);
    auto gen = rng::engine(9);
    const CVector w = rng::complex_gaussian_vector(n, 1.0, gen);
    const MismatchedFilter filter(w);
    const ClutterProfile profile = ClutterProfile::uniform(static_cast<int>(n) - 1, 1.0, 1.0);
    const QuadraticForms forms = build_quadratic_forms(filter, profile, 0, n);

    admm::AdmmState st;
    st.code = rng::random_unimodular(n, gen);
    st.slack_num = st.code;
    st.slack_den = st.code;
    st.dual_num = CVector::Zero(n);
    st.dual_den = CVector::Zero(n);
    const admm::AdmmParams params;
    for (auto _ : state) {
        benchmark::DoNotOptimize(admm::sweep(st, forms, params));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AdmmSweep)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_DesignSmall(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    ao::DesignConfig cfg{n, 0, ClutterProfile::uniform(n - 1, 1.0, 1.0),
                         {}, 20, 1e-6, 1, 1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(ao::design(cfg));
    }
}
BENCHMARK(BM_DesignSmall)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
