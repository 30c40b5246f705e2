#include <benchmark/benchmark.h>

#include "nqs/estimator.hpp"
#include "nqs/hamiltonian.hpp"
#include "nqs/sampler.hpp"
#include "nqs/spectral.hpp"

namespace {

void BM_FisherFromBatch(benchmark::State& state) {
    const std::size_t n = 16;
    const auto p = nqs::init_random(n, 3 * n, 0.1, 1);
    auto ensemble = nqs::make_ensemble(p, 8, nqs::MoveKind::SpinFlip, 2);
    const auto batch = nqs::draw_batch(ensemble, p, nullptr, static_cast<std::size_t>(state.range(0)), 1, 50);
    for (auto _ : state) benchmark::DoNotOptimize(nqs::fisher_from_batch(batch));
}
BENCHMARK(BM_FisherFromBatch)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_ExactMoments(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto p = nqs::init_random(n, 3 * n, 0.1, 1);
    const auto ham = nqs::Hamiltonian::transverse_field_ising(nqs::build_chain(n, true), 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(nqs::exact_moments(p, &ham));
}
BENCHMARK(BM_ExactMoments)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Spectrum(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto p = nqs::init_random(n, 3 * n, 0.1, 1);
    const auto s = nqs::fisher_exact(p);
    for (auto _ : state) benchmark::DoNotOptimize(nqs::spectrum(s, n, 3 * n));
}
BENCHMARK(BM_Spectrum)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
