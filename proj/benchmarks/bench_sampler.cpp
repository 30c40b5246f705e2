#include <benchmark/benchmark.h>

#include "nqs/gibbsmap.hpp"
#include "nqs/sampler.hpp"

namespace {

void BM_FlipSweep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto p = nqs::init_random(n, 3 * n, 0.1, 1);
    nqs::ChainState chain;
    chain.lookup = nqs::LookupState(nqs::SpinConfig(n), p);
    chain.rng.seed(3);
    for (auto _ : state) nqs::metropolis_flip_sweep(chain, p);
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_FlipSweep)->Arg(16)->Arg(40);

void BM_TemperedSweep(benchmark::State& state) {
    const std::size_t n = 16;
    const auto p = nqs::init_random(n, 3 * n, 0.1, 1);
    auto ensemble = nqs::make_ensemble(p, static_cast<std::size_t>(state.range(0)), nqs::MoveKind::SpinFlip, 4);
    for (auto _ : state) nqs::sweep(ensemble, p);
}
BENCHMARK(BM_TemperedSweep)->Arg(1)->Arg(16);

void BM_WolffUpdate(benchmark::State& state) {
    const auto side = static_cast<std::size_t>(state.range(0));
    const auto lattice = nqs::build_square(side, true);
    nqs::SpinConfig x(side * side);
    std::mt19937_64 rng(5);
    for (auto _ : state) benchmark::DoNotOptimize(nqs::wolff_update(x, 0.44, lattice, rng));
}
BENCHMARK(BM_WolffUpdate)->Arg(6)->Arg(12);

}  // namespace
