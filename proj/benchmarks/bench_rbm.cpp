#include <random>

#include <benchmark/benchmark.h>

#include "nqs/rbm.hpp"

namespace {

void BM_LogPsiRatio(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto p = nqs::init_random(n, 3 * n, 0.1, 1);
    nqs::SpinConfig x(n);
    nqs::LookupState lookup(x, p);
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<std::size_t> site(0, n - 1);
    for (auto _ : state) {
        const std::size_t flip[1] = {site(rng)};
        benchmark::DoNotOptimize(nqs::log_psi_ratio(lookup, flip, p));
    }
}
BENCHMARK(BM_LogPsiRatio)->Arg(16)->Arg(40)->Arg(100);

void BM_LogPsi(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto p = nqs::init_random(n, 3 * n, 0.1, 1);
    const nqs::SpinConfig x(n);
    for (auto _ : state) benchmark::DoNotOptimize(nqs::log_psi(x, p));
}
BENCHMARK(BM_LogPsi)->Arg(16)->Arg(40)->Arg(100);

}  // namespace
