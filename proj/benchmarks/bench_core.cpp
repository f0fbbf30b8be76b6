// Micro-benchmarks for the hot exact-arithmetic paths: normal forms,
// spectral data, p-adic row spaces, the decision pipeline, and the
// congruence-class enumeration.

#include <benchmark/benchmark.h>

#include <random>

#include "cstareq/decide.hpp"
#include "cstareq/invariants.hpp"
#include "cstareq/padic.hpp"

using namespace cstareq;

namespace {

IntMatrix random_matrix(std::mt19937& rng, std::size_t n, long lo, long hi) {
    std::uniform_int_distribution<long> d(lo, hi);
    IntMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = d(rng);
    return a;
}

void BM_snf(benchmark::State& state) {
    std::mt19937 rng(1);
    std::size_t n = static_cast<std::size_t>(state.range(0));
    IntMatrix a = random_matrix(rng, n, -9, 9);
    for (auto _ : state) benchmark::DoNotOptimize(snf(a));
}
BENCHMARK(BM_snf)->Arg(3)->Arg(4)->Arg(5);

void BM_hnf(benchmark::State& state) {
    std::mt19937 rng(2);
    std::size_t n = static_cast<std::size_t>(state.range(0));
    IntMatrix a = random_matrix(rng, n, -9, 9);
    for (auto _ : state) benchmark::DoNotOptimize(hnf(a));
}
BENCHMARK(BM_hnf)->Arg(3)->Arg(5)->Arg(8);

void BM_char_poly(benchmark::State& state) {
    std::mt19937 rng(3);
    std::size_t n = static_cast<std::size_t>(state.range(0));
    IntMatrix a = random_matrix(rng, n, -9, 9);
    for (auto _ : state) benchmark::DoNotOptimize(char_poly(a));
}
BENCHMARK(BM_char_poly)->Arg(4)->Arg(8);

void BM_perron_data(benchmark::State& state) {
    IntMatrix a({{19, 5}, {4, 1}});
    for (auto _ : state) benchmark::DoNotOptimize(perron_data(a));
}
BENCHMARK(BM_perron_data);

void BM_eventual_row_space(benchmark::State& state) {
    IntMatrix a({{65, 7}, {24, 67}});
    unsigned m = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(eventual_row_space(a, 2, m));
}
BENCHMARK(BM_eventual_row_space)->Arg(5)->Arg(10)->Arg(20);

void BM_decide_equivalent(benchmark::State& state) {
    IntMatrix a({{4, 1}, {1, 2}}), b({{3, 1}, {2, 3}});
    for (auto _ : state)
        benchmark::DoNotOptimize(decide_pair(a, b, Mode::Ordered));
}
BENCHMARK(BM_decide_equivalent);

void BM_decide_obstructed(benchmark::State& state) {
    IntMatrix a({{65, 7}, {24, 67}});
    for (auto _ : state)
        benchmark::DoNotOptimize(decide_pair(a, a.transpose(), Mode::Ordered));
}
BENCHMARK(BM_decide_obstructed);

void BM_verify_witness(benchmark::State& state) {
    IntMatrix a({{1, 5}, {3, 3}});
    RatMatrix j(IntMatrix({{1, 2}, {2, 3}}));
    for (auto _ : state)
        benchmark::DoNotOptimize(verify_witness(a, a.transpose(), j, Mode::Ordered));
}
BENCHMARK(BM_verify_witness);

void BM_cc_set(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(cc_set(3, 2, 1, 2));
}
BENCHMARK(BM_cc_set);

}  // namespace

BENCHMARK_MAIN();
