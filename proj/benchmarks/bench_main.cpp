#include <benchmark/benchmark.h>

#include <cmath>

#include "segcoal/events.hpp"
#include "segcoal/flow.hpp"
#include "segcoal/gwve.hpp"

using namespace segcoal;

namespace {

StoreConfig config(int depth, double horizon, std::uint64_t seed) {
    StoreConfig c;
    c.space = SpaceConfig{Alphabet(2), GeometryKind::CantorSet, depth};
    c.rates = RateFamily::constant(1);
    c.depth = depth;
    c.horizon = horizon;
    c.seed = seed;
    return c;
}

}  // namespace

static void BM_SurvivorCounts(benchmark::State& state) {
    const int depth = static_cast<int>(state.range(0));
    const double t = 0.5 * std::log(2.0);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        EventStore store(config(depth, t, seed++));
        benchmark::DoNotOptimize(survivor_counts(store, t));
    }
}
BENCHMARK(BM_SurvivorCounts)->Arg(10)->Arg(20)->Arg(30);

static void BM_DustEmpty(benchmark::State& state) {
    const double t = 0.5 * std::log(2.0);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        EventStore store(config(30, t, seed++));
        benchmark::DoNotOptimize(dust_empty(store, t));
    }
}
BENCHMARK(BM_DustEmpty);

static void BM_TraceLineage(benchmark::State& state) {
    const int depth = static_cast<int>(state.range(0));
    EventStore store(config(depth, 2.0, 7));
    SplitMix64 rng(11);
    for (auto _ : state) {
        const Word x = sample_uniform_point(Word{}, depth, Alphabet(2), rng);
        benchmark::DoNotOptimize(trace_lineage(store, x, 0.0, 2.0));
    }
}
BENCHMARK(BM_TraceLineage)->Arg(12)->Arg(24);

static void BM_ExtinctProbBy(benchmark::State& state) {
    const GwveSpec spec{Alphabet(2), RateFamily::harmonic(1), 0.7};
    for (auto _ : state) benchmark::DoNotOptimize(extinct_prob_by(spec, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ExtinctProbBy)->Arg(100)->Arg(1000);

static void BM_ExtinctProbLimit(benchmark::State& state) {
    const GwveSpec spec{Alphabet(2), RateFamily::constant(1), 0.5 * std::log(2.0)};
    for (auto _ : state) benchmark::DoNotOptimize(extinct_prob_limit(spec, 1e-9));
}
BENCHMARK(BM_ExtinctProbLimit);

BENCHMARK_MAIN();
