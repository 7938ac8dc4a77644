#include <benchmark/benchmark.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ehz/capacity.hpp"
#include "ehz/polytope.hpp"

using namespace ehz;

namespace {

HPolytope polygon(int facets) { return make_random_polytope(1, facets, 42); }

void BM_ordered_search(benchmark::State& state) {
    const HPolytope K = polygon(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(capacity(K).capacity);
}

void BM_plain_enumeration(benchmark::State& state) {
    const HPolytope K = polygon(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(capacity_reference(K).capacity);
}

void BM_ordered_search_cube4(benchmark::State& state) {
#ifdef _OPENMP
    omp_set_num_threads(static_cast<int>(state.range(0)));
#endif
    const HPolytope K = make_cube(2, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(capacity(K).capacity);
#ifdef _OPENMP
    omp_set_num_threads(omp_get_num_procs());
#endif
}

void BM_symmetric_cube4(benchmark::State& state) {
    const HPolytope K = make_cube(2, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(capacity_symmetric(K).capacity);
}

void BM_pruned_cube4(benchmark::State& state) {
    const HPolytope K = make_cube(2, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(capacity_pruned(K).capacity);
}

}  // namespace

BENCHMARK(BM_ordered_search)->DenseRange(5, 8);
BENCHMARK(BM_plain_enumeration)->DenseRange(5, 8);
BENCHMARK(BM_ordered_search_cube4)->Arg(1)->Arg(2)->Arg(4);
BENCHMARK(BM_symmetric_cube4);
BENCHMARK(BM_pruned_cube4);

BENCHMARK_MAIN();
