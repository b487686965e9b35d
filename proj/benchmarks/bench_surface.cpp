#include <benchmark/benchmark.h>

#include "horolab/surface.hpp"

using namespace horolab;

namespace {
const FuchsianGroup& group() {
    static const FuchsianGroup G = bolza_group(3);
    return G;
}
}  // namespace

static void BM_ReduceToDomain(benchmark::State& state) {
    group();  // build the cached ball outside the timed loop
    std::uint64_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(reduce_to_domain(group(), haar_draw(6.0, 2, i++)));
}
BENCHMARK(BM_ReduceToDomain);

static void BM_SurfaceDraw(benchmark::State& state) {
    group();
    std::uint64_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(surface_draw(group(), 9, i++));
}
BENCHMARK(BM_SurfaceDraw);

static void BM_PoincareObservable(benchmark::State& state) {
    Observable f = poincare_observable(standard_bump(1.2), group(), 1, true);
    std::uint64_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(f(surface_draw(group(), 4, i++).g));
}
BENCHMARK(BM_PoincareObservable);

static void BM_GroupBall(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(group_ball(group(), static_cast<int>(state.range(0))));
}
BENCHMARK(BM_GroupBall)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
