#include <benchmark/benchmark.h>

#include "horolab/dynamics.hpp"
#include "horolab/group.hpp"

using namespace horolab;

static void BM_Compose(benchmark::State& state) {
    GroupElement g = haar_draw(3.0, 1, 0), h = haar_draw(3.0, 1, 1);
    for (auto _ : state) {
        g = compose(g, h);
        benchmark::DoNotOptimize(g);
    }
}
BENCHMARK(BM_Compose);

static void BM_HaarDraw(benchmark::State& state) {
    std::uint64_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(haar_draw(2.0, 7, i++));
}
BENCHMARK(BM_HaarDraw);

static void BM_HoroCoords(benchmark::State& state) {
    GroupElement g = haar_draw(2.0, 3, 5);
    for (auto _ : state) benchmark::DoNotOptimize(from_horo(to_horo_coords(g)));
}
BENCHMARK(BM_HoroCoords);

static void BM_Lyapunov(benchmark::State& state) {
    GroupElement g = haar_draw(2.0, 5, 1);
    for (auto _ : state) benchmark::DoNotOptimize(lyapunov_exponent(g, Direction::Unstable, 10.0));
}
BENCHMARK(BM_Lyapunov);
