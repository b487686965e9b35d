#include <benchmark/benchmark.h>

#include <cmath>

#include "horolab/harmonic.hpp"

using namespace horolab;

static void BM_PlaneWave(benchmark::State& state) {
    cplx z(0.3, 0.2), b = std::polar(1.0, 0.4);
    double r = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(plane_wave(z, b, r));
        r += 1e-3;
    }
}
BENCHMARK(BM_PlaneWave);

static void BM_LaplaceApply(benchmark::State& state) {
    DiskFunction f = [](cplx w) { return plane_wave(w, 1.0, 2.0); };
    for (auto _ : state) benchmark::DoNotOptimize(laplace_apply(f, cplx(0.3, 0.2), 1e-3));
}
BENCHMARK(BM_LaplaceApply);

// Small grid so one iteration stays well under a second.
static void BM_HelgasonForward(benchmark::State& state) {
    QuadratureSpec q;
    q.n_b = 16;
    q.r_panels = 4;
    q.n_rho = 16;
    q.n_phi = 32;
    q.support_radius = 3.0;
    DiskFunction f = [](cplx z) {
        double d = distance_from_origin(z);
        return cplx(std::exp(-d * d) * smooth_step_down(d - 1.5));
    };
    for (auto _ : state) benchmark::DoNotOptimize(helgason_forward(f, q));
}
BENCHMARK(BM_HelgasonForward)->Unit(benchmark::kMillisecond);
