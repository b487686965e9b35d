#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "horolab/dynamics.hpp"
#include "horolab/errors.hpp"
#include "horolab/harmonic.hpp"

using namespace horolab;

namespace {
const FuchsianGroup& bolza() {
    static const FuchsianGroup G = bolza_group(3);
    return G;
}

std::vector<double> grid(double t0, double t1, double dt) {
    std::vector<double> t;
    for (int k = 0; t0 + k * dt <= t1 + 1e-12; ++k) t.push_back(t0 + k * dt);
    return t;
}

CorrelationSeries synthetic(const std::function<cplx(double)>& c, double noise) {
    CorrelationSeries s;
    s.times = grid(0.0, 8.0, 0.25);
    for (double t : s.times) {
        s.values.push_back(c(t));
        s.stderr_values.push_back(noise);
    }
    s.N = 1;
    return s;
}
}  // namespace

TEST_CASE("flow laws") {
    for (std::uint64_t i = 0; i < 20; ++i) {
        GroupElement g = haar_draw(2.0, 8, i);
        for (FlowKind k : {FlowKind::Geodesic, FlowKind::StableHoro, FlowKind::UnstableHoro, FlowKind::Rotation}) {
            CHECK(projective_distance(flow(flow(g, k, 0.4), k, 0.9), flow(g, k, 1.3)) < 1e-12);
            CHECK(projective_distance(flow(g, k, 0.0), g) < 1e-14);
        }
        CHECK(std::abs(base_point(flow(g, FlowKind::Rotation, 1.0)) - base_point(g)) < 1e-13);
        HoroCoord h = to_horo_coords(g), hs = to_horo_coords(flow(g, FlowKind::StableHoro, 2.0));
        CHECK(std::abs(hs.b - h.b) < 1e-10);
    }
    for (double t : {0.5, 1.0, 3.0, 7.0})
        CHECK(distance_from_origin(base_point(flow(GroupElement::identity(), FlowKind::Geodesic, t))) ==
              doctest::Approx(t).epsilon(1e-12));
    GroupElement u = GroupElement::identity(Model::UpperHalfPlane);
    CHECK(flow(u, FlowKind::Geodesic, 1.0).model() == Model::UpperHalfPlane);
}

TEST_CASE("Lyapunov exponents") {
    double lo = INFINITY, hi = -INFINITY, worst = 0.0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        GroupElement g = haar_draw(2.0, 9, i);
        double s = lyapunov_exponent(g, Direction::Stable, 10.0);
        double u = lyapunov_exponent(g, Direction::Unstable, 10.0);
        worst = std::max({worst, std::abs(s + 1.0), std::abs(u - 1.0)});
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    CHECK(worst < 0.02);
    CHECK(hi - lo <= 0.02);
    CHECK_THROWS_AS(lyapunov_exponent(GroupElement::identity(), Direction::Stable, 0.5), ContractViolation);
    CHECK_THROWS_AS(lyapunov_exponent(GroupElement::identity(), Direction::Stable, 60.0), ContractViolation);
}

TEST_CASE("correlation series") {
    const auto& G = bolza();
    Observable f = poincare_observable(standard_bump(1.2), G, 1, true);
    const std::vector<double> times = grid(0.0, 3.0, 0.5);

    SUBCASE("variance at t = 0") {
        CorrelationSeries s = correlation_series(f, f, G, times, 20000, 3);
        CHECK(s.times == times);
        CHECK(s.N == 20000);
        CHECK(s.seed == 3);
        CHECK(s.values[0].real() > 0.0);
        CHECK(s.values[0].imag() == 0.0);
        for (double e : s.stderr_values) CHECK(e > 0.0);
    }
    SUBCASE("constant partner gives zero") {
        Observable one{[](const GroupElement&) { return cplx(1.0); }, false, 0, 0.0};
        CorrelationSeries s = correlation_series(f, one, G, times, 50000, 4);
        for (std::size_t k = 0; k < times.size(); ++k) CHECK(std::abs(s.values[k]) <= 3.0 * s.stderr_values[k]);
    }
    SUBCASE("contracts") {
        Observable g = poincare_observable(standard_bump(1.2), G, 1, false);
        CHECK_THROWS_AS(correlation_series(g, g, G, times, 100, 1), ContractViolation);
        CHECK_THROWS_AS(correlation_series(f, f, G, times, 1, 1), ContractViolation);
        CHECK_THROWS_AS(correlation_series(f, f, G, {1.0, 0.5}, 100, 1), ContractViolation);
        CHECK_THROWS_AS(correlation_series(f, f, G, {-1.0}, 100, 1), ContractViolation);
    }
    SUBCASE("determinism") {
        CorrelationSeries a = correlation_series(f, f, G, times, 5000, 9);
        CorrelationSeries b = correlation_series(f, f, G, times, 5000, 9);
        CHECK(a.values == b.values);
        CHECK(a.stderr_values == b.stderr_values);
    }
    SUBCASE("standard error scales like N^(-1/2)") {
        CorrelationSeries a = correlation_series(f, f, G, {0.0, 1.0}, 10000, 21);
        CorrelationSeries b = correlation_series(f, f, G, {0.0, 1.0}, 40000, 22);
        for (int k = 0; k < 2; ++k) {
            double ratio = b.stderr_values[k] / a.stderr_values[k];
            CHECK(ratio == doctest::Approx(0.5).epsilon(0.2));
        }
    }
    SUBCASE("time reversal") {
        // For a real f depending on the base point, both directions estimate the same curve.
        CorrelationSeries bw = correlation_series(f, f, G, times, 40000, 31);
        CorrelationSeries fw = correlation_series(f, f, G, times, 40000, 32, TimeDirection::Forward);
        for (std::size_t k = 0; k < times.size(); ++k)
            CHECK(std::abs(bw.values[k] - fw.values[k]) <= 4.0 * std::hypot(bw.stderr_values[k], fw.stderr_values[k]));
    }
}

TEST_CASE("fit_decay") {
    SUBCASE("pure exponential") {
        DecayFit fit = fit_decay(synthetic([](double t) { return cplx(std::exp(-0.5 * t)); }, 1e-6));
        CHECK(fit.alpha == doctest::Approx(0.5).epsilon(1e-6));
        CHECK(fit.rms < 1e-9);
        // A monotone curve has no interior maxima, so the hull is used.
        CHECK(fit.method == "upper-hull");
        CHECK(fit.fit_times.front() >= 1.0);
        CHECK(fit.fit_times.back() <= 8.0);
    }
    SUBCASE("oscillating envelope") {
        DecayFit fit = fit_decay(synthetic([](double t) { return cplx(std::exp(-0.5 * t) * std::cos(2.0 * t)); }, 1e-6));
        CHECK(std::abs(fit.alpha - 0.5) <= 0.02);
    }
    SUBCASE("below the noise floor") {
        CorrelationSeries s = synthetic([](double t) { return cplx(1e-3 * std::exp(-0.5 * t)); }, 1.0);
        CHECK_THROWS_AS(fit_decay(s), InsufficientData);
        try {
            fit_decay(s);
        } catch (const InsufficientData& e) {
            CHECK(e.noise_floor() == doctest::Approx(3.0));
        }
    }
    SUBCASE("window contracts") {
        CorrelationSeries s = synthetic([](double t) { return cplx(std::exp(-t)); }, 1e-6);
        CHECK_THROWS_AS(fit_decay(s, {3.0, 3.0}), ContractViolation);
        s.stderr_values.pop_back();
        CHECK_THROWS_AS(fit_decay(s), ContractViolation);
    }
}

TEST_CASE("mixing rate at moderate N") {
    const auto& G = bolza();
    Observable f = poincare_observable(standard_bump(1.2), G, 1, true);
    CorrelationSeries s = correlation_series(f, f, G, grid(0.0, 6.0, 0.5), 100000, 7);
    DecayFit fit = fit_decay(s, {1.0, 6.0});
    MESSAGE("alpha " << fit.alpha << " +- " << fit.alpha_stderr << " (" << fit.method << "), rms " << fit.rms);
    CHECK(fit.alpha > 0.0);
    CHECK(fit.alpha < 1.0);
}
