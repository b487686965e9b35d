#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "horolab/dynamics.hpp"
#include "horolab/errors.hpp"
#include "horolab/surface.hpp"

using namespace horolab;

namespace {
constexpr double kPi = std::numbers::pi;

const FuchsianGroup& bolza() {
    static const FuchsianGroup G = bolza_group(3);
    return G;
}
}  // namespace

TEST_CASE("Bolza generators") {
    const auto& G = bolza();
    CHECK(G.generators().size() == 4);
    CHECK(G.side_pairings().size() == 8);
    CHECK(G.relation_residual() < 1e-10);
    const double d0 = 2.0 * std::acosh(1.0 + std::sqrt(2.0));
    CHECK(displacement(G.generators()[0]) == doctest::Approx(d0).epsilon(1e-12));
    CHECK(d0 == doctest::Approx(3.0571).epsilon(1e-4));
    for (const auto& g : G.side_pairings()) {
        CHECK(std::abs(std::norm(g.a()) - std::norm(g.b()) - 1.0) < 1e-10);
        CHECK(hyperbolic_distance(0.0, mobius_apply(g, cplx(0.0))) == doctest::Approx(d0).epsilon(1e-12));
    }
}

TEST_CASE("systole of the cached ball") {
    const double d0 = 2.0 * std::acosh(1.0 + std::sqrt(2.0));
    const auto& ball = bolza().cached_ball(3);
    double shortest = INFINITY;
    for (std::size_t i = 1; i < ball.size(); ++i) shortest = std::min(shortest, displacement(ball[i]));
    CHECK(shortest >= d0 - 1e-6);
}

TEST_CASE("group ball enumeration") {
    const auto& G = bolza();
    CHECK(group_ball(G, 0).size() == 1);
    CHECK(group_ball(G, 1).size() == 9);
    std::vector<std::size_t> sizes;
    for (int L = 0; L <= 6; ++L) sizes.push_back(group_ball(G, L).size());
    // Surface-group growth series 1, 8, 56, 392, 2736, 19096, 133288 for the spheres.
    CHECK(sizes[2] == 65);
    CHECK(sizes[3] == 457);
    CHECK(sizes[6] == 155577);
    for (int L = 3; L < 6; ++L) {
        double ratio = double(sizes[L + 1]) / sizes[L];
        CHECK(ratio >= 2.0);
        CHECK(ratio <= 7.0);
    }
    auto ball = group_ball(G, 2);
    for (std::size_t i = 1; i < ball.size(); ++i) CHECK(displacement(ball[i - 1]) <= displacement(ball[i]) + 1e-12);
    CHECK_THROWS_AS(group_ball(G, 13), ContractViolation);
    CHECK(complete_radius(G, 1) > G.domain_radius());
}

TEST_CASE("serialization round trip") {
    const auto& G = bolza();
    FuchsianGroup H = FuchsianGroup::parse(G.serialize(), 1);
    CHECK(H.name() == G.name());
    for (std::size_t i = 0; i < 4; ++i) CHECK(projective_distance(H.generators()[i], G.generators()[i]) < 1e-14);
    CHECK_THROWS_AS(FuchsianGroup::parse("name bolza\ngenerator 1 0 0\n"), ContractViolation);
}

TEST_CASE("discreteness witness") {
    // A tiny translation makes the cached ball accumulate at the identity.
    GroupElement small = translation_to(0.05);
    CHECK_THROWS_AS(FuchsianGroup("bad", {small}, 2), ContractViolation);
}

TEST_CASE("reduction to the Dirichlet domain") {
    const auto& G = bolza();
    Reduction r0 = reduce_to_domain(G, GroupElement::identity());
    CHECK(projective_distance(r0.g, GroupElement::identity()) == 0.0);
    CHECK(projective_distance(r0.gamma, GroupElement::identity()) == 0.0);

    // Same representative after moving by a generator, away from the boundary.
    int compared = 0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        GroupElement g = haar_draw(G.domain_radius() - 0.3, 12, i);
        Reduction a = reduce_to_domain(G, g);
        Reduction b = reduce_to_domain(G, G.generators()[i % 4] * g);
        CHECK(projective_distance(a.g, b.g) < 1e-8);
        ++compared;
    }
    CHECK(compared == 200);

    // Flowed points terminate and end up no farther than any neighbour.
    long iterations = 0;
    const long n = 100000;
    for (long i = 0; i < n; ++i) {
        GroupElement g = flow(surface_draw(G, 3, i).g, FlowKind::Geodesic, 6.0);
        Reduction r = reduce_to_domain(G, g);
        iterations += r.iterations;
        if (i % 1000 == 0) {
            double d = distance_from_origin(base_point(r.g));
            for (const auto& s : G.side_pairings())
                CHECK(d <= distance_from_origin(base_point(s * r.g)) + 1e-9);
        }
    }
    MESSAGE("mean reduction iterations after t = 6: " << double(iterations) / n);
}

TEST_CASE("domain sampling") {
    const auto& G = bolza();
    for (const auto& g : sample_surface(G, 500, 8)) {
        Reduction r = reduce_to_domain(G, g);
        CHECK(r.iterations == 0);
    }
    DomainAreaEstimate a = domain_area(G, 200000, 1);
    CHECK(std::abs(a.area - 4 * kPi) / (4 * kPi) < 0.01);
    CHECK(a.acceptance > 0.01);
}

TEST_CASE("Poincare observables") {
    const auto& G = bolza();
    SUBCASE("zero bump") {
        Bump zero{[](const GroupElement&) { return cplx(0.0); }, 1.0, 0.0};
        Observable f = poincare_observable(zero, G, 1, false);
        CHECK(f(haar_draw(2.0, 1, 1)) == cplx(0.0));
    }
    SUBCASE("invariance within the truncation bound") {
        Bump bump = standard_bump(1.2);
        Observable f = poincare_observable(bump, G, 1, false);
        for (std::uint64_t i = 0; i < 100; ++i) {
            GroupElement g = surface_draw(G, 21, i).g;
            double bound = truncation_estimate(bump, G, 1, g) + truncation_estimate(bump, G, 1, G.generators()[0] * g);
            CHECK(std::abs(f(G.generators()[0] * g) - f(g)) <= bound + 1e-12);
        }
        Observable v = invariant_view(f, G);
        GroupElement g = surface_draw(G, 22, 0).g;
        CHECK(std::abs(v(G.generators()[2] * g) - v(g)) < 1e-12);
    }
    SUBCASE("coverage is validated") {
        CHECK_THROWS_AS(poincare_observable(standard_bump(1.2), G, 0, false), ContractViolation);
    }
    SUBCASE("exact bump integral") {
        // Integral of the bump over G against dVol dtheta, by polar quadrature.
        Bump bump = standard_bump(1.2, 0.3);
        double s = 0.0;
        const int n = 4000;
        for (int k = 0; k < n; ++k) {
            double rho = 1.2 * (k + 0.5) / n;
            double chi = std::exp(1.0 - 1.0 / (1.0 - (rho / 1.2) * (rho / 1.2)));
            s += chi * 2 * kPi * std::sinh(rho) * 1.2 / n;
        }
        CHECK(bump.integral == doctest::Approx(2 * kPi * s).epsilon(1e-6));
    }
    SUBCASE("mean subtraction at N = 1e6") {
        Observable f = poincare_observable(standard_bump(1.2), G, 1, true);
        CHECK(f.mean_zero);
        MeanEstimate m = surface_average(f.eval, G, 1000000, 5);
        CHECK(std::abs(m.mean) <= 3 * m.stderr_mean);
    }
    SUBCASE("two seeds agree statistically") {
        Observable f = poincare_observable(standard_bump(1.2), G, 1, false);
        MeanEstimate a = surface_average(f.eval, G, 50000, 101), b = surface_average(f.eval, G, 50000, 202);
        CHECK(a.mean != b.mean);
        CHECK(std::abs(a.mean - b.mean) <= 3 * std::hypot(a.stderr_mean, b.stderr_mean));
    }
}
