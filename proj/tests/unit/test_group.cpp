#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "horolab/errors.hpp"
#include "horolab/group.hpp"
#include "horolab/harmonic.hpp"
#include "horolab/random.hpp"

using namespace horolab;

namespace {
constexpr double kPi = std::numbers::pi;

GroupElement random_element(std::uint64_t i) { return haar_draw(2.5, 99, i); }

double angle_diff(double a, double b) {
    double d = std::fmod(a - b, 2 * kPi);
    if (d > kPi) d -= 2 * kPi;
    if (d < -kPi) d += 2 * kPi;
    return std::abs(d);
}
}  // namespace

TEST_CASE("compose with identity and inverse") {
    for (std::uint64_t i = 0; i < 20; ++i) {
        GroupElement g = random_element(i);
        CHECK(projective_distance(g * GroupElement::identity(), g) < 1e-14);
        CHECK(projective_distance(g * invert(g), GroupElement::identity()) < 1e-12);
        CHECK(std::abs(g.det() - 1.0) < 1e-12);
    }
}

TEST_CASE("compose is associative and keeps the SU(1,1) shape") {
    GroupElement a = random_element(1), b = random_element(2), c = random_element(3);
    CHECK(projective_distance((a * b) * c, a * (b * c)) < 1e-12);
    // Long products of short steps stay bounded but accumulate rounding.
    GroupElement g = a, step = haar_draw(0.05, 3, 0);
    for (int k = 0; k < 2000; ++k) g = g * (k % 2 ? step : invert(haar_draw(0.05, 3, k)));
    CHECK(std::abs(g.det() - 1.0) < 1e-12);
    CHECK(std::abs(std::norm(g.a()) - std::norm(g.b()) - 1.0) < 1e-10 * std::norm(g.a()));
    CHECK(std::abs(g.c() - std::conj(g.b())) < 1e-12 * std::abs(g.a()));
}

TEST_CASE("compose rejects mixed models") {
    GroupElement d = GroupElement::identity(Model::Disk);
    GroupElement h = GroupElement::identity(Model::UpperHalfPlane);
    CHECK_THROWS_AS(compose(d, h), ContractViolation);
}

TEST_CASE("n_1 a_{ln 2} = a_{ln 2} n_{1/2}") {
    const double t = std::log(2.0);
    for (Model m : {Model::UpperHalfPlane, Model::Disk}) {
        GroupElement lhs = subgroup_element(Subgroup::N, 1.0, m) * subgroup_element(Subgroup::A, t, m);
        GroupElement rhs = subgroup_element(Subgroup::A, t, m) * subgroup_element(Subgroup::N, 0.5, m);
        CHECK(projective_distance(lhs, rhs) < 1e-14);
    }
}

TEST_CASE("conjugation identities over random draws") {
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        double u = 4 * counter_uniform(5, i, 0) - 2, t = 4 * counter_uniform(5, i, 1) - 2;
        GroupElement at = subgroup_element(Subgroup::A, t);
        worst = std::max(worst, projective_distance(subgroup_element(Subgroup::N, u) * at,
                                                    at * subgroup_element(Subgroup::N, u * std::exp(-t))));
        worst = std::max(worst, projective_distance(subgroup_element(Subgroup::Nbar, u) * at,
                                                    at * subgroup_element(Subgroup::Nbar, u * std::exp(t))));
    }
    CHECK(worst < 1e-13);
}

TEST_CASE("subgroup elements") {
    CHECK(projective_equal(subgroup_element(Subgroup::A, 0.0), GroupElement::identity()));
    CHECK(projective_equal(subgroup_element(Subgroup::K, 2 * kPi), GroupElement::identity(), 1e-14));
    GroupElement a = subgroup_element(Subgroup::A, std::log(4.0), Model::UpperHalfPlane);
    CHECK(std::abs(a.a() - 2.0) < 1e-15);
    CHECK(std::abs(a.d() - 0.5) < 1e-15);
    for (Subgroup s : {Subgroup::A, Subgroup::N, Subgroup::Nbar, Subgroup::K}) {
        GroupElement lhs = subgroup_element(s, 0.7) * subgroup_element(s, -0.25);
        CHECK(projective_distance(lhs, subgroup_element(s, 0.45)) < 1e-12);
        // Disk closed forms agree with the Cayley image of the half-plane matrices.
        CHECK(projective_distance(to_disk(subgroup_element(s, 0.45, Model::UpperHalfPlane)),
                                  subgroup_element(s, 0.45)) < 1e-14);
    }
}

TEST_CASE("Cayley transform and model round trip") {
    CHECK(std::abs(mobius_apply(cayley_matrix(), cplx(0, 1))) < 1e-15);
    GroupElement g = random_element(7);
    CHECK(projective_distance(to_disk(to_half_plane(g)), g) < 1e-12);
    // Infinity in the half-plane goes to 1 on the circle.
    CHECK(std::abs(mobius_apply(cayley_matrix(), cplx(INFINITY, 0)) - 1.0) < 1e-15);
}

TEST_CASE("mobius action") {
    cplx z(0.3, -0.2);
    CHECK(std::abs(mobius_apply(GroupElement::identity(), z) - z) < 1e-16);
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        GroupElement g = random_element(i);
        cplx w = std::polar(0.6, 0.1 * i), v = std::polar(0.4, -0.3 * i);
        worst = std::max(worst,
                         std::abs(hyperbolic_distance(mobius_apply(g, w), mobius_apply(g, v)) - hyperbolic_distance(w, v)));
        // g and -g act identically.
        GroupElement m(-g.a(), -g.b(), -g.c(), -g.d(), Model::Disk);
        CHECK(std::abs(mobius_apply(m, w) - mobius_apply(g, w)) < 1e-14);
        BoundaryPoint b = mobius_apply(g, BoundaryPoint::from_angle(0.3 * i));
        CHECK(std::abs(std::abs(b.value) - 1.0) < 1e-12);
        CHECK(std::abs(mobius_apply(g, DiskPoint(w)).value) < 1.0);
    }
    CHECK(worst < 1e-10);
    // Half-plane pole goes to infinity.
    GroupElement h(0.0, 1.0, -1.0, 0.0, Model::UpperHalfPlane);
    cplx p = mobius_apply(h, cplx(0.0, 0.0));
    CHECK(std::isinf(p.real()));
}

TEST_CASE("point types validate") {
    CHECK_THROWS_AS(DiskPoint(cplx(1.0, 0.0)), ContractViolation);
    CHECK_THROWS_AS(BoundaryPoint(cplx(0.5, 0.0)), ContractViolation);
    CHECK_NOTHROW(BoundaryPoint(std::polar(1.0, 0.4)));
}

TEST_CASE("hyperbolic distance") {
    CHECK(hyperbolic_distance(0.0, 0.0) == 0.0);
    CHECK(std::abs(hyperbolic_distance(0.0, 0.5) - std::log(3.0)) < 1e-14);
    // Integrate ds = 2|dz|/(1-|z|^2) along the radius.
    double s = 0.0;
    const int n = 20000;
    for (int k = 0; k < n; ++k) {
        double x = 0.5 * (k + 0.5) / n;
        s += 2.0 / (1 - x * x) * 0.5 / n;
    }
    CHECK(std::abs(s - hyperbolic_distance(0.0, 0.5)) < 1e-8);
    cplx a(0.1, 0.2), b(-0.4, 0.3), c(0.5, -0.5);
    CHECK(hyperbolic_distance(a, b) == doctest::Approx(hyperbolic_distance(b, a)).epsilon(1e-14));
    CHECK(hyperbolic_distance(a, c) <= hyperbolic_distance(a, b) + hyperbolic_distance(b, c));
}

TEST_CASE("frame and horocycle charts") {
    HoroCoord id = to_horo_coords(GroupElement::identity());
    CHECK(std::abs(id.z) < 1e-16);
    CHECK(std::abs(id.b - 1.0) < 1e-16);
    for (std::uint64_t i = 0; i < 50; ++i) {
        GroupElement g = random_element(i);
        Frame f = to_frame(g);
        CHECK(projective_distance(from_frame(f), g) < 1e-10);
        HoroCoord h = to_horo_coords(g);
        CHECK(projective_distance(from_horo(h), g) < 1e-10);
        CHECK(std::abs(h.b - mobius_apply(g, cplx(1.0))) < 1e-10);
        CHECK(std::abs(h.z - f.z) < 1e-12);
        // Right action of k_theta rotates the frame angle.
        Frame fk = to_frame(g * disk_rotation(0.9));
        CHECK(std::abs(fk.z - f.z) < 1e-12);
        CHECK(angle_diff(fk.theta, f.theta + 0.9) < 1e-10);
        Frame fk2 = to_frame(g * subgroup_element(Subgroup::K, 0.9));
        CHECK(angle_diff(fk2.theta, f.theta + 0.9) < 1e-10);
        // Right action of n_u keeps b and the Busemann value.
        HoroCoord hn = to_horo_coords(g * subgroup_element(Subgroup::N, 0.8));
        CHECK(std::abs(hn.b - h.b) < 1e-10);
        CHECK(std::abs(busemann(hn.z, hn.b) - busemann(h.z, h.b)) < 1e-10);
    }
}

TEST_CASE("haar sampling") {
    SUBCASE("theta mean") {
        const long n = 100000;
        double s = 0.0, s2 = 0.0;
        for (const auto& g : haar_sample(1.0, n, 4)) {
            double th = to_frame(g).theta;
            s += th;
            s2 += th * th;
        }
        double mean = s / n, sd = std::sqrt(s2 / n - mean * mean) / std::sqrt(double(n));
        CHECK(std::abs(mean - kPi) < 3 * sd);
    }
    SUBCASE("ball area") {
        AreaEstimate a = haar_ball_area(1.0, 200000, 2);
        double exact = 2 * kPi * (std::cosh(1.0) - 1.0);
        CHECK(std::abs(a.area - exact) / exact < 0.01);
    }
    SUBCASE("determinism") {
        auto s1 = haar_sample(2.0, 100, 17), s2 = haar_sample(2.0, 100, 17);
        for (std::size_t i = 0; i < s1.size(); ++i) CHECK(projective_distance(s1[i], s2[i]) == 0.0);
        CHECK(projective_distance(haar_sample(2.0, 5, 18)[0], s1[0]) > 0.0);
    }
    CHECK_THROWS_AS(haar_sample(0.0, 10, 1), ContractViolation);
    CHECK_THROWS_AS(haar_sample(1.0, 0, 1), ContractViolation);
}

TEST_CASE("Lie brackets converge at second order") {
    BracketResiduals r3 = lie_bracket_residuals(1e-3), r4 = lie_bracket_residuals(1e-4);
    CHECK(std::log10(r3.H_Xp / r4.H_Xp) >= 1.9);
    CHECK(std::log10(r3.H_Xm / r4.H_Xm) >= 1.9);
    CHECK(std::log10(r3.Xp_Xm / r4.Xp_Xm) >= 1.9);
}
