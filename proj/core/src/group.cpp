#include "horolab/group.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "horolab/errors.hpp"
#include "horolab/random.hpp"

namespace horolab {

namespace {

const cplx I(0.0, 1.0);

double max_abs4(cplx a, cplx b, cplx c, cplx d) {
    return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
}

// Forces the SU(1,1) shape and |a|^2 - |b|^2 = 1.
void symmetrize_disk(cplx& a, cplx& b, cplx& c, cplx& d) {
    cplx alpha = 0.5 * (a + std::conj(d));
    cplx beta = 0.5 * (b + std::conj(c));
    double q = std::norm(alpha) - std::norm(beta);
    if (!(q > 0.0)) throw NumericalInstability("element left SU(1,1)");
    double s = 1.0 / std::sqrt(q);
    alpha *= s;
    beta *= s;
    a = alpha;
    b = beta;
    c = std::conj(beta);
    d = std::conj(alpha);
}

}  // namespace

GroupElement::GroupElement(cplx a, cplx b, cplx c, cplx d, Model model)
    : a_(a), b_(b), c_(c), d_(d), model_(model) {
    cplx det = a_ * d_ - b_ * c_;
    if (std::abs(det) < 1e-300 || !std::isfinite(std::abs(det)))
        throw ContractViolation("GroupElement: singular matrix");
    cplx s = std::sqrt(det);
    a_ /= s;
    b_ /= s;
    c_ /= s;
    d_ /= s;
    if (model_ == Model::Disk) symmetrize_disk(a_, b_, c_, d_);
}

GroupElement GroupElement::identity(Model model) { return GroupElement(1.0, 0.0, 0.0, 1.0, model); }

GroupElement compose(const GroupElement& g, const GroupElement& h) {
    require(g.model() == h.model(), "compose: model mismatch");
    return GroupElement(g.a() * h.a() + g.b() * h.c(), g.a() * h.b() + g.b() * h.d(),
                        g.c() * h.a() + g.d() * h.c(), g.c() * h.b() + g.d() * h.d(), g.model());
}

GroupElement invert(const GroupElement& g) { return GroupElement(g.d(), -g.b(), -g.c(), g.a(), g.model()); }

double projective_distance(const GroupElement& g, const GroupElement& h) {
    require(g.model() == h.model(), "projective_distance: model mismatch");
    double plus = max_abs4(g.a() - h.a(), g.b() - h.b(), g.c() - h.c(), g.d() - h.d());
    double minus = max_abs4(g.a() + h.a(), g.b() + h.b(), g.c() + h.c(), g.d() + h.d());
    return std::min(plus, minus);
}

bool projective_equal(const GroupElement& g, const GroupElement& h, double tol) {
    return projective_distance(g, h) <= tol;
}

GroupElement cayley_matrix() { return GroupElement(1.0, -I, 1.0, I, Model::UpperHalfPlane); }

namespace {

// C g C^{-1} with C = [[1,-i],[1,i]] (scale cancels).
void conj_cayley(cplx a, cplx b, cplx c, cplx d, cplx out[4]) {
    // C g
    cplx p = a - I * c, q = b - I * d, r = a + I * c, s = b + I * d;
    // times C^{-1} = [[i, i], [-1, 1]] / (2i)
    const cplx k = 1.0 / (2.0 * I);
    out[0] = (p * I - q) * k;
    out[1] = (p * I + q) * k;
    out[2] = (r * I - s) * k;
    out[3] = (r * I + s) * k;
}

// C^{-1} g C.
void unconj_cayley(cplx a, cplx b, cplx c, cplx d, cplx out[4]) {
    const cplx k = 1.0 / (2.0 * I);
    // C^{-1} g = [[i, i], [-1, 1]] g / (2i)
    cplx p = (I * a + I * c) * k, q = (I * b + I * d) * k;
    cplx r = (-a + c) * k, s = (-b + d) * k;
    // times C = [[1,-i],[1,i]]
    out[0] = p + q;
    out[1] = -I * p + I * q;
    out[2] = r + s;
    out[3] = -I * r + I * s;
}

}  // namespace

GroupElement to_disk(const GroupElement& g) {
    if (g.model() == Model::Disk) return g;
    cplx m[4];
    conj_cayley(g.a(), g.b(), g.c(), g.d(), m);
    return GroupElement(m[0], m[1], m[2], m[3], Model::Disk);
}

GroupElement to_half_plane(const GroupElement& g) {
    if (g.model() == Model::UpperHalfPlane) return g;
    cplx m[4];
    unconj_cayley(g.a(), g.b(), g.c(), g.d(), m);
    // Entries are real up to rounding.
    return GroupElement(m[0].real(), m[1].real(), m[2].real(), m[3].real(), Model::UpperHalfPlane);
}

GroupElement subgroup_element(Subgroup kind, double t, Model model) {
    if (model == Model::Disk) {
        // Closed forms of the Cayley conjugates.
        switch (kind) {
            case Subgroup::A:
                return GroupElement(std::cosh(t / 2), std::sinh(t / 2), std::sinh(t / 2), std::cosh(t / 2),
                                    Model::Disk);
            case Subgroup::N:
                return GroupElement(1.0 + I * t / 2.0, -I * t / 2.0, I * t / 2.0, 1.0 - I * t / 2.0, Model::Disk);
            case Subgroup::Nbar:
                return GroupElement(1.0 - I * t / 2.0, -I * t / 2.0, I * t / 2.0, 1.0 + I * t / 2.0, Model::Disk);
            case Subgroup::K:
                return disk_rotation(t);
        }
    }
    switch (kind) {
        case Subgroup::A:
            return GroupElement(std::exp(t / 2), 0.0, 0.0, std::exp(-t / 2), model);
        case Subgroup::N:
            return GroupElement(1.0, t, 0.0, 1.0, model);
        case Subgroup::Nbar:
            return GroupElement(1.0, 0.0, t, 1.0, model);
        case Subgroup::K:
            return GroupElement(std::cos(t / 2), std::sin(t / 2), -std::sin(t / 2), std::cos(t / 2), model);
    }
    throw ContractViolation("subgroup_element: unknown kind");
}

DiskPoint::DiskPoint(cplx z) : value(z) {
    require(std::abs(z) < 1.0, "DiskPoint: |z| must be < 1");
}

BoundaryPoint::BoundaryPoint(cplx b) : value(b) {
    require(std::abs(std::abs(b) - 1.0) <= 1e-12, "BoundaryPoint: |b| must be 1");
}

BoundaryPoint BoundaryPoint::from_angle(double phi) { return BoundaryPoint(std::polar(1.0, phi)); }

cplx mobius_apply(const GroupElement& g, cplx p) {
    if (std::isinf(p.real()) || std::isinf(p.imag())) {
        if (std::abs(g.c()) < 1e-300) return cplx(INFINITY, 0.0);
        return g.a() / g.c();
    }
    cplx den = g.c() * p + g.d();
    // Only the half-plane model can hit a pole (|c| < |d| on SU(1,1)).
    if (std::abs(den) < 1e-300) return cplx(INFINITY, 0.0);
    return (g.a() * p + g.b()) / den;
}

DiskPoint mobius_apply(const GroupElement& g, const DiskPoint& p) {
    require(g.model() == Model::Disk, "mobius_apply(DiskPoint): disk model required");
    return DiskPoint(mobius_apply(g, p.value));
}

BoundaryPoint mobius_apply(const GroupElement& g, const BoundaryPoint& p) {
    require(g.model() == Model::Disk, "mobius_apply(BoundaryPoint): disk model required");
    cplx w = mobius_apply(g, p.value);
    return BoundaryPoint(w / std::abs(w));
}

double hyperbolic_distance(cplx z, cplx w) {
    double num = std::abs(z - w);
    double den = std::abs(1.0 - std::conj(z) * w);
    double q = num / den;
    if (q >= 1.0) q = std::nextafter(1.0, 0.0);
    return 2.0 * std::atanh(q);
}

double distance_from_origin(cplx z) {
    double q = std::abs(z);
    if (q >= 1.0) q = std::nextafter(1.0, 0.0);
    return 2.0 * std::atanh(q);
}

GroupElement translation_to(cplx z) {
    require(std::abs(z) < 1.0, "translation_to: |z| must be < 1");
    return GroupElement(1.0, z, std::conj(z), 1.0, Model::Disk);
}

GroupElement disk_rotation(double phi) {
    return GroupElement(std::polar(1.0, phi / 2), 0.0, 0.0, std::polar(1.0, -phi / 2), Model::Disk);
}

cplx base_point(const GroupElement& g) {
    require(g.model() == Model::Disk, "base_point: disk model required");
    return g.b() / g.d();
}

cplx forward_endpoint(const GroupElement& g) {
    require(g.model() == Model::Disk, "forward_endpoint: disk model required");
    cplx w = (g.a() + g.b()) / (g.c() + g.d());
    return w / std::abs(w);
}

namespace {

double wrap_angle(double x) {
    const double tau = 2.0 * std::numbers::pi;
    x = std::fmod(x, tau);
    if (x < 0) x += tau;
    if (x >= tau) x -= tau;
    return x;
}

// Angle at 0 of the pre-image under T_z of the boundary point 1.
double toward_one(cplx z) { return std::arg((1.0 - z) / (1.0 - std::conj(z))); }

}  // namespace

Frame to_frame(const GroupElement& g) {
    cplx z = base_point(g);
    // g = T_z R_phi, so (T_z^{-1} g)_{11} = e^{i phi/2} up to sign.
    double s = 1.0 / std::sqrt(1.0 - std::norm(z));
    cplx a11 = s * (g.a() - z * g.c());
    double phi = 2.0 * std::arg(a11);
    return Frame{z, wrap_angle(phi - toward_one(z))};
}

GroupElement from_frame(const Frame& f) {
    return compose(translation_to(f.z), disk_rotation(f.theta + toward_one(f.z)));
}

HoroCoord to_horo_coords(const GroupElement& g) { return HoroCoord{base_point(g), forward_endpoint(g)}; }

GroupElement from_horo(cplx z, cplx b) {
    return compose(translation_to(z), disk_rotation(std::arg((b - z) / (1.0 - std::conj(z) * b))));
}

GroupElement from_horo(const HoroCoord& h) { return from_horo(h.z, h.b); }

GroupElement haar_draw(double ball_radius, std::uint64_t seed, std::uint64_t index) {
    require(ball_radius > 0.0, "haar_draw: radius must be positive");
    const double rm = std::tanh(ball_radius / 2);
    const double floor = (1.0 - rm * rm) * (1.0 - rm * rm);
    for (std::uint64_t attempt = 0;; ++attempt) {
        std::uint64_t slot = 4 * attempt;
        double u = counter_uniform(seed, index, slot);
        double v = counter_uniform(seed, index, slot + 1);
        double acc = counter_uniform(seed, index, slot + 2);
        cplx z = std::polar(rm * std::sqrt(u), 2.0 * std::numbers::pi * v);
        double q = 1.0 - std::norm(z);
        if (acc * q * q < floor) {
            double theta = 2.0 * std::numbers::pi * counter_uniform(seed, index, slot + 3);
            return from_frame(Frame{z, theta});
        }
        if (attempt > 100000) throw NumericalInstability("haar_draw: rejection loop did not terminate");
    }
}

std::vector<GroupElement> haar_sample(double ball_radius, long count, std::uint64_t seed) {
    require(count > 0, "haar_sample: count must be positive");
    require(ball_radius > 0.0, "haar_sample: radius must be positive");
    std::vector<GroupElement> out;
    out.reserve(count);
    for (long i = 0; i < count; ++i) out.push_back(haar_draw(ball_radius, seed, static_cast<std::uint64_t>(i)));
    return out;
}

AreaEstimate haar_ball_area(double ball_radius, long proposals, std::uint64_t seed) {
    require(ball_radius > 0.0 && proposals > 0, "haar_ball_area: positive radius and count required");
    const double rm = std::tanh(ball_radius / 2);
    const double floor = (1.0 - rm * rm) * (1.0 - rm * rm);
    long acc = 0;
    for (long i = 0; i < proposals; ++i) {
        double u = counter_uniform(seed, i, 0);
        double a = counter_uniform(seed, i, 2);
        double q = 1.0 - rm * rm * u;
        if (a * q * q < floor) ++acc;
    }
    double p = static_cast<double>(acc) / proposals;
    double box = 4.0 * std::numbers::pi * rm * rm / floor;
    return AreaEstimate{p * box, box * std::sqrt(p * (1.0 - p) / proposals), acc, proposals};
}

}  // namespace horolab

namespace horolab {

namespace {

using LD = long double;
struct M2 {
    LD a, b, c, d;
};

M2 mul(const M2& x, const M2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

// exp(sX) for X in {H, X+, X-}: exact one-parameter subgroups.
M2 expo(char X, LD s) {
    switch (X) {
        case 'H': return {std::exp(s / 2), 0, 0, std::exp(-s / 2)};
        case '+': return {1, s, 0, 1};
        default: return {1, 0, s, 1};
    }
}

// Lie logarithm of an SL2 element near the identity.
M2 lie_log(const M2& m) {
    LD half = (m.a + m.d) / 2;
    LD f = 1;
    if (half > 1) {
        LD s = std::acosh(half);
        f = s / std::sinh(s);
    } else if (half < 1) {
        LD s = std::acos(half);
        f = s / std::sin(s);
    }
    return {f * (m.a - half), f * m.b, f * m.c, f * (m.d - half)};
}

double bracket_residual(char X, char Y, const M2& expected, LD h) {
    auto comm = [&](LD s) { return mul(mul(expo(X, s), expo(Y, s)), mul(expo(X, -s), expo(Y, -s))); };
    M2 p = lie_log(comm(h)), q = lie_log(comm(-h));
    LD k = 1 / (2 * h * h);
    M2 est{(p.a + q.a) * k, (p.b + q.b) * k, (p.c + q.c) * k, (p.d + q.d) * k};
    LD r = std::max({std::fabs(est.a - expected.a), std::fabs(est.b - expected.b), std::fabs(est.c - expected.c),
                     std::fabs(est.d - expected.d)});
    return static_cast<double>(r);
}

}  // namespace

double BracketResiduals::max() const { return std::max({H_Xp, H_Xm, Xp_Xm}); }

BracketResiduals lie_bracket_residuals(double h) {
    require(h > 0.0, "lie_bracket_residuals: step must be positive");
    BracketResiduals r;
    r.H_Xp = bracket_residual('H', '+', M2{0, 1, 0, 0}, h);
    r.H_Xm = bracket_residual('H', '-', M2{0, 0, -1, 0}, h);
    r.Xp_Xm = bracket_residual('+', '-', M2{1, 0, 0, -1}, h);
    return r;
}

}  // namespace horolab
