#include "horolab/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "horolab/errors.hpp"
#include "horolab/parallel.hpp"

namespace horolab {

namespace {
const cplx I(0.0, 1.0);
}

cplx Symbol::at(const GroupElement& g, cplx r) const {
    HoroCoord h = to_horo_coords(g);
    return eval(h.z, h.b, r);
}

RadialProfile inverse_power_profile(double k) {
    require(k >= 0.0, "inverse_power_profile: exponent must be nonnegative");
    return RadialProfile{[k](cplx r) { return std::pow(1.0 + r * r, -k); }, -2.0 * k, 1.0};
}

RadialProfile gaussian_profile(double s) {
    require(s > 0.0, "gaussian_profile: width must be positive");
    return RadialProfile{[s](cplx r) { return std::exp(-r * r / (2.0 * s * s)); },
                         -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
}

RadialProfile unit_profile() {
    return RadialProfile{[](cplx) { return cplx(1.0); }, 0.0, std::numeric_limits<double>::infinity()};
}

Symbol constant_symbol(cplx c) {
    Symbol s;
    s.eval = [c](cplx, cplx, cplx) { return c; };
    s.gamma_invariant = true;
    s.strip_halfwidth = std::numeric_limits<double>::infinity();
    return s;
}

Symbol make_product_symbol(BoundaryFunction phi, const RadialProfile& f, double order, bool gamma_invariant) {
    require(static_cast<bool>(phi) && static_cast<bool>(f.eval), "make_product_symbol: empty factor");
    require(f.order <= order, "make_product_symbol: profile decays slower than the declared order");
    auto fe = f.eval;
    return Symbol{[phi, fe](cplx z, cplx b, cplx r) { return phi(z, b) * fe(r); },
                  order,
                  gamma_invariant,
                  f.strip_halfwidth,
                  phi,
                  fe};
}

BoundaryFunction invariant_boundary_function(const Observable& f, const FuchsianGroup& G) {
    Observable v = invariant_view(f, G);
    auto e = v.eval;
    return [e](cplx z, cplx b) { return e(from_horo(z, b)); };
}

SymbolAudit symbol_audit(const Symbol& a, const std::vector<GroupElement>& points, const std::vector<double>& rs) {
    // Word letters: 'r' = r d/dr, 'H', '+', '-'.
    std::vector<std::string> words{""};
    const std::string letters = "r", frame = "H+-";
    for (char x : letters + frame) words.push_back(std::string(1, x));
    for (char x : letters + frame)
        for (char y : letters + frame) words.push_back(std::string{x, y});
    const double h = 1e-3;
    std::function<cplx(const std::string&, std::size_t, const GroupElement&, double)> D =
        [&](const std::string& w, std::size_t pos, const GroupElement& g, double r) -> cplx {
        if (pos == w.size()) return a.at(g, r);
        char c = w[pos];
        if (c == 'r') return r * (D(w, pos + 1, g, r + h) - D(w, pos + 1, g, r - h)) / (2 * h);
        Subgroup s = c == 'H' ? Subgroup::A : c == '+' ? Subgroup::N : Subgroup::Nbar;
        return (D(w, pos + 1, compose(g, subgroup_element(s, h)), r) -
                D(w, pos + 1, compose(g, subgroup_element(s, -h)), r)) /
               (2 * h);
    };
    SymbolAudit out;
    for (const auto& w : words) {
        double worst = 0.0;
        for (const auto& g : points)
            for (double r : rs) {
                double ratio = std::abs(D(w, 0, g, r)) / std::pow(1.0 + std::abs(r), a.order);
                worst = std::max(worst, ratio);
            }
        std::string name = w.empty() ? "a" : w;
        out.per_operator.emplace_back(name, worst);
        if (worst >= out.max_ratio) {
            out.max_ratio = worst;
            out.worst_operator = name;
        }
    }
    return out;
}

Symbol evolve_symbol(const Symbol& a, double t) {
    if (t == 0.0) return a;
    auto e = a.eval;
    GroupElement at = subgroup_element(Subgroup::A, t);
    Symbol out = a;
    if (a.separable()) {
        auto phi = a.phi;
        auto f = a.radial;
        out.phi = [phi, at](cplx z, cplx b) {
            HoroCoord h = to_horo_coords(compose(from_horo(z, b), at));
            return phi(h.z, h.b);
        };
        auto ephi = out.phi;
        out.eval = [ephi, f](cplx z, cplx b, cplx r) { return ephi(z, b) * f(r); };
        return out;
    }
    out.eval = [e, at](cplx z, cplx b, cplx r) {
        HoroCoord h = to_horo_coords(compose(from_horo(z, b), at));
        return e(h.z, h.b, r);
    };
    return out;
}

cplx op_apply(const Symbol& a, const HelgasonTable& F, cplx z) {
    require(a.order <= 0.0, "op_apply: symbols of positive order are not supported");
    require(F.sign == SignConvention::Conjugate, "op_apply: transform must use the conjugate exponent");
    std::vector<cplx> per_b(F.n_b);
    for (int i = 0; i < F.n_b; ++i) {
        double B = busemann(z, F.b[i]);
        double amp = std::exp(0.5 * B);
        cplx s = 0.0;
        for (int k = 0; k < F.n_r; ++k) {
            double ph = F.r[k] * B;
            s += a(z, F.b[i], F.r[k]) * F.dp[k] * cplx(std::cos(ph), std::sin(ph)) * F.at(i, k);
        }
        per_b[i] = amp * s;
    }
    return pairwise_sum(per_b) / static_cast<double>(F.n_b);
}

cplx op_apply(const Symbol& a, const DiskFunction& u, const QuadratureSpec& q, cplx z) {
    require(a.order <= 0.0, "op_apply: symbols of positive order are not supported");
    return op_apply(a, helgason_forward(u, q), z);
}

QuadratureSpec quantization_default_quad() {
    QuadratureSpec q;
    q.n_b = 256;
    q.r_panels = 12;
    q.panel_order = 8;
    q.r_max = 12.0;
    q.n_rho = 32;
    q.n_phi = 128;
    q.support_radius = 3.0;
    return q;
}

std::vector<ActionResidual> symbol_action_residuals(const std::vector<Symbol>& symbols, cplx z, cplx b, cplx r,
                                                    QuadratureSpec q) {
    require(q.support_radius > 1.0, "symbol_action_residual: support radius must exceed the cutoff width");
    require(q.n_rho >= 4, "symbol_action_residual: n_rho must be at least 4");
    for (const auto& a : symbols)
        require(std::abs(r.imag()) <= a.strip_halfwidth || r.imag() == 0.0,
                "symbol_action_residual: Im r outside the symbol's strip");
    q.center = z;
    const cplx ez = plane_wave(z, b, r);
    auto truncated = [z, b, r](double R) {
        return DiskFunction([z, b, r, R](cplx w) -> cplx {
            double c = smooth_step_down(hyperbolic_distance(w, z) - (R - 1.0));
            return c == 0.0 ? cplx(0.0) : c * plane_wave(w, b, r);
        });
    };
    const int n = q.n_rho;
    std::vector<int> levels{std::max(1, n / 4), std::max(1, n / 2), n, 2 * n};
    std::vector<std::vector<cplx>> vals(symbols.size(), std::vector<cplx>(levels.size()));
    for (std::size_t l = 0; l < levels.size(); ++l) {
        QuadratureSpec ql = q;
        ql.n_rho = levels[l];
        HelgasonTable F = helgason_forward(truncated(q.support_radius), ql);
        for (std::size_t s = 0; s < symbols.size(); ++s) vals[s][l] = op_apply(symbols[s], F, z);
    }
    QuadratureSpec qs = q;
    qs.support_radius = q.support_radius - 1.0;
    HelgasonTable Fs = helgason_forward(truncated(qs.support_radius), qs);
    std::vector<ActionResidual> out;
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        ActionResidual ar;
        const cplx v = vals[s][2];
        ar.residual = std::abs(v - symbols[s](z, b, r) * ez) / std::abs(ez);
        ar.truncation_floor = std::abs(v - op_apply(symbols[s], Fs, z)) / std::abs(ez);
        ar.radial_levels = {levels[0], levels[1], levels[2]};
        for (int l = 0; l < 3; ++l) ar.level_errors.push_back(std::abs(vals[s][l] - vals[s][3]) / std::abs(ez));
        double order = std::numeric_limits<double>::infinity();
        for (int l = 0; l + 1 < 3; ++l) {
            double e0 = ar.level_errors[l], e1 = ar.level_errors[l + 1];
            // Both levels already at rounding level: no information, skip.
            if (e0 < 1e-13) continue;
            order = std::min(order, std::log2(e0 / std::max(e1, 1e-16)));
        }
        ar.observed_order = order;
        out.push_back(ar);
    }
    return out;
}

ActionResidual symbol_action_residual(const Symbol& a, cplx z, cplx b, cplx r, const QuadratureSpec& q) {
    return symbol_action_residuals({a}, z, b, r, q).front();
}

PeriodizedValue periodize_kernel(const KernelFunction& K, const std::vector<GroupElement>& ball,
                                 double complete_radius, const KernelDecay& decay, cplx z, cplx w,
                                 double tolerance) {
    require(!ball.empty(), "periodize_kernel: empty ball");
    std::vector<cplx> terms;
    terms.reserve(ball.size());
    double sep = complete_radius;
    for (const auto& g : ball) {
        terms.push_back(K(z, mobius_apply(g, w)));
        double d = displacement(g);
        if (d > 1e-9) sep = std::min(sep, d);
    }
    PeriodizedValue out{pairwise_sum(terms), 0.0, false};
    if (std::isfinite(complete_radius)) {
        auto bound = [&](double d) {
            return decay.kind == KernelDecay::Kind::Exponential ? decay.constant * std::exp(-decay.rate * d)
                                                                : decay.constant * std::exp(-decay.rate * d * d);
        };
        // Orbit points are sep-separated, so at most (cosh(rho+sep/2)-1)/(cosh(sep/2)-1)
        // of them lie within rho of z.
        auto count = [&](double rho) { return (std::cosh(rho + sep / 2) - 1.0) / (std::cosh(sep / 2) - 1.0); };
        double rho0 = std::max(0.0, complete_radius - distance_from_origin(z) - distance_from_origin(w));
        double tail = 0.0;
        for (int n = 0; n < 4000; ++n) {
            double term = count(rho0 + n + 1) * bound(rho0 + n);
            if (!std::isfinite(term)) {
                tail = INFINITY;
                break;
            }
            tail += term;
            if (term < 1e-30 * std::max(tail, 1e-300) || (n > 50 && term < 1e-300)) break;
            if (n == 3999) tail = INFINITY;
        }
        out.tail_bound = tail;
    }
    out.warning = out.tail_bound > tolerance;
    return out;
}

double commutation_residual(const Symbol& a, const GroupElement& gamma, const DiskFunction& u,
                            const QuadratureSpec& q, cplx z) {
    QuadratureSpec moved = q;
    moved.center = mobius_apply(invert(gamma), q.center);
    DiskFunction ug = [&u, gamma](cplx w) { return u(mobius_apply(gamma, w)); };
    HelgasonTable F0 = helgason_forward(u, q);
    HelgasonTable F1 = helgason_forward(ug, moved);
    double sup = 0.0;
    DiskGrid grid = make_disk_grid(q);
    for (cplx w : grid.z) sup = std::max(sup, std::abs(u(w)));
    require(sup > 0.0, "commutation_residual: u vanishes on the quadrature grid");
    cplx lhs = op_apply(a, F1, z);
    cplx rhs = op_apply(a, F0, mobius_apply(gamma, z));
    return std::abs(lhs - rhs) / sup;
}

}  // namespace horolab
