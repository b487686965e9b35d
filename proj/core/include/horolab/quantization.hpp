#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "horolab/group.hpp"
#include "horolab/harmonic.hpp"
#include "horolab/surface.hpp"

namespace horolab {

using SymbolFunction = std::function<cplx(cplx z, cplx b, cplx r)>;
using BoundaryFunction = std::function<cplx(cplx z, cplx b)>;

struct Symbol {
    SymbolFunction eval;
    double order = 0.0;
    bool gamma_invariant = false;
    double strip_halfwidth = 0.0;
    // Filled for a = phi(z,b) f(r) so that callers can share phi across several r.
    BoundaryFunction phi;
    std::function<cplx(cplx)> radial;

    bool separable() const { return phi && radial; }
    cplx operator()(cplx z, cplx b, cplx r) const { return eval(z, b, r); }
    // Value on G: the (z,b) chart of g.
    cplx at(const GroupElement& g, cplx r) const;
};

// Spectral factor f(r) with its decay order and analyticity strip |Im r| < w.
struct RadialProfile {
    std::function<cplx(cplx)> eval;
    double order = 0.0;
    double strip_halfwidth = 0.0;
};

// (1 + r^2)^{-k}: order -2k, poles at r = +-i so the strip half-width is 1.
RadialProfile inverse_power_profile(double k);
// exp(-r^2 / (2 s^2)): faster than any power, entire.
RadialProfile gaussian_profile(double s);
RadialProfile unit_profile();

Symbol constant_symbol(cplx c);

// a(z,b,r) = phi(z,b) f(r). f.order must not exceed `order`.
Symbol make_product_symbol(BoundaryFunction phi, const RadialProfile& f, double order,
                           bool gamma_invariant = false);

// phi(z,b) = f(g) for g with chart (z,b); f is evaluated after reduction to
// the domain, which makes phi exactly Gamma-invariant on the disk.
BoundaryFunction invariant_boundary_function(const Observable& f, const FuchsianGroup& G);

// Right-invariant derivatives H, X+, X- by central differences of g -> a(g exp(sX)),
// together with (r d/dr). Every word with s + |alpha| <= 2 is sampled and
// |D a| / (1 + |r|)^m is recorded.
struct SymbolAudit {
    double max_ratio = 0.0;
    std::string worst_operator;
    std::vector<std::pair<std::string, double>> per_operator;  // max ratio per derivative word
};
SymbolAudit symbol_audit(const Symbol& a, const std::vector<GroupElement>& points, const std::vector<double>& rs);

// a(g a_t, r) through the (z,b) chart.
Symbol evolve_symbol(const Symbol& a, double t);

// (1/2pi) int a(z,b,r) e^{(1/2+ir)<z,b>} e^{(1/2-ir)<w,b>} u(w) dw db dp(r).
cplx op_apply(const Symbol& a, const DiskFunction& u, const QuadratureSpec& q, cplx z);
// Same with the transform of u precomputed.
cplx op_apply(const Symbol& a, const HelgasonTable& Fu, cplx z);

// Defaults used by the symbol-action and commutation checks.
QuadratureSpec quantization_default_quad();

struct ActionResidual {
    double residual = 0.0;          // |Op(a) e(z) - a e(z)| / |e(z)| at the given quadrature
    double truncation_floor = 0.0;  // change of Op(a) e(z) when the cutoff shrinks by one unit
    std::vector<int> radial_levels;        // n_rho used for the refinement study
    std::vector<double> level_errors;      // |value(level) - value(reference)| / |e(z)|
    double observed_order = 0.0;           // min over consecutive levels of log2(e_k / e_{k+1})
};

// Plane wave e_{r,b} cut off smoothly between support_radius - 1 and
// support_radius around z. The radial grid is refined through n_rho/4,
// n_rho/2, n_rho against a 2 n_rho reference.
std::vector<ActionResidual> symbol_action_residuals(const std::vector<Symbol>& symbols, cplx z, cplx b, cplx r,
                                                    QuadratureSpec q);
ActionResidual symbol_action_residual(const Symbol& a, cplx z, cplx b, cplx r, const QuadratureSpec& q);

// Declared decay |K(z,w)| <= constant * exp(-rate d) or constant * exp(-rate d^2).
struct KernelDecay {
    enum class Kind { Exponential, Gaussian } kind = Kind::Gaussian;
    double constant = 1.0;
    double rate = 1.0;
};

struct PeriodizedValue {
    cplx value;
    double tail_bound = 0.0;
    bool warning = false;
};

using KernelFunction = std::function<cplx(cplx z, cplx w)>;

// Sum over gamma in ball of K(z, gamma w). complete_radius: every element
// with displacement below it is in the ball. The tail is bounded by packing
// orbit points at the ball's minimal separation.
PeriodizedValue periodize_kernel(const KernelFunction& K, const std::vector<GroupElement>& ball,
                                 double complete_radius, const KernelDecay& decay, cplx z, cplx w,
                                 double tolerance = 1e-8);

// |Op(a)(u o gamma)(z) - (Op(a)u)(gamma z)| / sup|u|. The quadrature ball of
// q (centred at q.center) must contain the support of u; the transform of
// u o gamma is taken on the same grid moved to gamma^{-1}(q.center).
double commutation_residual(const Symbol& a, const GroupElement& gamma, const DiskFunction& u,
                            const QuadratureSpec& q, cplx z);

}  // namespace horolab
