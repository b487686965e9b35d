#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "horolab/group.hpp"

namespace horolab {

// log((1-|z|^2)/|z-b|^2): signed distance from 0 to the horocycle through z
// tangent at b. Throws PrecisionError for |z| >= 1 - 1e-12.
double busemann(cplx z, cplx b);

// (1-|z|^2)/|z-b|^2 = exp(busemann).
double poisson_kernel(cplx z, cplx b);

// exp((1/2 + i r) <z,b>), r complex.
cplx plane_wave(cplx z, cplx b, cplx r);

using DiskFunction = std::function<cplx(cplx)>;

// Positive Laplace-Beltrami operator -((1-|z|^2)^2/4)(d_xx + d_yy) f by the
// five-point stencil at steps h and h/2 combined by Richardson extrapolation.
cplx laplace_apply(const DiskFunction& f, cplx z, double h);

// Grids shared by the transform and the quantization code.
//   disk: geodesic-polar grid about `center`, Gauss-Legendre in the radius
//         (n_rho nodes on [0, support_radius]) and trapezoid in the angle;
//   boundary: n_b equispaced points (half-step offset), n_b a power of two;
//   spectral: r_panels Gauss-Legendre panels of panel_order nodes on [0, r_max].
struct QuadratureSpec {
    int n_b = 64;
    int r_panels = 32;
    int panel_order = 8;
    double r_max = 12.0;
    int n_rho = 64;
    int n_phi = 128;
    double support_radius = 4.0;
    cplx center = 0.0;

    int n_r() const { return r_panels * panel_order; }
    void validate() const;
};

struct DiskGrid {
    std::vector<cplx> z;
    std::vector<double> weight;  // dVol weights, summing to the ball area
};

DiskGrid make_disk_grid(const QuadratureSpec& q);

// Forward exponent: Conjugate uses (1/2 - i r), Literal uses (1/2 + i r).
enum class SignConvention { Conjugate, Literal };

const char* to_string(SignConvention s);

struct HelgasonTable {
    int n_b = 0;
    int n_r = 0;
    double r_max = 0.0;
    int panel_order = 0;
    SignConvention sign = SignConvention::Conjugate;
    std::vector<cplx> b;
    std::vector<double> r;
    std::vector<double> dp;       // Gauss weight times (r/2pi) tanh(pi r)
    std::vector<cplx> values;     // F(b_i, r_k) at i * n_r + k

    cplx& at(int i, int k) { return values[static_cast<std::size_t>(i) * n_r + k]; }
    cplx at(int i, int k) const { return values[static_cast<std::size_t>(i) * n_r + k]; }

    void write(std::ostream& os) const;
    static HelgasonTable read(std::istream& is);
};

// Empty table (all zero) laid out on the grids of q.
HelgasonTable make_table(const QuadratureSpec& q, SignConvention sign = SignConvention::Conjugate);

// F(b,r) = integral of f(z) exp((1/2 - i r)<z,b>) dVol(z). f must vanish
// outside the support ball; a probe ring just outside is checked.
HelgasonTable helgason_forward(const DiskFunction& f, const QuadratureSpec& q,
                               SignConvention sign = SignConvention::Conjugate);

// Sum over b_i, r_k of exp((1/2 + i r)<z,b>) F dp / n_b.
cplx helgason_inverse(const HelgasonTable& F, cplx z);

// Sum of |F|^2 dp / n_b.
double plancherel_norm_sq(const HelgasonTable& F);

// Integral of |f|^2 dVol on the grid of q.
double l2_norm_sq(const DiskFunction& f, const QuadratureSpec& q);

// Smooth radial cutoff: 1 for s <= 0, 0 for s >= 1, C-infinity in between.
double smooth_step_down(double s);

}  // namespace horolab
