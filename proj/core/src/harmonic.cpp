#include "horolab/harmonic.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "horolab/errors.hpp"
#include "horolab/parallel.hpp"
#include "horolab/quadrature.hpp"

namespace horolab {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

double busemann(cplx z, cplx b) {
    double m = std::abs(z);
    if (!(m < 1.0 - 1e-12)) throw PrecisionError("busemann: base point too close to the boundary");
    return std::log((1.0 - m * m) / std::norm(z - b));
}

double poisson_kernel(cplx z, cplx b) { return std::exp(busemann(z, b)); }

cplx plane_wave(cplx z, cplx b, cplx r) { return std::exp((0.5 + I * r) * busemann(z, b)); }

cplx laplace_apply(const DiskFunction& f, cplx z, double h) {
    require(h > 0.0, "laplace_apply: step must be positive");
    require(std::abs(z) + h * std::sqrt(2.0) < 1.0, "laplace_apply: stencil leaves the disk");
    auto lap = [&](double s) {
        cplx c = f(z);
        return (f(z + s) + f(z - s) + f(z + I * s) + f(z - I * s) - 4.0 * c) / (s * s);
    };
    cplx euclid = (4.0 * lap(h / 2) - lap(h)) / 3.0;
    double q = 1.0 - std::norm(z);
    return -(q * q / 4.0) * euclid;
}

void QuadratureSpec::validate() const {
    require(power_of_two(n_b), "QuadratureSpec: n_b must be a power of two");
    require(r_panels > 0 && panel_order > 0, "QuadratureSpec: spectral grid must be non-empty");
    require(r_max > 0.0, "QuadratureSpec: r_max must be positive");
    require(n_rho > 0 && n_phi > 0, "QuadratureSpec: disk grid must be non-empty");
    require(support_radius > 0.0, "QuadratureSpec: support radius must be positive");
    require(std::abs(center) < 1.0, "QuadratureSpec: center must lie in the disk");
}

DiskGrid make_disk_grid(const QuadratureSpec& q) {
    q.validate();
    Rule rho = gauss_legendre(q.n_rho, 0.0, q.support_radius);
    Rule phi = circle_trapezoid(q.n_phi);
    GroupElement T = translation_to(q.center);
    DiskGrid g;
    g.z.reserve(static_cast<std::size_t>(q.n_rho) * q.n_phi);
    g.weight.reserve(g.z.capacity());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        double e = std::tanh(rho.x[i] / 2);
        double w = rho.w[i] * std::sinh(rho.x[i]);
        for (std::size_t j = 0; j < phi.size(); ++j) {
            g.z.push_back(mobius_apply(T, std::polar(e, phi.x[j])));
            g.weight.push_back(w * phi.w[j]);
        }
    }
    return g;
}

const char* to_string(SignConvention s) { return s == SignConvention::Conjugate ? "conjugate" : "literal"; }

HelgasonTable make_table(const QuadratureSpec& q, SignConvention sign) {
    q.validate();
    HelgasonTable t;
    t.n_b = q.n_b;
    t.n_r = q.n_r();
    t.r_max = q.r_max;
    t.panel_order = q.panel_order;
    t.sign = sign;
    Rule circ = circle_trapezoid(q.n_b);
    for (double a : circ.x) t.b.push_back(std::polar(1.0, a));
    Rule rr = gauss_legendre_panels(q.r_panels, q.panel_order, 0.0, q.r_max);
    t.r = rr.x;
    for (std::size_t k = 0; k < rr.size(); ++k)
        t.dp.push_back(rr.w[k] * rr.x[k] * std::tanh(kPi * rr.x[k]) / (2.0 * kPi));
    t.values.assign(static_cast<std::size_t>(t.n_b) * t.n_r, 0.0);
    return t;
}

namespace {

void check_support(const DiskFunction& f, const QuadratureSpec& q, double scale) {
    GroupElement T = translation_to(q.center);
    for (double extra : {0.05, 0.5}) {
        double e = std::tanh((q.support_radius + extra) / 2);
        for (int j = 0; j < q.n_phi; ++j) {
            cplx w = mobius_apply(T, std::polar(e, 2.0 * kPi * (j + 0.25) / q.n_phi));
            if (std::abs(f(w)) > 1e-12 * std::max(scale, 1.0))
                throw ContractViolation("helgason_forward: function does not vanish outside the support ball");
        }
    }
}

}  // namespace

HelgasonTable helgason_forward(const DiskFunction& f, const QuadratureSpec& q, SignConvention sign) {
    HelgasonTable t = make_table(q, sign);
    DiskGrid grid = make_disk_grid(q);
    const std::size_t np = grid.z.size();
    std::vector<cplx> fw(np);
    double scale = 0.0;
    for (std::size_t p = 0; p < np; ++p) {
        cplx v = f(grid.z[p]);
        scale = std::max(scale, std::abs(v));
        fw[p] = v * grid.weight[p];
    }
    check_support(f, q, scale);
    const double s = sign == SignConvention::Conjugate ? -1.0 : 1.0;
    parallel_for(
        t.n_b,
        [&](std::size_t lo, std::size_t hi) {
            std::vector<cplx> acc(t.n_r);
            for (std::size_t i = lo; i < hi; ++i) {
                std::fill(acc.begin(), acc.end(), cplx(0.0));
                for (std::size_t p = 0; p < np; ++p) {
                    if (fw[p] == 0.0) continue;
                    double B = busemann(grid.z[p], t.b[i]);
                    cplx amp = fw[p] * std::exp(0.5 * B);
                    for (int k = 0; k < t.n_r; ++k) {
                        double ph = s * t.r[k] * B;
                        acc[k] += amp * cplx(std::cos(ph), std::sin(ph));
                    }
                }
                for (int k = 0; k < t.n_r; ++k) t.at(static_cast<int>(i), k) = acc[k];
            }
        },
        1);
    return t;
}

cplx helgason_inverse(const HelgasonTable& F, cplx z) {
    require(power_of_two(F.n_b), "helgason_inverse: n_b must be a power of two");
    std::vector<cplx> per_b(F.n_b);
    for (int i = 0; i < F.n_b; ++i) {
        double B = busemann(z, F.b[i]);
        double amp = std::exp(0.5 * B);
        cplx s = 0.0;
        for (int k = 0; k < F.n_r; ++k) {
            double ph = F.r[k] * B;
            s += F.dp[k] * cplx(std::cos(ph), std::sin(ph)) * F.at(i, k);
        }
        per_b[i] = amp * s;
    }
    return pairwise_sum(per_b) / static_cast<double>(F.n_b);
}

double plancherel_norm_sq(const HelgasonTable& F) {
    std::vector<double> per_b(F.n_b);
    for (int i = 0; i < F.n_b; ++i) {
        double s = 0.0;
        for (int k = 0; k < F.n_r; ++k) s += F.dp[k] * std::norm(F.at(i, k));
        per_b[i] = s;
    }
    return pairwise_sum(per_b) / F.n_b;
}

double l2_norm_sq(const DiskFunction& f, const QuadratureSpec& q) {
    DiskGrid g = make_disk_grid(q);
    std::vector<double> v(g.z.size());
    for (std::size_t p = 0; p < g.z.size(); ++p) v[p] = std::norm(f(g.z[p])) * g.weight[p];
    return pairwise_sum(v);
}

double smooth_step_down(double s) {
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    double a = std::exp(-1.0 / (1.0 - s));
    double b = std::exp(-1.0 / s);
    return a / (a + b);
}

void HelgasonTable::write(std::ostream& os) const {
    char buf[128];
    os << "# horolab helgason table\n";
    os << "n_b " << n_b << "\n";
    os << "n_r " << n_r << "\n";
    std::snprintf(buf, sizeof buf, "r_max %.17g\n", r_max);
    os << buf;
    os << "panel_order " << panel_order << "\n";
    os << "sign " << to_string(sign) << "\n";
    for (int i = 0; i < n_b; ++i)
        for (int k = 0; k < n_r; ++k) {
            std::snprintf(buf, sizeof buf, "%d %d %.17g %.17g\n", i, k, at(i, k).real(), at(i, k).imag());
            os << buf;
        }
}

HelgasonTable HelgasonTable::read(std::istream& is) {
    QuadratureSpec q;
    int n_r = -1;
    std::string sign = "conjugate";
    std::string line;
    int header_fields = 0;
    while (header_fields < 5 && std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "n_b") ls >> q.n_b;
        else if (key == "n_r") ls >> n_r;
        else if (key == "r_max") ls >> q.r_max;
        else if (key == "panel_order") ls >> q.panel_order;
        else if (key == "sign") ls >> sign;
        else throw ContractViolation("HelgasonTable::read: unexpected header key '" + key + "'");
        if (ls.fail()) throw ContractViolation("HelgasonTable::read: bad value for '" + key + "'");
        ++header_fields;
    }
    if (header_fields < 5 || n_r <= 0 || q.panel_order <= 0 || n_r % q.panel_order != 0)
        throw ContractViolation("HelgasonTable::read: incomplete or inconsistent header");
    if (sign != "conjugate" && sign != "literal")
        throw ContractViolation("HelgasonTable::read: unknown sign convention '" + sign + "'");
    q.r_panels = n_r / q.panel_order;
    HelgasonTable t = make_table(q, sign == "conjugate" ? SignConvention::Conjugate : SignConvention::Literal);
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        int i, k;
        double re, im;
        if (std::sscanf(line.c_str(), "%d %d %lf %lf", &i, &k, &re, &im) != 4 || i < 0 || i >= t.n_b || k < 0 ||
            k >= t.n_r)
            throw ContractViolation("HelgasonTable::read: malformed row '" + line + "'");
        t.at(i, k) = cplx(re, im);
        ++rows;
    }
    if (rows != t.values.size()) throw ContractViolation("HelgasonTable::read: row count does not match header");
    return t;
}

}  // namespace horolab
