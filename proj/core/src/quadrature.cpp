#include "horolab/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "horolab/errors.hpp"

namespace horolab {

Rule gauss_legendre(int n, double a, double b) {
    require(n >= 1, "gauss_legendre: n must be positive");
    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.x[i] = mid - half * x;
        r.x[n - 1 - i] = mid + half * x;
        r.w[i] = r.w[n - 1 - i] = w * half;
    }
    return r;
}

Rule gauss_legendre_panels(int panels, int order, double a, double b) {
    require(panels >= 1, "gauss_legendre_panels: need at least one panel");
    Rule out;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        Rule g = gauss_legendre(order, a + p * h, a + (p + 1) * h);
        out.x.insert(out.x.end(), g.x.begin(), g.x.end());
        out.w.insert(out.w.end(), g.w.begin(), g.w.end());
    }
    return out;
}

Rule circle_trapezoid(int n) {
    require(n >= 1, "circle_trapezoid: n must be positive");
    Rule r;
    const double h = 2.0 * std::numbers::pi / n;
    for (int i = 0; i < n; ++i) {
        r.x.push_back((i + 0.5) * h);
        r.w.push_back(h);
    }
    return r;
}

}  // namespace horolab
