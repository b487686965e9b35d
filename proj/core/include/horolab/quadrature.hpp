#pragma once

#include <vector>

namespace horolab {

struct Rule {
    std::vector<double> x;
    std::vector<double> w;
    std::size_t size() const { return x.size(); }
};

// n-point Gauss-Legendre rule on [a, b].
Rule gauss_legendre(int n, double a = -1.0, double b = 1.0);

// Composite Gauss-Legendre: `panels` equal panels of `order` nodes each.
Rule gauss_legendre_panels(int panels, int order, double a, double b);

// Periodic trapezoid on [0, 2*pi) with nodes offset by half a step.
Rule circle_trapezoid(int n);

}  // namespace horolab
