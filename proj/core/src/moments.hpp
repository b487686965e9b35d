#pragma once

#include <cmath>

#include "horolab/group.hpp"

namespace horolab::detail {

// Count, mean and sum of squared deviations of a complex sample.
struct Moments {
    double n = 0;
    cplx mean = 0;
    double m2 = 0;

    double variance() const { return n > 1 ? m2 / (n - 1) : 0.0; }
    double stderr_mean() const { return n > 1 ? std::sqrt(variance() / n) : 0.0; }
};

// Chan et al. pairwise update; the merge order is fixed by the caller.
inline Moments merge(const Moments& a, const Moments& b) {
    if (a.n == 0) return b;
    if (b.n == 0) return a;
    Moments r;
    r.n = a.n + b.n;
    cplx delta = b.mean - a.mean;
    r.mean = a.mean + delta * (b.n / r.n);
    r.m2 = a.m2 + b.m2 + std::norm(delta) * a.n * b.n / r.n;
    return r;
}

Moments block_moments(const cplx* x, std::size_t m);

}  // namespace horolab::detail
