#include "horolab/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "horolab/errors.hpp"
#include "horolab/parallel.hpp"
#include "moments.hpp"

namespace horolab {

GroupElement flow(const GroupElement& g, FlowKind kind, double t) {
    Subgroup s = Subgroup::A;
    switch (kind) {
        case FlowKind::Geodesic: s = Subgroup::A; break;
        case FlowKind::StableHoro: s = Subgroup::N; break;
        case FlowKind::UnstableHoro: s = Subgroup::Nbar; break;
        case FlowKind::Rotation: s = Subgroup::K; break;
    }
    return compose(g, subgroup_element(s, t, g.model()));
}

namespace {

// Coordinates of log(M) for M near the identity in the basis
// H = diag(1/2,-1/2), X+ = [[0,1],[0,0]], X- = [[0,0],[1,0]].
double lie_norm(const GroupElement& m_half_plane) {
    cplx a = m_half_plane.a(), b = m_half_plane.b(), c = m_half_plane.c(), d = m_half_plane.d();
    if ((a + d).real() < 0) { a = -a; b = -b; c = -c; d = -d; }
    double tr2 = 0.5 * (a + d).real();
    // log M = f(s) (M - tr/2 I) with cosh s = tr/2, f = s/sinh s (or s/sin s).
    double f = 1.0;
    if (tr2 > 1.0 + 1e-12) {
        double s = std::acosh(tr2);
        f = s / std::sinh(s);
    } else if (tr2 < 1.0 - 1e-12) {
        double s = std::acos(std::max(-1.0, tr2));
        f = s / std::sin(s);
    }
    double h = f * (a - d).real();
    double xp = f * b.real();
    double xm = f * c.real();
    return std::sqrt(h * h + xp * xp + xm * xm);
}

}  // namespace

double lyapunov_exponent(const GroupElement& g, Direction direction, double T) {
    require(T >= 1.0 && T <= 50.0, "lyapunov_exponent: T must lie in [1, 50]");
    const double h = 1e-3;
    const int n = 41;
    GroupElement gd = to_disk(g);
    FlowKind push = direction == Direction::Stable ? FlowKind::StableHoro : FlowKind::UnstableHoro;
    GroupElement moved = flow(gd, push, h);
    std::vector<double> ts(n), ys(n);
    for (int i = 0; i < n; ++i) {
        double t = T * i / (n - 1);
        GroupElement base = flow(gd, FlowKind::Geodesic, t);
        GroupElement other = flow(moved, FlowKind::Geodesic, t);
        double v = lie_norm(to_half_plane(compose(invert(base), other))) / h;
        if (!(v * h > 1e-10)) throw NumericalInstability("lyapunov_exponent: finite-difference step underflow; reduce T");
        ts[i] = t;
        ys[i] = std::log(v);
    }
    double mt = 0, my = 0;
    for (int i = 0; i < n; ++i) { mt += ts[i]; my += ys[i]; }
    mt /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (int i = 0; i < n; ++i) {
        sxy += (ts[i] - mt) * (ys[i] - my);
        sxx += (ts[i] - mt) * (ts[i] - mt);
    }
    return sxy / sxx;
}

using detail::merge;
using detail::Moments;


CorrelationSeries correlation_series(const Observable& f1, const Observable& f2, const FuchsianGroup& G,
                                     const std::vector<double>& times, long N, std::uint64_t seed,
                                     TimeDirection direction) {
    require(f1.mean_zero || f2.mean_zero, "correlation_series: one observable must have mean zero");
    require(N >= 2, "correlation_series: need at least two samples");
    for (std::size_t k = 0; k < times.size(); ++k) {
        require(times[k] >= 0.0, "correlation_series: times must be nonnegative");
        require(k == 0 || times[k] > times[k - 1], "correlation_series: times must be strictly increasing");
    }
    const std::size_t nt = times.size();
    const std::size_t block = 4096;
    const std::size_t nblocks = (static_cast<std::size_t>(N) + block - 1) / block;
    std::vector<Moments> partial(nblocks * nt);
    const double sign = direction == TimeDirection::Backward ? -1.0 : 1.0;
    parallel_for(
        nblocks,
        [&](std::size_t lo, std::size_t hi) {
            for (std::size_t blk = lo; blk < hi; ++blk) {
                std::size_t i0 = blk * block, i1 = std::min<std::size_t>(N, i0 + block);
                std::vector<cplx> prod(nt * (i1 - i0));
                for (std::size_t i = i0; i < i1; ++i) {
                    GroupElement g = surface_draw(G, seed, i).g;
                    cplx w = std::conj(f2(g));
                    for (std::size_t k = 0; k < nt; ++k) {
                        GroupElement gt = flow(g, FlowKind::Geodesic, sign * times[k]);
                        prod[k * (i1 - i0) + (i - i0)] = f1(reduce_to_domain(G, gt).g) * w;
                    }
                }
                for (std::size_t k = 0; k < nt; ++k) {
                    const cplx* x = prod.data() + k * (i1 - i0);
                    partial[blk * nt + k] = detail::block_moments(x, i1 - i0);
                }
            }
        },
        1);
    CorrelationSeries s;
    s.times = times;
    s.N = N;
    s.seed = seed;
    for (std::size_t k = 0; k < nt; ++k) {
        Moments acc;
        for (std::size_t blk = 0; blk < nblocks; ++blk) acc = merge(acc, partial[blk * nt + k]);
        s.values.push_back(acc.mean);
        s.stderr_values.push_back(acc.stderr_mean());
    }
    return s;
}

namespace {

struct Line {
    double slope, intercept, slope_stderr, rms;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    Line l{};
    l.slope = sxy / sxx;
    l.intercept = my - l.slope * mx;
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = y[i] - (l.intercept + l.slope * x[i]);
        rss += e * e;
    }
    l.rms = std::sqrt(rss / n);
    l.slope_stderr = n > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
    return l;
}

// Vertices of the upper concave hull; collinear points are kept.
std::vector<std::size_t> upper_hull(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<std::size_t> h;
    for (std::size_t i = 0; i < x.size(); ++i) {
        while (h.size() >= 2) {
            std::size_t a = h[h.size() - 2], b = h.back();
            double cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a]);
            double scale = 1e-12 * (std::abs(y[a]) + std::abs(y[b]) + std::abs(y[i]) + 1.0);
            if (cross > scale) h.pop_back();
            else break;
        }
        h.push_back(i);
    }
    return h;
}

}  // namespace

DecayFit fit_decay(const CorrelationSeries& s, FitWindow w) {
    require(w.t1 > w.t0, "fit_decay: empty window");
    require(s.values.size() == s.times.size() && s.stderr_values.size() == s.times.size(),
            "fit_decay: inconsistent series");
    std::vector<double> t, y;
    std::vector<char> adm;
    double floor = 0.0;
    for (std::size_t k = 0; k < s.times.size(); ++k) {
        if (s.times[k] < w.t0 - 1e-12 || s.times[k] > w.t1 + 1e-12) continue;
        double a = std::abs(s.values[k]);
        floor = std::max(floor, 3.0 * s.stderr_values[k]);
        t.push_back(s.times[k]);
        y.push_back(a > 0 ? std::log(a) : -INFINITY);
        adm.push_back(a > 3.0 * s.stderr_values[k]);
    }
    std::vector<std::size_t> admissible;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (adm[i]) admissible.push_back(i);
    if (admissible.size() < 4)
        throw InsufficientData("fit_decay: fewer than 4 points above the noise floor", floor);

    std::vector<std::size_t> chosen;
    for (std::size_t i : admissible) {
        bool left = i == 0 || y[i] >= y[i - 1];
        bool right = i + 1 == t.size() || y[i] >= y[i + 1];
        if (left && right) chosen.push_back(i);
    }
    DecayFit fit;
    fit.method = "local-maxima";
    if (chosen.size() < 4) {
        std::vector<double> xa, ya;
        for (std::size_t i : admissible) { xa.push_back(t[i]); ya.push_back(y[i]); }
        std::vector<std::size_t> hull = upper_hull(xa, ya);
        chosen.clear();
        for (std::size_t j : hull) chosen.push_back(admissible[j]);
        fit.method = "upper-hull";
        if (chosen.size() < 4) {
            chosen = admissible;
            fit.method = "all-admissible";
        }
    }
    std::vector<double> xs, ys;
    for (std::size_t i : chosen) { xs.push_back(t[i]); ys.push_back(y[i]); }
    Line l = least_squares(xs, ys);
    fit.alpha = -l.slope;
    fit.log_amplitude = l.intercept;
    fit.alpha_stderr = l.slope_stderr;
    fit.window = w;
    fit.rms = l.rms;
    fit.fit_times = xs;
    fit.noise_floor = floor;
    return fit;
}

}  // namespace horolab

namespace horolab::detail {

Moments block_moments(const cplx* x, std::size_t m) {
    Moments mo;
    if (m == 0) return mo;
    mo.n = static_cast<double>(m);
    mo.mean = pairwise_sum(x, m) / mo.n;
    std::vector<double> dev(m);
    for (std::size_t j = 0; j < m; ++j) dev[j] = std::norm(x[j] - mo.mean);
    mo.m2 = pairwise_sum(dev);
    return mo;
}

}  // namespace horolab::detail
