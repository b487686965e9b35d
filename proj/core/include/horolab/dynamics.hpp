#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "horolab/group.hpp"
#include "horolab/surface.hpp"

namespace horolab {

enum class FlowKind { Geodesic, StableHoro, UnstableHoro, Rotation };

// Right multiplication by a_t, n_t, nbar_t or k_t.
GroupElement flow(const GroupElement& g, FlowKind kind, double t);

enum class Direction { Stable, Unstable };

// Least-squares slope of log|push-forward of X+ (Stable) or X- (Unstable)|
// along the geodesic flow over 41 times in [0, T]. Norms are taken in the
// left-invariant frame with |H| = |X+| = |X-| = 1.
double lyapunov_exponent(const GroupElement& g, Direction direction, double T);

struct CorrelationSeries {
    std::vector<double> times;
    std::vector<cplx> values;
    std::vector<double> stderr_values;
    long N = 0;
    std::uint64_t seed = 0;
};

// Backward: f1(g a_{-t}); Forward: f1(g a_{+t}) (time-reversed experiment).
enum class TimeDirection { Backward, Forward };

// Average over domain samples g_i of f1(reduce(g_i a_{-t})) conj(f2(g_i)).
CorrelationSeries correlation_series(const Observable& f1, const Observable& f2, const FuchsianGroup& G,
                                     const std::vector<double>& times, long N, std::uint64_t seed,
                                     TimeDirection direction = TimeDirection::Backward);

struct FitWindow {
    double t0 = 1.0;
    double t1 = 8.0;
};

struct DecayFit {
    double alpha = 0.0;
    double log_amplitude = 0.0;
    double alpha_stderr = 0.0;
    FitWindow window;
    double rms = 0.0;
    std::string method;  // "local-maxima", "upper-hull" or "all-admissible"
    std::vector<double> fit_times;
    double noise_floor = 0.0;  // largest 3*stderr inside the window
};

// Line through (t, log|C(t)|) over the envelope of points with |C| > 3 stderr.
DecayFit fit_decay(const CorrelationSeries& series, FitWindow window = {});

}  // namespace horolab
