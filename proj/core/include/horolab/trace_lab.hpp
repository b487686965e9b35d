#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "horolab/dynamics.hpp"
#include "horolab/group.hpp"
#include "horolab/quantization.hpp"
#include "horolab/surface.hpp"

namespace horolab {

enum class Provenance { Ingested, Synthetic };

// One spectral datum: r and the boundary distribution T(b) = sum c_m b^m, m = -M..M.
struct EigenRecord {
    cplx r;
    std::vector<cplx> T_coeffs;  // c_{-M} .. c_{M}
    std::string label;
    Provenance provenance = Provenance::Ingested;

    int M() const { return static_cast<int>(T_coeffs.size() / 2); }
    cplx T(cplx b) const;
};

// Empty string when the record is valid, otherwise the reason.
std::string record_problem(const EigenRecord& rec);
void validate_record(const EigenRecord& rec);

struct EigenDataParse {
    std::string surface;
    std::vector<EigenRecord> records;
    std::vector<std::string> errors;  // one entry per problem, prefixed by its location
};

inline constexpr const char* kEigenConvention = "busemann-disk-v1";

// JSON document {surface, convention, records: [{r_re, r_im, T: [[re, im], ...], label}]}.
EigenDataParse parse_eigendata(const std::string& text);
// Throws ContractViolation listing every problem.
std::vector<EigenRecord> load_eigendata(const std::string& text);
std::string dump_eigendata(const std::string& surface, const std::vector<EigenRecord>& records);

// Random smooth trigonometric polynomial, |c_m| ~ exp(-|m|/4), deterministic in seed.
EigenRecord synthetic_record(cplx r, int M, std::uint64_t seed, const std::string& label);

// E(g) = exp((-1/2 + i r)<z,b>) T(b).
cplx eigen_distribution_eval(const EigenRecord& rec, const GroupElement& g);

struct PairingSpec {
    long N = 20000;     // Monte-Carlo samples over the domain
    // Trapezoid nodes for the K-integral. Near the edge of the domain the
    // fibre parametrisation compresses T by up to (1+|z|)/(1-|z|) ~ 12, so
    // 256 nodes are needed for ~1e-4 accuracy there.
    int n_theta = 256;
    int n_boundary = 128;  // nodes in b' for the boundary form used by the dynamics path
    std::uint64_t seed = 1;
    double max_stderr = INFINITY;
};

struct PairingValue {
    cplx value;
    double stderr_value = 0.0;
};

// vol(Gamma\G) * mean over domain samples of
//   a1(g, r) E(g) * int_K conj(a2(g k_theta, r) E(g k_theta)) dtheta.
PairingValue pairing_term(const Symbol& a1, const Symbol& a2, const EigenRecord& rec, const FuchsianGroup& G,
                          const PairingSpec& spec);

// Same inner integral, taken over the boundary b' with weight P(z,b') db'.
cplx k_integral_boundary(const Symbol& a2, const EigenRecord& rec, const GroupElement& g, int n_b);
cplx k_integral_fibre(const Symbol& a2, const EigenRecord& rec, const GroupElement& g, int n_theta);

struct TraceSeries {
    std::vector<double> times;
    std::vector<cplx> values;
    std::vector<double> stderr_total;
    std::vector<std::vector<cplx>> per_term;  // [record][time]
    std::vector<std::vector<double>> per_term_stderr;
    int J = 0;
};

// For each t: sum over records of pairing_term(evolve_symbol(a1, t), a2, rec).
// Checks first that a1 or a2 has zero Haar mean at each r (3 sigma).
TraceSeries trace_series(const Symbol& a1, const Symbol& a2, const std::vector<EigenRecord>& records,
                         const std::vector<double>& times, const FuchsianGroup& G, const PairingSpec& spec);

// Per-record correlation computed by dynamics::correlation_series with
// f1 = a1(., r) and f2 = conj(E J), J from the boundary form of the K-integral.
CorrelationSeries induced_correlation(const Symbol& a1, const Symbol& a2, const EigenRecord& rec,
                                      const FuchsianGroup& G, const std::vector<double>& times,
                                      const PairingSpec& spec);

// Converts a trace series into the shape fit_decay expects.
CorrelationSeries as_correlation(const TraceSeries& s, long N, std::uint64_t seed);

struct SummabilityReport {
    double alpha1 = 0.0;
    double term_exponent = 0.0;  // alpha1 + 3/2
    double j_exponent = 0.0;     // term exponent / 2 under r_j ~ sqrt(j)
    double tail_exponent = 0.0;  // j_exponent + 1
    bool summable = false;
    bool meets_order_hypothesis = false;  // alpha1 <= -4
    std::vector<std::pair<double, double>> probe;  // (r, <r>^{term exponent})

    // Integral-test tail sum_{j > J} j^{j_exponent} <= J^{tail_exponent} / |tail_exponent|.
    double predicted_tail(long J) const;
};

SummabilityReport summability_report(double alpha1, const std::vector<double>& probe_r);

// |T(gamma b) - exp((1/2 - i r)<gamma 0, gamma b>) T(b)|.
double equivariance_residual(const EigenRecord& rec, const GroupElement& gamma, cplx b);

}  // namespace horolab
