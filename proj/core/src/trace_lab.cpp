#include "horolab/trace_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "horolab/errors.hpp"
#include "horolab/harmonic.hpp"
#include "horolab/parallel.hpp"
#include "horolab/quadrature.hpp"
#include "horolab/random.hpp"
#include "json.hpp"
#include "moments.hpp"

namespace horolab {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);
const double kQuotientVolume = 2.0 * kPi * kBolzaArea;

cplx E_at(const EigenRecord& rec, cplx z, cplx b) {
    return std::exp((-0.5 + I * rec.r) * busemann(z, b)) * rec.T(b);
}

}  // namespace

cplx EigenRecord::T(cplx b) const {
    const int m = M();
    // Horner in b from c_M down to c_{-M}, then divide by b^M.
    cplx s = 0.0;
    for (int k = static_cast<int>(T_coeffs.size()) - 1; k >= 0; --k) s = s * b + T_coeffs[k];
    return s * std::pow(std::conj(b), m);
}

std::string record_problem(const EigenRecord& rec) {
    const double re = rec.r.real(), im = rec.r.imag();
    if (!std::isfinite(re) || !std::isfinite(im)) return "r is not finite";
    // 1/2 + i r = -n for n = 0, 1, 2, ... means r = i (n + 1/2).
    if (std::abs(re) < 1e-12 && im > 0.0) {
        double n = im - 0.5;
        if (std::abs(n - std::round(n)) < 1e-12 && std::round(n) >= 0.0) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "exceptional set: 1/2 + i r = %g", -std::round(n));
            return buf;
        }
    }
    bool real_branch = std::abs(im) <= 1e-15 && re >= 0.0;
    bool imag_branch = std::abs(re) <= 1e-15 && im <= 0.0 && im >= -0.5;
    if (!real_branch && !imag_branch) return "r outside [0, inf) U i[-1/2, 0]";
    if (rec.T_coeffs.size() % 2 != 1) return "T must have 2M+1 coefficients";
    for (const auto& c : rec.T_coeffs)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return "non-finite T coefficient";
    return "";
}

void validate_record(const EigenRecord& rec) {
    std::string p = record_problem(rec);
    if (!p.empty()) throw ContractViolation("record '" + rec.label + "': " + p);
}

EigenDataParse parse_eigendata(const std::string& text) {
    using nlohmann::json;
    EigenDataParse out;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        out.errors.push_back(std::string("document: ") + e.what());
        return out;
    }
    if (!doc.is_object()) {
        out.errors.push_back("document: top level must be an object");
        return out;
    }
    if (doc.contains("surface") && doc["surface"].is_string()) out.surface = doc["surface"].get<std::string>();
    else out.errors.push_back("surface: missing or not text");
    if (!doc.contains("convention") || !doc["convention"].is_string())
        out.errors.push_back("convention: missing or not text");
    else if (doc["convention"].get<std::string>() != kEigenConvention)
        out.errors.push_back("convention: expected '" + std::string(kEigenConvention) + "'");
    if (!doc.contains("records") || !doc["records"].is_array()) {
        out.errors.push_back("records: missing or not a list");
        return out;
    }
    std::size_t idx = 0;
    for (const auto& r : doc["records"]) {
        std::string where = "records[" + std::to_string(idx++) + "]";
        if (!r.is_object()) {
            out.errors.push_back(where + ": not an object");
            continue;
        }
        EigenRecord rec;
        bool ok = true;
        for (const char* key : {"r_re", "r_im"})
            if (!r.contains(key) || !r[key].is_number()) {
                out.errors.push_back(where + ": " + key + " missing or not a number");
                ok = false;
            }
        if (!r.contains("label") || !r["label"].is_string()) {
            out.errors.push_back(where + ": label missing or not text");
            ok = false;
        }
        if (!r.contains("T") || !r["T"].is_array()) {
            out.errors.push_back(where + ": T missing or not a list");
            ok = false;
        } else {
            for (const auto& c : r["T"]) {
                if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
                    out.errors.push_back(where + ": T entries must be [re, im] pairs");
                    ok = false;
                    break;
                }
                rec.T_coeffs.emplace_back(c[0].get<double>(), c[1].get<double>());
            }
        }
        if (!ok) continue;
        rec.r = cplx(r["r_re"].get<double>(), r["r_im"].get<double>());
        rec.label = r["label"].get<std::string>();
        rec.provenance = Provenance::Ingested;
        if (r.contains("provenance") && r["provenance"].is_string() && r["provenance"] == "synthetic")
            rec.provenance = Provenance::Synthetic;
        std::string p = record_problem(rec);
        if (!p.empty()) {
            out.errors.push_back(where + " (" + rec.label + "): " + p);
            continue;
        }
        out.records.push_back(std::move(rec));
    }
    return out;
}

std::vector<EigenRecord> load_eigendata(const std::string& text) {
    EigenDataParse p = parse_eigendata(text);
    if (!p.errors.empty()) {
        std::string msg = "eigen-data rejected:";
        for (const auto& e : p.errors) msg += "\n  " + e;
        throw ContractViolation(msg);
    }
    return p.records;
}

std::string dump_eigendata(const std::string& surface, const std::vector<EigenRecord>& records) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["surface"] = surface;
    doc["convention"] = kEigenConvention;
    doc["records"] = ordered_json::array();
    for (const auto& r : records) {
        ordered_json e;
        e["r_re"] = r.r.real();
        e["r_im"] = r.r.imag();
        ordered_json T = ordered_json::array();
        for (const auto& c : r.T_coeffs) T.push_back({c.real(), c.imag()});
        e["T"] = T;
        e["label"] = r.label;
        e["provenance"] = r.provenance == Provenance::Synthetic ? "synthetic" : "ingested";
        doc["records"].push_back(e);
    }
    return doc.dump(2) + "\n";
}

EigenRecord synthetic_record(cplx r, int M, std::uint64_t seed, const std::string& label) {
    require(M >= 0, "synthetic_record: M must be nonnegative");
    EigenRecord rec;
    rec.r = r;
    rec.label = label;
    rec.provenance = Provenance::Synthetic;
    for (int m = -M; m <= M; ++m) {
        std::uint64_t idx = static_cast<std::uint64_t>(m + M);
        double u1 = 1.0 - counter_uniform(seed, idx, 0);
        double u2 = counter_uniform(seed, idx, 1);
        double rad = std::sqrt(-2.0 * std::log(u1));
        cplx normal(rad * std::cos(2 * kPi * u2), rad * std::sin(2 * kPi * u2));
        rec.T_coeffs.push_back(normal * std::exp(-std::abs(m) / 4.0) / std::sqrt(2.0));
    }
    validate_record(rec);
    return rec;
}

cplx eigen_distribution_eval(const EigenRecord& rec, const GroupElement& g) {
    HoroCoord h = to_horo_coords(g);
    return E_at(rec, h.z, h.b);
}

namespace {

// Fibre K-integrals of conj(a2 E_j) for several records at once. The chart of
// g k_theta, the Busemann value and, for separable a2, phi are shared.
void fibre_integrals(const Symbol& a2, const EigenRecord* recs, std::size_t nrec, const GroupElement& g,
                     int n_theta, cplx* out) {
    const double h = 2.0 * kPi / n_theta;
    std::vector<cplx> zs(n_theta), bs(n_theta), phis(n_theta);
    std::vector<double> bus(n_theta);
    for (int m = 0; m < n_theta; ++m) {
        HoroCoord c = to_horo_coords(compose(g, disk_rotation((m + 0.5) * h)));
        zs[m] = c.z;
        bs[m] = c.b;
        bus[m] = busemann(c.z, c.b);
        if (a2.separable()) phis[m] = a2.phi(c.z, c.b);
    }
    std::vector<cplx> v(n_theta);
    for (std::size_t j = 0; j < nrec; ++j) {
        const EigenRecord& rec = recs[j];
        const cplx f = a2.separable() ? a2.radial(rec.r) : cplx(0.0);
        for (int m = 0; m < n_theta; ++m) {
            cplx a = a2.separable() ? phis[m] * f : a2(zs[m], bs[m], rec.r);
            cplx E = std::exp((-0.5 + I * rec.r) * bus[m]) * rec.T(bs[m]);
            v[m] = std::conj(a * E);
        }
        out[j] = pairwise_sum(v) * h;
    }
}

}  // namespace

cplx k_integral_fibre(const Symbol& a2, const EigenRecord& rec, const GroupElement& g, int n_theta) {
    require(n_theta > 0, "k_integral_fibre: n_theta must be positive");
    cplx out;
    fibre_integrals(a2, &rec, 1, g, n_theta, &out);
    return out;
}

cplx k_integral_boundary(const Symbol& a2, const EigenRecord& rec, const GroupElement& g, int n_b) {
    require(n_b > 0, "k_integral_boundary: n_b must be positive");
    const cplx z = base_point(g);
    std::vector<cplx> v(n_b);
    const double h = 2.0 * kPi / n_b;
    for (int m = 0; m < n_b; ++m) {
        cplx b = std::polar(1.0, (m + 0.5) * h);
        // dtheta = P(z, b') db' along the fibre over z.
        v[m] = std::conj(a2(z, b, rec.r) * E_at(rec, z, b)) * poisson_kernel(z, b);
    }
    return pairwise_sum(v) * h;
}

namespace {

void check_pairing_preconditions(const Symbol& a1, const Symbol& a2, const EigenRecord& rec) {
    validate_record(rec);
    require(a1.order <= -4.0, "pairing_term: a1 must have order <= -4");
    if (rec.r.imag() != 0.0)
        require(a1.strip_halfwidth > 0.5 && a2.strip_halfwidth > 0.5,
                "pairing_term: complex r needs symbol strips wider than 1/2");
}

}  // namespace

PairingValue pairing_term(const Symbol& a1, const Symbol& a2, const EigenRecord& rec, const FuchsianGroup& G,
                          const PairingSpec& spec) {
    check_pairing_preconditions(a1, a2, rec);
    require(spec.N >= 2, "pairing_term: need at least two samples");
    const std::size_t block = 4096;
    const std::size_t nblocks = (static_cast<std::size_t>(spec.N) + block - 1) / block;
    std::vector<detail::Moments> part(nblocks);
    parallel_for(
        nblocks,
        [&](std::size_t lo, std::size_t hi) {
            for (std::size_t blk = lo; blk < hi; ++blk) {
                std::size_t i0 = blk * block, i1 = std::min<std::size_t>(spec.N, i0 + block);
                std::vector<cplx> v(i1 - i0);
                for (std::size_t i = i0; i < i1; ++i) {
                    GroupElement g = surface_draw(G, spec.seed, i).g;
                    v[i - i0] = a1.at(g, rec.r) * eigen_distribution_eval(rec, g) *
                                k_integral_fibre(a2, rec, g, spec.n_theta);
                }
                part[blk] = detail::block_moments(v.data(), v.size());
            }
        },
        1);
    detail::Moments acc;
    for (const auto& p : part) acc = detail::merge(acc, p);
    PairingValue out{kQuotientVolume * acc.mean, kQuotientVolume * acc.stderr_mean()};
    if (out.stderr_value > spec.max_stderr)
        throw NumericalInstability("pairing_term: stderr above tolerance; refine by increasing N");
    return out;
}

TraceSeries trace_series(const Symbol& a1, const Symbol& a2, const std::vector<EigenRecord>& records,
                         const std::vector<double>& times, const FuchsianGroup& G, const PairingSpec& spec) {
    require(a1.order <= -6.0, "trace_series: a1 must have order <= -6");
    for (std::size_t k = 0; k < times.size(); ++k)
        require(k == 0 || times[k] > times[k - 1], "trace_series: times must be strictly increasing");
    TraceSeries out;
    out.times = times;
    out.J = static_cast<int>(records.size());
    const std::size_t nt = times.size(), nj = records.size();
    out.values.assign(nt, 0.0);
    out.stderr_total.assign(nt, 0.0);
    out.per_term.assign(nj, std::vector<cplx>(nt, 0.0));
    out.per_term_stderr.assign(nj, std::vector<double>(nt, 0.0));
    if (nj == 0 || nt == 0) return out;

    // Mean-zero hypothesis, checked by Monte Carlo on an independent stream.
    std::vector<std::string> offending;
    const std::uint64_t check_seed = splitmix64(spec.seed ^ 0x6d65616e7a65726fULL);
    for (const auto& rec : records) {
        check_pairing_preconditions(a1, a2, rec);
        auto zero_mean = [&](const Symbol& a) {
            MeanEstimate m = surface_average([&](const GroupElement& g) { return a.at(g, rec.r); }, G,
                                             std::max<long>(spec.N, 1000), check_seed);
            return std::abs(m.mean) <= 3.0 * m.stderr_mean;
        };
        if (!zero_mean(a1) && !zero_mean(a2)) offending.push_back(rec.label);
    }
    if (!offending.empty()) {
        std::string msg = "trace_series: neither symbol has mean zero for records:";
        for (const auto& l : offending) msg += " " + l;
        throw ContractViolation(msg);
    }

    std::vector<Symbol> evolved;
    for (double t : times) evolved.push_back(evolve_symbol(a1, t));
    const std::size_t block = 4096;
    const std::size_t nblocks = (static_cast<std::size_t>(spec.N) + block - 1) / block;
    // Moments per block for every (record, time) and for the total at each time.
    const std::size_t slots = (nj + 1) * nt;
    std::vector<detail::Moments> part(nblocks * slots);
    parallel_for(
        nblocks,
        [&](std::size_t lo, std::size_t hi) {
            for (std::size_t blk = lo; blk < hi; ++blk) {
                std::size_t i0 = blk * block, i1 = std::min<std::size_t>(spec.N, i0 + block);
                std::size_t m = i1 - i0;
                std::vector<cplx> v(slots * m);
                std::vector<cplx> h(nj);
                for (std::size_t i = i0; i < i1; ++i) {
                    GroupElement g = surface_draw(G, spec.seed, i).g;
                    HoroCoord c = to_horo_coords(g);
                    fibre_integrals(a2, records.data(), nj, g, spec.n_theta, h.data());
                    for (std::size_t j = 0; j < nj; ++j) h[j] *= E_at(records[j], c.z, c.b);
                    for (std::size_t k = 0; k < nt; ++k) {
                        const cplx phi = a1.separable() ? evolved[k].phi(c.z, c.b) : cplx(0.0);
                        cplx total = 0.0;
                        for (std::size_t j = 0; j < nj; ++j) {
                            cplx a = a1.separable() ? phi * a1.radial(records[j].r)
                                                    : evolved[k](c.z, c.b, records[j].r);
                            cplx term = a * h[j];
                            v[(j * nt + k) * m + (i - i0)] = term;
                            total += term;
                        }
                        v[(nj * nt + k) * m + (i - i0)] = total;
                    }
                }
                for (std::size_t s = 0; s < slots; ++s)
                    part[blk * slots + s] = detail::block_moments(v.data() + s * m, m);
            }
        },
        1);
    for (std::size_t s = 0; s < slots; ++s) {
        detail::Moments acc;
        for (std::size_t blk = 0; blk < nblocks; ++blk) acc = detail::merge(acc, part[blk * slots + s]);
        std::size_t j = s / nt, k = s % nt;
        if (j < nj) {
            out.per_term[j][k] = kQuotientVolume * acc.mean;
            out.per_term_stderr[j][k] = kQuotientVolume * acc.stderr_mean();
        } else {
            out.values[k] = kQuotientVolume * acc.mean;
            out.stderr_total[k] = kQuotientVolume * acc.stderr_mean();
        }
    }
    return out;
}

CorrelationSeries induced_correlation(const Symbol& a1, const Symbol& a2, const EigenRecord& rec,
                                      const FuchsianGroup& G, const std::vector<double>& times,
                                      const PairingSpec& spec) {
    check_pairing_preconditions(a1, a2, rec);
    Observable f1;
    f1.mean_zero = true;
    f1.eval = [a1, r = rec.r](const GroupElement& g) { return a1.at(g, r); };
    Observable f2;
    f2.eval = [a2, rec, n = spec.n_boundary](const GroupElement& g) {
        return std::conj(eigen_distribution_eval(rec, g) * k_integral_boundary(a2, rec, g, n));
    };
    CorrelationSeries c = correlation_series(f1, f2, G, times, spec.N, spec.seed, TimeDirection::Forward);
    for (auto& v : c.values) v *= kQuotientVolume;
    for (auto& e : c.stderr_values) e *= kQuotientVolume;
    return c;
}

CorrelationSeries as_correlation(const TraceSeries& s, long N, std::uint64_t seed) {
    CorrelationSeries c;
    c.times = s.times;
    c.values = s.values;
    c.stderr_values = s.stderr_total;
    c.N = N;
    c.seed = seed;
    return c;
}

double SummabilityReport::predicted_tail(long J) const {
    require(J >= 1, "predicted_tail: J must be positive");
    if (!summable) return INFINITY;
    return std::pow(static_cast<double>(J), tail_exponent) / std::abs(tail_exponent);
}

SummabilityReport summability_report(double alpha1, const std::vector<double>& probe_r) {
    SummabilityReport s;
    s.alpha1 = alpha1;
    s.term_exponent = alpha1 + 1.5;
    s.j_exponent = s.term_exponent / 2.0;
    s.tail_exponent = s.j_exponent + 1.0;
    s.summable = s.j_exponent < -1.0;
    s.meets_order_hypothesis = alpha1 <= -4.0;
    for (double r : probe_r) s.probe.emplace_back(r, std::pow(1.0 + r * r, s.term_exponent / 2.0));
    return s;
}

double equivariance_residual(const EigenRecord& rec, const GroupElement& gamma, cplx b) {
    cplx gb = mobius_apply(gamma, b);
    gb /= std::abs(gb);
    cplx g0 = base_point(gamma);
    return std::abs(rec.T(gb) - std::exp((0.5 - I * rec.r) * busemann(g0, gb)) * rec.T(b));
}

}  // namespace horolab
