#include "horolab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "horolab/dynamics.hpp"
#include "horolab/errors.hpp"
#include "horolab/group.hpp"
#include "horolab/harmonic.hpp"
#include "horolab/quantization.hpp"
#include "horolab/random.hpp"
#include "horolab/series_io.hpp"
#include "horolab/surface.hpp"
#include "horolab/trace_lab.hpp"
#include "json.hpp"

namespace horolab {

namespace {

using json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

std::string g3(double x) { return fmt("%.3g", x); }

Check make_check(std::string name, bool pass, std::string detail) {
    return Check{std::move(name), pass, std::move(detail)};
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

QuadratureSpec quad_from(const ExperimentConfig& cfg) {
    QuadratureSpec q;
    q.n_b = cfg.n_b;
    q.panel_order = cfg.panel_order;
    q.r_panels = cfg.n_r / cfg.panel_order;
    q.r_max = cfg.r_max;
    q.n_rho = cfg.n_rho;
    q.n_phi = cfg.n_phi;
    q.support_radius = cfg.support_radius;
    q.validate();
    return q;
}

// Random u, t in [-2, 2] for the identity checks.
double sym_uniform(std::uint64_t seed, std::uint64_t i, std::uint64_t slot) {
    return 4.0 * counter_uniform(seed, i, slot) - 2.0;
}

}  // namespace

bool ExperimentResult::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

// verify-core

ExperimentResult experiment_verify_core(const ExperimentConfig& cfg) {
    ExperimentResult res;
    json report;
    const std::uint64_t seed = cfg.seed;

    // Conjugation identities n_u a_t = a_t n_{u e^{-t}}, nbar_u a_t = a_t nbar_{u e^{t}}.
    double worst_n = 0.0, worst_nbar = 0.0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        double u = sym_uniform(seed, i, 0), t = sym_uniform(seed, i, 1);
        GroupElement at = subgroup_element(Subgroup::A, t);
        worst_n = std::max(worst_n, projective_distance(subgroup_element(Subgroup::N, u) * at,
                                                        at * subgroup_element(Subgroup::N, u * std::exp(-t))));
        worst_nbar = std::max(worst_nbar, projective_distance(subgroup_element(Subgroup::Nbar, u) * at,
                                                              at * subgroup_element(Subgroup::Nbar, u * std::exp(t))));
    }
    res.checks.push_back(make_check("conjugation_n", worst_n <= 1e-10, "max residual " + g3(worst_n) + " over 1000 draws"));
    res.checks.push_back(
        make_check("conjugation_nbar", worst_nbar <= 1e-10, "max residual " + g3(worst_nbar) + " over 1000 draws"));
    report["conjugation_n_max"] = worst_n;
    report["conjugation_nbar_max"] = worst_nbar;

    // Octagon relation, as a matrix and through its action on 1000 Haar points.
    FuchsianGroup G = bolza_group(1);
    const auto& gen = G.generators();
    GroupElement word = gen[0] * invert(gen[1]) * gen[2] * invert(gen[3]) * invert(gen[0]) * gen[1] *
                        invert(gen[2]) * gen[3];
    double worst_rel = G.relation_residual();
    for (std::uint64_t i = 0; i < 1000; ++i) {
        cplx z = base_point(haar_draw(2.0, seed, i));
        worst_rel = std::max(worst_rel, hyperbolic_distance(mobius_apply(word, z), z));
    }
    res.checks.push_back(
        make_check("octagon_relation", worst_rel <= 1e-10, "max residual " + g3(worst_rel) + " (matrix and 1000 points)"));
    report["octagon_relation_max"] = worst_rel;

    // Lie brackets at two step sizes.
    BracketResiduals b3 = lie_bracket_residuals(1e-3), b4 = lie_bracket_residuals(1e-4);
    double orders[3] = {std::log10(b3.H_Xp / b4.H_Xp), std::log10(b3.H_Xm / b4.H_Xm), std::log10(b3.Xp_Xm / b4.Xp_Xm)};
    double min_order = *std::min_element(orders, orders + 3);
    res.checks.push_back(make_check("lie_brackets", min_order >= 1.9 && b4.max() < 1e-6,
                                    "residual " + g3(b3.max()) + " at h=1e-3, " + g3(b4.max()) +
                                        " at h=1e-4, min order " + fmt("%.4f", min_order)));
    report["lie_bracket_residual_h1e-3"] = {b3.H_Xp, b3.H_Xm, b3.Xp_Xm};
    report["lie_bracket_residual_h1e-4"] = {b4.H_Xp, b4.H_Xm, b4.Xp_Xm};
    report["lie_bracket_orders"] = {orders[0], orders[1], orders[2]};

    // Lyapunov exponents at 20 random base points.
    double worst_s = 0.0, worst_u = 0.0;
    json lyap = json::array();
    for (std::uint64_t i = 0; i < 20; ++i) {
        GroupElement g = haar_draw(2.0, splitmix64(seed), i);
        double ls = lyapunov_exponent(g, Direction::Stable, 10.0);
        double lu = lyapunov_exponent(g, Direction::Unstable, 10.0);
        worst_s = std::max(worst_s, std::abs(ls + 1.0));
        worst_u = std::max(worst_u, std::abs(lu - 1.0));
        lyap.push_back({ls, lu});
    }
    res.checks.push_back(make_check("lyapunov_stable", worst_s <= 0.01, "max |lambda + 1| = " + g3(worst_s)));
    res.checks.push_back(make_check("lyapunov_unstable", worst_u <= 0.01, "max |lambda - 1| = " + g3(worst_u)));
    report["lyapunov"] = lyap;

    // Plane-wave eigen-equation on a 5 x 5 x 5 grid of (z, b, r).
    const double h = 1e-3;
    double worst_pw = 0.0;
    for (int iz = 0; iz < 5; ++iz) {
        cplx z = std::polar(0.15 * iz, 0.9 * iz + 0.3);
        for (int ib = 0; ib < 5; ++ib) {
            cplx b = std::polar(1.0, 2.0 * kPi * ib / 5.0);
            for (int ir = 0; ir < 5; ++ir) {
                double r = ir;
                DiskFunction f = [&](cplx w) { return plane_wave(w, b, r); };
                cplx lhs = laplace_apply(f, z, h);
                worst_pw = std::max(worst_pw, std::abs(lhs - (0.25 + r * r) * f(z)) / std::abs(f(z)));
            }
        }
    }
    res.checks.push_back(
        make_check("plane_wave_eigen", worst_pw <= 1e-6, "max relative residual " + g3(worst_pw) + " on 125 points"));
    report["plane_wave_max_relative_residual"] = worst_pw;

    // Measured eigenvalue against mu(1 - mu) and mu(mu - 2), mu = 1/2 + 2i.
    {
        const cplx z(0.3, 0.2), b = 1.0, r = 2.0;
        DiskFunction f = [&](cplx w) { return plane_wave(w, b, r); };
        cplx lambda = laplace_apply(f, z, h) / f(z);
        cplx mu = 0.5 + I * r;
        cplx c1 = mu * (1.0 - mu), c2 = mu * (mu - 2.0);
        double e1 = std::abs(lambda - c1), e2 = std::abs(lambda - c2);
        res.checks.push_back(make_check("eigenvalue_formula", e1 <= 1e-6 * std::abs(c1) && e2 > 1.0,
                                        "measured " + fmt("%.9f", lambda.real()) + fmt("%+.2ei", lambda.imag()) +
                                            "; |mu(1-mu) diff| " + g3(e1) + ", |mu(mu-2) diff| " + g3(e2)));
        report["eigenvalue"] = {{"z", to_json(z)},           {"b", to_json(b)},          {"r", 2.0},
                                {"measured", to_json(lambda)}, {"mu_1_minus_mu", to_json(c1)}, {"mu_mu_minus_2", to_json(c2)},
                                {"diff_mu_1_minus_mu", e1},  {"diff_mu_mu_minus_2", e2}};
    }

    // Poisson kernel is harmonic.
    {
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            cplx z = std::polar(0.15 * i, 1.1 * i);
            DiskFunction P = [](cplx w) { return cplx(poisson_kernel(w, 1.0)); };
            worst = std::max(worst, std::abs(laplace_apply(P, z, h)) / poisson_kernel(z, 1.0));
        }
        res.checks.push_back(make_check("poisson_harmonic", worst <= 1e-6, "max |Delta P| / P = " + g3(worst)));
        report["poisson_harmonic_max"] = worst;
    }

    res.artifacts.push_back({"verify_core.json", dump(report)});
    return res;
}

// plancherel

ExperimentResult experiment_plancherel(const ExperimentConfig& cfg) {
    ExperimentResult res;
    QuadratureSpec q = quad_from(cfg);
    // Off-centre Gaussian bump, so that F depends on b and the exponent sign matters.
    const cplx c(0.2, 0.1);
    const double cutoff = cfg.support_radius - distance_from_origin(c) - 1.0;
    require(cutoff > 0.5, "plancherel: support_radius too small for the test bump");
    DiskFunction f = [c, cutoff](cplx z) {
        double d = hyperbolic_distance(z, c);
        return cplx(std::exp(-d * d) * smooth_step_down(d - cutoff));
    };
    HelgasonTable F = helgason_forward(f, q);

    json pts = json::array();
    double worst = 0.0, fmax = 0.0;
    for (int k = 0; k < 10; ++k) {
        cplx z = c + std::polar(0.06 * k, 0.7 * k + 0.1);
        cplx fz = f(z), inv = helgason_inverse(F, z);
        worst = std::max(worst, std::abs(inv - fz));
        fmax = std::max(fmax, std::abs(fz));
        pts.push_back({{"z", to_json(z)}, {"f", fz.real()}, {"inverse", to_json(inv)}});
    }
    double rel = worst / fmax;
    res.checks.push_back(make_check("round_trip", rel <= 1e-3, "sup error / sup f = " + g3(rel) + " at 10 points"));

    double lhs = l2_norm_sq(f, q), rhs = plancherel_norm_sq(F);
    double prel = std::abs(lhs - rhs) / lhs;
    res.checks.push_back(make_check("plancherel_norm", prel <= 0.01,
                                    "|f|^2 = " + fmt("%.8g", lhs) + ", |F|^2 = " + fmt("%.8g", rhs) + ", rel " + g3(prel)));

    // The literal exponent (1/2 + ir) in the forward transform, same test.
    HelgasonTable L = helgason_forward(f, q, SignConvention::Literal);
    double worst_lit = 0.0;
    for (int k = 0; k < 10; ++k) {
        cplx z = c + std::polar(0.06 * k, 0.7 * k + 0.1);
        worst_lit = std::max(worst_lit, std::abs(helgason_inverse(L, z) - f(z)));
    }
    res.checks.push_back(make_check("forward_sign", rel < worst_lit / fmax,
                                    "conjugate exponent " + g3(rel) + ", literal exponent " + g3(worst_lit / fmax)));

    json report;
    report["bump_center"] = to_json(c);
    report["quadrature"] = {{"n_b", q.n_b}, {"n_r", q.n_r()}, {"r_max", q.r_max}, {"n_rho", q.n_rho},
                            {"n_phi", q.n_phi}, {"support_radius", q.support_radius}};
    report["points"] = pts;
    report["round_trip_relative_sup_error"] = rel;
    report["literal_sign_relative_sup_error"] = worst_lit / fmax;
    report["norm_sq_disk"] = lhs;
    report["norm_sq_spectral"] = rhs;
    res.artifacts.push_back({"plancherel.json", dump(report)});
    std::ostringstream table;
    F.write(table);
    res.artifacts.push_back({"helgason_table.txt", table.str()});
    return res;
}

// quantize-check

namespace {

struct TestSymbols {
    Symbol one, radial, product;
};

TestSymbols quantize_symbols(const FuchsianGroup& G, int L) {
    Observable obs = poincare_observable(standard_bump(1.2, 0.25), G, L, true);
    BoundaryFunction phi = invariant_boundary_function(obs, G);
    return {constant_symbol(1.0),
            make_product_symbol([](cplx, cplx) { return cplx(1.0); }, gaussian_profile(2.0), 0.0, true),
            make_product_symbol(phi, gaussian_profile(2.0), 0.0, true)};
}

}  // namespace

ExperimentResult experiment_quantize_check(const ExperimentConfig& cfg) {
    ExperimentResult res;
    FuchsianGroup G = bolza_group(std::max(3, cfg.ball_length + 2));
    TestSymbols S = quantize_symbols(G, cfg.ball_length);
    QuadratureSpec q = quad_from(cfg);

    const cplx z(0.2, 0.0), b = 1.0, r = 1.0;
    auto action = symbol_action_residuals({S.one, S.radial, S.product}, z, b, r, q);
    const char* names[3] = {"action_constant", "action_radial", "action_product"};
    json rows = json::array();
    for (int i = 0; i < 3; ++i) {
        const auto& a = action[i];
        res.checks.push_back(make_check(names[i], a.residual <= 1e-2 && a.observed_order >= 2.0,
                                        "residual " + g3(a.residual) + ", observed order " + fmt("%.2f", a.observed_order) +
                                            ", floor " + g3(a.truncation_floor)));
        rows.push_back({{"symbol", names[i]},
                        {"residual", a.residual},
                        {"truncation_floor", a.truncation_floor},
                        {"radial_levels", a.radial_levels},
                        {"level_errors", a.level_errors},
                        {"observed_order", a.observed_order}});
    }

    // Commutation with a generator: bump of radius 1 at 0, grid just covering it.
    QuadratureSpec qc = q;
    qc.support_radius = 1.05;
    DiskFunction u = [](cplx w) {
        double s = distance_from_origin(w);
        return s >= 1.0 ? cplx(0.0) : cplx(std::exp(1.0 - 1.0 / (1.0 - s * s)));
    };
    const GroupElement& gamma = G.generators()[0];
    cplx zc = mobius_apply(invert(gamma), cplx(0.1, 0.05));
    double comm = commutation_residual(S.product, gamma, u, qc, zc);
    res.checks.push_back(make_check("commutation", comm <= 1e-2, "residual " + g3(comm) + " for the first generator"));

    json report;
    report["point"] = {{"z", to_json(z)}, {"b", to_json(b)}, {"r", to_json(r)}};
    report["quadrature"] = {{"n_b", q.n_b}, {"n_r", q.n_r()}, {"r_max", q.r_max}, {"n_rho", q.n_rho},
                            {"n_phi", q.n_phi}, {"support_radius", q.support_radius}};
    report["symbol_action"] = rows;
    report["commutation"] = {{"generator", 0}, {"z", to_json(zc)}, {"residual", comm}};
    res.artifacts.push_back({"quantize_check.json", dump(report)});
    return res;
}

// mixing

namespace {

json fit_json(const DecayFit& fit) {
    return {{"alpha", fit.alpha},           {"alpha_stderr", fit.alpha_stderr},
            {"log_amplitude", fit.log_amplitude}, {"rms", fit.rms},
            {"method", fit.method},         {"window", {fit.window.t0, fit.window.t1}},
            {"fit_times", fit.fit_times},   {"noise_floor", fit.noise_floor}};
}

}  // namespace

ExperimentResult experiment_mixing(const ExperimentConfig& cfg) {
    ExperimentResult res;
    FuchsianGroup G = bolza_group(std::max(3, cfg.ball_length + 2));
    Observable f = poincare_observable(standard_bump(1.2), G, cfg.ball_length, true);
    CorrelationSeries s = correlation_series(f, f, G, cfg.times(), cfg.n, cfg.seed);
    res.artifacts.push_back({"mixing.csv", format_series(s)});

    json summary;
    summary["N"] = cfg.n;
    summary["seed"] = cfg.seed;
    summary["ball_length"] = cfg.ball_length;
    try {
        DecayFit fit = fit_decay(s, {cfg.fit_t0, cfg.fit_t1});
        // Only membership in (0, 1) is checked; alpha near 1/2 is an expectation, not a bound.
        res.checks.push_back(make_check("decay_rate", fit.alpha > 0.0 && fit.alpha < 1.0,
                                        "alpha " + fmt("%.4f", fit.alpha) + " +- " + fmt("%.4f", fit.alpha_stderr) + " (" +
                                            fit.method + ")"));
        res.checks.push_back(make_check("fit_rms", fit.rms <= 0.3, "log-scale rms " + fmt("%.4f", fit.rms)));
        summary["fit"] = fit_json(fit);
    } catch (const InsufficientData& e) {
        res.checks.push_back(make_check("decay_rate", false, e.what()));
        res.checks.push_back(make_check("fit_rms", false, "no fit"));
        summary["fit"] = {{"error", e.what()}, {"noise_floor", e.noise_floor()}};
    }
    double ratio = std::abs(s.values.back()) / std::abs(s.values.front());
    res.checks.push_back(make_check("decay_ratio", ratio <= 0.1,
                                    "|C(" + fmt("%g", s.times.back()) + ")| / |C(" + fmt("%g", s.times.front()) +
                                        ")| = " + g3(ratio)));
    summary["decay_ratio"] = ratio;
    res.artifacts.push_back({"mixing_fit.json", dump(summary)});
    return res;
}

// trace-decay

namespace {

// Spectral parameters of the synthetic records: the first is the lowest
// Bolza eigenvalue (lambda ~ 3.84), the rest follow Weyl spacing.
std::vector<double> synthetic_r(int count) {
    static const double base[8] = {1.9, 2.6, 3.3, 3.8, 4.3, 4.9, 5.4, 5.9};
    std::vector<double> r;
    for (int j = 0; j < count; ++j)
        r.push_back(j < 8 ? base[j] : std::sqrt(r.back() * r.back() + 4.0));
    return r;
}

std::vector<EigenRecord> trace_records(const ExperimentConfig& cfg) {
    if (!cfg.eigendata.empty()) return load_eigendata(read_text_file(cfg.eigendata));
    std::vector<EigenRecord> recs;
    auto rs = synthetic_r(cfg.records);
    for (int j = 0; j < cfg.records; ++j)
        recs.push_back(synthetic_record(rs[j], 16, counter_hash(cfg.seed, j, 0x7265), "synthetic-" + std::to_string(j)));
    return recs;
}

struct TraceSymbols {
    Symbol a1, a2;
};

TraceSymbols trace_symbols(const FuchsianGroup& G, int L) {
    Observable o1 = poincare_observable(standard_bump(1.2, 0.25), G, L, true);
    Observable o2 = poincare_observable(standard_bump(1.0, 0.5), G, L, false);
    BoundaryFunction phi1 = invariant_boundary_function(o1, G);
    BoundaryFunction phi2 = invariant_boundary_function(o2, G);
    return {make_product_symbol(phi1, inverse_power_profile(3.0), -6.0, true),
            make_product_symbol([phi2](cplx z, cplx b) { return 1.0 + 0.5 * phi2(z, b); }, unit_profile(), 0.0, true)};
}

}  // namespace

ExperimentResult experiment_trace_decay(const ExperimentConfig& cfg) {
    ExperimentResult res;
    FuchsianGroup G = bolza_group(std::max(3, cfg.ball_length + 2));
    TraceSymbols S = trace_symbols(G, cfg.ball_length);
    std::vector<EigenRecord> recs = trace_records(cfg);
    const std::vector<double> times = cfg.times();

    PairingSpec spec;
    spec.N = cfg.n;
    spec.n_theta = cfg.n_theta;
    spec.seed = cfg.seed;
    TraceSeries s = trace_series(S.a1, S.a2, recs, times, G, spec);
    res.artifacts.push_back({"trace.csv", format_series(s)});

    json summary;
    summary["N"] = cfg.n;
    summary["seed"] = cfg.seed;
    summary["J"] = s.J;
    summary["records"] = json::array();
    for (const auto& r : recs)
        summary["records"].push_back({{"label", r.label}, {"r", to_json(r.r)}, {"M", r.M()},
                                      {"provenance", r.provenance == Provenance::Synthetic ? "synthetic" : "ingested"}});
    try {
        DecayFit fit = fit_decay(as_correlation(s, cfg.n, cfg.seed), {cfg.fit_t0, cfg.fit_t1});
        res.checks.push_back(make_check("decay_rate", fit.alpha > 0.0,
                                        "alpha " + fmt("%.4f", fit.alpha) + " +- " + fmt("%.4f", fit.alpha_stderr) + " (" +
                                            fit.method + ", rms " + fmt("%.3f", fit.rms) + ")"));
        summary["fit"] = fit_json(fit);
    } catch (const InsufficientData& e) {
        res.checks.push_back(make_check("decay_rate", false, e.what()));
        summary["fit"] = {{"error", e.what()}, {"noise_floor", e.noise_floor()}};
    }

    // Second route per record: dynamics correlation with the induced observables.
    std::string terms = "record,label,t,re_pairing,im_pairing,stderr_pairing,re_correlation,im_correlation,"
                        "stderr_correlation\n";
    double worst = 0.0;
    json paths = json::array();
    for (std::size_t j = 0; j < recs.size(); ++j) {
        CorrelationSeries c = induced_correlation(S.a1, S.a2, recs[j], G, times, spec);
        double rec_worst = 0.0;
        for (std::size_t k = 0; k < times.size(); ++k) {
            double combined = std::hypot(s.per_term_stderr[j][k], c.stderr_values[k]);
            double d = std::abs(s.per_term[j][k] - c.values[k]);
            rec_worst = std::max(rec_worst, combined > 0.0 ? d / combined : (d > 0.0 ? INFINITY : 0.0));
            char line[512];
            std::snprintf(line, sizeof line, "%zu,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", j,
                          recs[j].label.c_str(), times[k], s.per_term[j][k].real(), s.per_term[j][k].imag(),
                          s.per_term_stderr[j][k], c.values[k].real(), c.values[k].imag(), c.stderr_values[k]);
            terms += line;
        }
        worst = std::max(worst, rec_worst);
        paths.push_back({{"label", recs[j].label}, {"max_diff_over_combined_stderr", rec_worst}});
    }
    res.checks.push_back(make_check("dual_path", worst <= 1.0,
                                    "max |pairing - correlation| / combined stderr = " + g3(worst) + " over " +
                                        std::to_string(recs.size()) + " records"));
    summary["dual_path"] = paths;
    res.artifacts.push_back({"trace_terms.csv", terms});

    // Reduction order: reversed record list, smaller sample.
    PairingSpec small = spec;
    small.N = std::min<long>(cfg.n, 8192);
    std::vector<EigenRecord> rev(recs.rbegin(), recs.rend());
    TraceSeries s1 = trace_series(S.a1, S.a2, recs, times, G, small);
    TraceSeries s2 = trace_series(S.a1, S.a2, rev, times, G, small);
    double perm = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) perm = std::max(perm, std::abs(s1.values[k] - s2.values[k]));
    res.checks.push_back(make_check("permutation", perm <= 1e-12,
                                    "max |total - reversed total| = " + g3(perm) + " at N = " + std::to_string(small.N)));
    summary["permutation_max_diff"] = perm;
    res.artifacts.push_back({"trace_fit.json", dump(summary)});
    return res;
}

// summability

ExperimentResult experiment_summability(const ExperimentConfig&) {
    ExperimentResult res;
    const std::vector<double> probe{2.0, 4.0, 8.0, 16.0, 32.0};
    json rows = json::array();
    auto row = [&](const SummabilityReport& s) {
        json p = json::array();
        for (const auto& [r, v] : s.probe) p.push_back({r, v});
        rows.push_back({{"alpha1", s.alpha1},
                        {"term_exponent", s.term_exponent},
                        {"j_exponent", s.j_exponent},
                        {"tail_exponent", s.tail_exponent},
                        {"summable", s.summable},
                        {"meets_order_hypothesis", s.meets_order_hypothesis},
                        {"predicted_tail_J100", s.predicted_tail(100)},
                        {"probe", p}});
    };
    SummabilityReport s4 = summability_report(-4.0, probe);
    SummabilityReport s6 = summability_report(-6.0, probe);
    SummabilityReport s3 = summability_report(-3.0, probe);
    row(s4);
    row(s6);
    row(s3);
    res.checks.push_back(make_check("order_minus_4",
                                    s4.term_exponent == -2.5 && s4.j_exponent == -1.25 && s4.summable &&
                                        s4.meets_order_hypothesis,
                                    "term exponent " + fmt("%g", s4.term_exponent) + ", j exponent " +
                                        fmt("%g", s4.j_exponent) + (s4.summable ? ", summable" : ", not summable")));
    double ratio = s6.predicted_tail(200) / s6.predicted_tail(100);
    res.checks.push_back(make_check("order_minus_6",
                                    s6.j_exponent == -2.25 && s6.tail_exponent == -1.25 &&
                                        std::abs(ratio - std::pow(2.0, -1.25)) < 1e-14,
                                    "j exponent " + fmt("%g", s6.j_exponent) + ", tail(J) ~ J^" +
                                        fmt("%g", s6.tail_exponent)));
    res.checks.push_back(make_check("order_minus_3_flagged", !s3.summable && !s3.meets_order_hypothesis,
                                    "j exponent " + fmt("%g", s3.j_exponent) + ", flagged not guaranteed summable"));
    res.artifacts.push_back({"summability.json", dump(json{{"reports", rows}})});
    return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    static const std::map<std::string, ExperimentResult (*)(const ExperimentConfig&)> table{
        {"verify-core", experiment_verify_core}, {"plancherel", experiment_plancherel},
        {"quantize-check", experiment_quantize_check}, {"mixing", experiment_mixing},
        {"trace-decay", experiment_trace_decay}, {"summability", experiment_summability}};
    auto it = table.find(cfg.subcommand);
    if (it == table.end()) throw ConfigError("unknown subcommand '" + cfg.subcommand + "'");
    return it->second(cfg);
}

namespace {

const std::map<std::string, std::vector<std::string>>& artifact_names() {
    static const std::map<std::string, std::vector<std::string>> names{
        {"verify-core", {"verify_core.json"}},
        {"plancherel", {"plancherel.json", "helgason_table.txt"}},
        {"quantize-check", {"quantize_check.json"}},
        {"mixing", {"mixing.csv", "mixing_fit.json"}},
        {"trace-decay", {"trace.csv", "trace_terms.csv", "trace_fit.json"}},
        {"summability", {"summability.json"}}};
    return names;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Geodesic-flow correlation and trace experiments on the Bolza surface", "horolab"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_path;
    std::uint64_t seed = 0;
    long n = 0;
    std::string out_dir;
    bool force = false;
    std::vector<std::string> sets;
    auto* o_config = app.add_option("--config", config_path, "Configuration file of key = value lines");
    auto* o_seed = app.add_option("--seed", seed, "Monte-Carlo seed");
    auto* o_n = app.add_option("--n", n, "Monte-Carlo sample count");
    auto* o_out = app.add_option("--out", out_dir, "Output directory");
    app.add_flag("--force", force, "Overwrite existing output files");
    app.add_option("--set", sets, "Override one configuration key, key=value (repeatable)")
        ->expected(1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    (void)o_config;

    const std::map<std::string, std::string> about{
        {"verify-core", "Group identities, Lie brackets, Lyapunov exponents, plane-wave eigen-equation"},
        {"plancherel", "Helgason transform round trip and Plancherel identity"},
        {"quantize-check", "Symbol action on plane waves and commutation with the group"},
        {"mixing", "Correlation decay of Poincare-series observables on the Bolza surface"},
        {"trace-decay", "Trace series over eigen-records with the dual correlation route"},
        {"summability", "Exponent bookkeeping for the trace series"}};
    for (const auto& name : subcommand_names()) app.add_subcommand(name, about.at(name));

    const auto& names = subcommand_names();
    // First positional token, skipping option values, names the subcommand.
    const std::vector<std::string> valued{"--config", "--seed", "--n", "--out", "--set"};
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (std::find(valued.begin(), valued.end(), a) != valued.end()) {
            ++i;
            continue;
        }
        if (a.empty() || a[0] == '-') continue;
        if (std::find(names.begin(), names.end(), a) == names.end()) {
            err << "error: unknown subcommand '" << a << "'\n" << app.help();
            return 2;
        }
        break;
    }
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    }
    const std::string sub = app.get_subcommands().front()->get_name();

    ExperimentConfig cfg;
    try {
        cfg = defaults_for(sub);
        if (!config_path.empty()) cfg = parse_config(read_text_file(config_path), cfg);
        std::vector<std::string> problems;
        for (const auto& s : sets) {
            auto eq = s.find('=');
            try {
                if (eq == std::string::npos) throw ConfigError("--set '" + s + "': expected key=value");
                auto trim = [](std::string x) {
                    x.erase(0, x.find_first_not_of(" \t"));
                    x.erase(x.find_last_not_of(" \t") + 1);
                    return x;
                };
                set_config_value(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
            } catch (const ConfigError& e) {
                problems.push_back(e.what());
            }
        }
        if (!problems.empty()) {
            std::string msg = "configuration errors:";
            for (const auto& p : problems) msg += "\n  " + p;
            throw ConfigError(msg);
        }
        if (o_seed->count()) cfg.seed = seed;
        if (o_n->count()) cfg.n = n;
        if (o_out->count()) cfg.out = out_dir;
        if (force) cfg.force = true;
        validate_config(cfg);
        if (!cfg.force) {
            for (const auto& f : artifact_names().at(sub)) {
                auto p = std::filesystem::path(cfg.out) / f;
                if (std::filesystem::exists(p))
                    throw IoError("refusing to overwrite " + p.string() + " (use --force)");
            }
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    ExperimentResult result;
    try {
        result = run_experiment(cfg);
        for (const auto& a : result.artifacts)
            write_text_file((std::filesystem::path(cfg.out) / a.filename).string(), a.content, cfg.force);
    } catch (const std::exception& e) {
        err << "error: " << sub << ": " << e.what() << "\n";
        return 2;
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    for (const auto& c : result.checks)
        out << (c.pass ? "PASS " : "FAIL ") << sub << "/" << c.name << ": " << c.detail << "\n";
    for (const auto& a : result.artifacts)
        out << "wrote " << (std::filesystem::path(cfg.out) / a.filename).string() << "\n";
    out << sub << ": " << (result.all_pass() ? "all checks passed" : "some checks failed") << " in "
        << fmt("%.1f", elapsed) << " s\n";
    return result.all_pass() ? 0 : 1;
}

}  // namespace horolab
