#include "horolab/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>

#include "horolab/errors.hpp"
#include "horolab/parallel.hpp"
#include "horolab/quadrature.hpp"
#include "horolab/random.hpp"

namespace horolab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kBallElementGuard = 5'000'000;
constexpr int kBallLengthGuard = 12;

double sample_domain_radius(const std::vector<GroupElement>& pairings) {
    const int rays = 65536;
    double best = 0.0;
    for (int k = 0; k < rays; ++k) {
        double phi = 2.0 * kPi * k / rays;
        double s_min = INFINITY;
        for (const auto& d : pairings) {
            cplx p = base_point(d);
            double D = distance_from_origin(p);
            double c = std::cos(phi - std::arg(p));
            double th = std::tanh(D / 2);
            if (c > th) s_min = std::min(s_min, std::atanh(th / c));
        }
        best = std::max(best, s_min);
    }
    return best;
}

// Dedup key that does not depend on the sign of the matrix.
double sign_free_key(const GroupElement& g) { return (g.a() * g.a()).real(); }

// Matrix distance below 1e-8, scaled by the entry size: long words carry
// entries of order e^{d/2} whose rounding error exceeds 1e-8 in absolute terms.
bool same_element(const GroupElement& x, const GroupElement& y) {
    return projective_distance(x, y) < 1e-8 * std::max(1.0, std::abs(y.a()));
}

std::vector<std::vector<GroupElement>> build_balls(const std::vector<GroupElement>& pairings, int L) {
    std::vector<std::vector<GroupElement>> levels;  // cumulative balls
    std::vector<GroupElement> all{GroupElement::identity()};
    std::multimap<double, std::size_t> index{{sign_free_key(all[0]), 0}};
    std::vector<GroupElement> frontier = all;
    levels.push_back(all);
    for (int len = 1; len <= L; ++len) {
        std::vector<GroupElement> next;
        for (const auto& g : frontier) {
            for (const auto& s : pairings) {
                GroupElement h = compose(g, s);
                double key = sign_free_key(h);
                double tol = 1e-8 * std::max(1.0, std::abs(key));
                bool dup = false;
                for (auto it = index.lower_bound(key - tol); it != index.end() && it->first <= key + tol; ++it) {
                    if (same_element(all[it->second], h)) {
                        dup = true;
                        break;
                    }
                }
                if (dup) continue;
                index.emplace(key, all.size());
                all.push_back(h);
                next.push_back(h);
                if (all.size() > kBallElementGuard)
                    throw ContractViolation("group_ball: element-count guard exceeded");
            }
        }
        frontier = std::move(next);
        levels.push_back(all);
    }
    for (auto& lvl : levels) {
        std::stable_sort(lvl.begin(), lvl.end(), [](const GroupElement& x, const GroupElement& y) {
            return displacement(x) < displacement(y);
        });
    }
    return levels;
}

}  // namespace

double displacement(const GroupElement& g) { return 2.0 * std::asinh(std::abs(g.b())); }

FuchsianGroup::FuchsianGroup(std::string name, std::vector<GroupElement> generators, int cache_length)
    : name_(std::move(name)), generators_(std::move(generators)) {
    require(!generators_.empty(), "FuchsianGroup: need at least one generator");
    require(cache_length >= 0 && cache_length <= kBallLengthGuard, "FuchsianGroup: cache length out of range");
    for (const auto& g : generators_) {
        require(g.model() == Model::Disk, "FuchsianGroup: generators must be in the disk model");
        double q = std::norm(g.a()) - std::norm(g.b());
        require(std::abs(q - 1.0) <= 1e-10, "FuchsianGroup: generator is not in SU(1,1)");
    }
    pairings_ = generators_;
    for (const auto& g : generators_) pairings_.push_back(invert(g));
    domain_radius_ = sample_domain_radius(pairings_);
    balls_ = build_balls(pairings_, cache_length);
    for (std::size_t i = 1; i < balls_.back().size(); ++i)
        if (displacement(balls_.back()[i]) < 0.5)
            throw ContractViolation("FuchsianGroup: cached element displaces 0 by less than 0.5");
}

const std::vector<GroupElement>& FuchsianGroup::cached_ball(int length) const {
    require(length >= 0 && length <= cached_length(), "cached_ball: length not cached");
    return balls_[length];
}

double FuchsianGroup::relation_residual() const {
    require(generators_.size() == 4, "relation_residual: defined for four generators");
    const auto& g = generators_;
    GroupElement p = g[0] * invert(g[1]) * g[2] * invert(g[3]) * invert(g[0]) * g[1] * invert(g[2]) * g[3];
    return projective_distance(p, GroupElement::identity());
}

std::string FuchsianGroup::serialize() const {
    std::ostringstream os;
    os << "name " << name_ << "\n";
    char buf[512];
    for (const auto& g : generators_) {
        std::snprintf(buf, sizeof buf, "generator %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n",
                      g.a().real(), g.a().imag(), g.b().real(), g.b().imag(), g.c().real(), g.c().imag(),
                      g.d().real(), g.d().imag());
        os << buf;
    }
    return os.str();
}

FuchsianGroup FuchsianGroup::parse(const std::string& text, int cache_length) {
    std::istringstream is(text);
    std::string line, name = "unnamed";
    std::vector<GroupElement> gens;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "name") {
            ls >> name;
        } else if (key == "generator") {
            double v[8];
            for (double& x : v) ls >> x;
            if (ls.fail()) throw ContractViolation("FuchsianGroup::parse: generator needs 8 reals");
            gens.emplace_back(cplx(v[0], v[1]), cplx(v[2], v[3]), cplx(v[4], v[5]), cplx(v[6], v[7]), Model::Disk);
        } else {
            throw ContractViolation("FuchsianGroup::parse: unknown key '" + key + "'");
        }
    }
    return FuchsianGroup(name, gens, cache_length);
}

FuchsianGroup bolza_group(int cache_length) {
    const double ch = 1.0 + std::sqrt(2.0);
    const double sh = std::sqrt(ch * ch - 1.0);
    GroupElement T(ch, sh, sh, ch, Model::Disk);
    std::vector<GroupElement> gens;
    for (int k = 0; k < 4; ++k) {
        GroupElement R = disk_rotation(k * kPi / 4);
        gens.push_back(R * T * invert(R));
    }
    return FuchsianGroup("bolza", gens, cache_length);
}

std::vector<GroupElement> group_ball(const FuchsianGroup& G, int L) {
    require(L >= 0, "group_ball: negative word length");
    if (L > kBallLengthGuard) throw ContractViolation("group_ball: word length guard (12) exceeded");
    if (L <= G.cached_length()) return G.cached_ball(L);
    return build_balls(G.side_pairings(), L).back();
}

double complete_radius(const FuchsianGroup& G, int L) {
    auto inner = group_ball(G, L);
    auto outer = group_ball(G, L + 2);
    std::multimap<double, std::size_t> index;
    for (std::size_t i = 0; i < inner.size(); ++i) index.emplace(sign_free_key(inner[i]), i);
    double best = INFINITY;
    for (const auto& h : outer) {
        double key = sign_free_key(h);
        double tol = 1e-8 * std::max(1.0, std::abs(key));
        bool found = false;
        for (auto it = index.lower_bound(key - tol); it != index.end() && it->first <= key + tol; ++it)
            if (same_element(inner[it->second], h)) {
                found = true;
                break;
            }
        if (!found) best = std::min(best, displacement(h));
    }
    return best;
}

Reduction reduce_to_domain(const FuchsianGroup& G, const GroupElement& g) {
    require(g.model() == Model::Disk, "reduce_to_domain: disk model required");
    Reduction r{g, GroupElement::identity(), 0};
    double cur = distance_from_origin(base_point(g));
    const auto& S = G.side_pairings();
    for (;;) {
        double best = cur;
        int arg = -1;
        for (std::size_t k = 0; k < S.size(); ++k) {
            double d = distance_from_origin(mobius_apply(S[k], base_point(r.g)));
            if (d < best - 1e-12) {
                best = d;
                arg = static_cast<int>(k);
            }
        }
        if (arg < 0) break;
        r.g = compose(S[arg], r.g);
        r.gamma = compose(S[arg], r.gamma);
        cur = distance_from_origin(base_point(r.g));
        if (++r.iterations > 10000) throw NumericalInstability("reduce_to_domain: iteration cap exceeded");
    }
    return r;
}

Bump standard_bump(double rho, double kappa) {
    require(rho > 0.0, "standard_bump: radius must be positive");
    Bump b;
    b.radius = rho;
    b.eval = [rho, kappa](const GroupElement& g) -> cplx {
        double s = distance_from_origin(base_point(g)) / rho;
        if (s >= 1.0) return 0.0;
        double chi = std::exp(1.0 - 1.0 / (1.0 - s * s));
        if (kappa == 0.0) return chi;
        return chi * (1.0 + kappa * std::cos(to_frame(g).theta));
    };
    // Integral over G: 2pi * 2pi * int_0^rho chi(s/rho) sinh(s) ds (the cosine averages out).
    Rule q = gauss_legendre_panels(16, 16, 0.0, rho);
    double acc = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        double s = q.x[i] / rho;
        if (s < 1.0) acc += q.w[i] * std::exp(1.0 - 1.0 / (1.0 - s * s)) * std::sinh(q.x[i]);
    }
    b.integral = 4.0 * kPi * kPi * acc;
    return b;
}

namespace {

cplx bump_series(const Bump& bump, const std::vector<GroupElement>& ball, const GroupElement& g) {
    double dz = distance_from_origin(base_point(g));
    cplx s = 0.0;
    for (const auto& gamma : ball) {
        // d(0, gamma g 0) >= d(0, gamma 0) - d(0, z); ball is sorted by displacement.
        if (displacement(gamma) - dz > bump.radius) break;
        s += bump.eval(compose(gamma, g));
    }
    return s;
}

}  // namespace

Observable poincare_observable(const Bump& bump, const FuchsianGroup& G, int L, bool subtract_mean) {
    require(static_cast<bool>(bump.eval), "poincare_observable: empty bump");
    double need = G.domain_radius() + bump.radius;
    double have = complete_radius(G, L);
    if (have < need) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "poincare_observable: ball(%d) is complete only to radius %.4f < %.4f; larger L required", L,
                      have, need);
        throw ContractViolation(buf);
    }
    auto ball = std::make_shared<const std::vector<GroupElement>>(group_ball(G, L));
    Observable f;
    f.word_length = L;
    f.mean_zero = subtract_mean;
    f.subtracted_mean = subtract_mean ? bump.integral / (2.0 * kPi * kBolzaArea) : 0.0;
    double m = f.subtracted_mean;
    Bump bp = bump;
    f.eval = [bp, ball, m](const GroupElement& g) { return bump_series(bp, *ball, g) - m; };
    return f;
}

Observable invariant_view(const Observable& f, const FuchsianGroup& G) {
    Observable v = f;
    auto inner = f.eval;
    // The group is copied so the view owns everything it touches.
    auto grp = std::make_shared<const FuchsianGroup>(G);
    v.eval = [inner, grp](const GroupElement& g) { return inner(reduce_to_domain(*grp, g).g); };
    return v;
}

double truncation_estimate(const Bump& bump, const FuchsianGroup& G, int L, const GroupElement& g) {
    auto a = group_ball(G, L);
    auto b = group_ball(G, L + 1);
    return std::abs(bump_series(bump, b, g) - bump_series(bump, a, g));
}

double surface_proposal_radius(const FuchsianGroup& G) { return G.domain_radius() + 1e-3; }

SurfaceDraw surface_draw(const FuchsianGroup& G, std::uint64_t seed, std::uint64_t index) {
    const double R = surface_proposal_radius(G);
    const std::uint64_t stream = counter_hash(seed, index, 0x5eed);
    for (int attempt = 1;; ++attempt) {
        GroupElement g = haar_draw(R, stream, static_cast<std::uint64_t>(attempt));
        if (reduce_to_domain(G, g).iterations == 0) return SurfaceDraw{g, attempt};
        if (attempt >= 100000) throw ConfigError("surface_draw: acceptance rate below 1%");
    }
}

std::vector<GroupElement> sample_surface(const FuchsianGroup& G, long count, std::uint64_t seed) {
    require(count > 0, "sample_surface: count must be positive");
    std::vector<GroupElement> out(count);
    std::vector<int> attempts(count);
    parallel_for(count, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            SurfaceDraw d = surface_draw(G, seed, i);
            out[i] = d.g;
            attempts[i] = d.attempts;
        }
    });
    double total = 0.0;
    for (int a : attempts) total += a;
    if (count / total < 0.01) throw ConfigError("sample_surface: acceptance rate below 1%");
    return out;
}

DomainAreaEstimate domain_area(const FuchsianGroup& G, long proposals, std::uint64_t seed) {
    require(proposals > 0, "domain_area: proposals must be positive");
    const double R = surface_proposal_radius(G);
    std::vector<char> keep(proposals);
    parallel_for(proposals, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            keep[i] = reduce_to_domain(G, haar_draw(R, seed, i)).iterations == 0;
    });
    long acc = 0;
    for (char k : keep) acc += k;
    double p = static_cast<double>(acc) / proposals;
    double ball = 2.0 * kPi * (std::cosh(R) - 1.0);
    return DomainAreaEstimate{p * ball, ball * std::sqrt(p * (1.0 - p) / proposals), p};
}

MeanEstimate surface_average(const GroupFunction& f, const FuchsianGroup& G, long count, std::uint64_t seed) {
    require(count > 1, "surface_average: need at least two samples");
    std::vector<cplx> v(count);
    parallel_for(count, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) v[i] = f(surface_draw(G, seed, i).g);
    });
    cplx mean = pairwise_sum(v) / static_cast<double>(count);
    std::vector<double> dev(count);
    for (long i = 0; i < count; ++i) dev[i] = std::norm(v[i] - mean);
    double var = pairwise_sum(dev) / (count - 1);
    return MeanEstimate{mean, std::sqrt(var / count)};
}

}  // namespace horolab
