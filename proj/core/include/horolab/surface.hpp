#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "horolab/group.hpp"

namespace horolab {

using GroupFunction = std::function<cplx(const GroupElement&)>;

class FuchsianGroup {
public:
    // Generators in the disk model; inverses are added internally. The ball
    // cache is filled eagerly up to cache_length and never mutated afterwards.
    FuchsianGroup(std::string name, std::vector<GroupElement> generators, int cache_length = 3);

    const std::string& name() const { return name_; }
    const std::vector<GroupElement>& generators() const { return generators_; }
    // Generators followed by their inverses.
    const std::vector<GroupElement>& side_pairings() const { return pairings_; }
    // Largest distance from 0 to the boundary of the Dirichlet domain, sampled
    // along 4096 rays.
    double domain_radius() const { return domain_radius_; }
    int cached_length() const { return static_cast<int>(balls_.size()) - 1; }
    const std::vector<GroupElement>& cached_ball(int length) const;

    // gamma_0 gamma_1^{-1} gamma_2 gamma_3^{-1} gamma_0^{-1} gamma_1 gamma_2^{-1} gamma_3
    // for four generators; distance to the identity.
    double relation_residual() const;

    // Text form: a name line, then one "generator" line of 8 reals per generator.
    std::string serialize() const;
    static FuchsianGroup parse(const std::string& text, int cache_length = 3);

private:
    std::string name_;
    std::vector<GroupElement> generators_;
    std::vector<GroupElement> pairings_;
    std::vector<std::vector<GroupElement>> balls_;
    double domain_radius_ = 0.0;
};

// Genus-2 regular octagon group: gamma_k = R_{k pi/4} T R_{k pi/4}^{-1}, k = 0..3,
// with T the translation along the real axis by 2 arccosh(1 + sqrt 2).
FuchsianGroup bolza_group(int cache_length = 3);

// All products of at most max_word_length side pairings, deduplicated up to
// sign (matrix distance < 1e-8), sorted by d(0, gamma 0).
std::vector<GroupElement> group_ball(const FuchsianGroup& G, int max_word_length);

// Displacement d(0, gamma 0) from the matrix entries.
double displacement(const GroupElement& g);

// Smallest displacement among elements of ball(L+2) that are not in ball(L):
// every element displacing 0 by less than this lies in ball(L).
double complete_radius(const FuchsianGroup& G, int max_word_length);

struct Reduction {
    GroupElement g;      // gamma * input
    GroupElement gamma;
    int iterations = 0;
};

// Greedy descent over the side pairings until none lowers d(0, z) by more than 1e-12.
Reduction reduce_to_domain(const FuchsianGroup& G, const GroupElement& g);

// Compactly supported function on G with its support radius and the value of
// its integral over G with respect to dVol dtheta.
struct Bump {
    GroupFunction eval;
    double radius = 0.0;
    double integral = 0.0;
};

// chi(d(0,z)/rho) (1 + kappa cos theta), chi(s) = exp(1 - 1/(1 - s^2)).
// kappa = 0 gives a function of the base point only.
Bump standard_bump(double rho, double kappa = 0.0);

struct Observable {
    GroupFunction eval;
    bool mean_zero = false;
    int word_length = 0;
    double subtracted_mean = 0.0;

    cplx operator()(const GroupElement& g) const { return eval(g); }
};

// f(g) = sum over gamma in ball(L) of bump(gamma g), minus the Haar mean when
// subtract_mean is set. The mean is computed from the unfolded integral of
// the bump over G divided by the volume 2pi * area of the quotient.
// Throws if ball(L) does not cover every translate that can reach the domain.
Observable poincare_observable(const Bump& bump, const FuchsianGroup& G, int L, bool subtract_mean);

// Same series evaluated after reduction to the domain.
Observable invariant_view(const Observable& f, const FuchsianGroup& G);

// |f_{L+1}(g) - f_L(g)| for the two truncations of the same bump series.
double truncation_estimate(const Bump& bump, const FuchsianGroup& G, int L, const GroupElement& g);

// Area of the quotient from Gauss-Bonnet for genus 2.
inline constexpr double kBolzaArea = 4.0 * 3.14159265358979323846;

struct SurfaceDraw {
    GroupElement g;
    int attempts = 0;
};

// Proposal radius: slightly larger than the domain radius.
double surface_proposal_radius(const FuchsianGroup& G);

// One Haar point in the domain; pure in (seed, index).
SurfaceDraw surface_draw(const FuchsianGroup& G, std::uint64_t seed, std::uint64_t index);

std::vector<GroupElement> sample_surface(const FuchsianGroup& G, long count, std::uint64_t seed);

struct DomainAreaEstimate {
    double area;
    double stderr_area;
    double acceptance;
};
DomainAreaEstimate domain_area(const FuchsianGroup& G, long proposals, std::uint64_t seed);

struct MeanEstimate {
    cplx mean;
    double stderr_mean;
};
// Plain Monte-Carlo average of f over domain samples.
MeanEstimate surface_average(const GroupFunction& f, const FuchsianGroup& G, long count, std::uint64_t seed);

}  // namespace horolab
