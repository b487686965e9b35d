#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace horolab {

using cplx = std::complex<double>;

enum class Model { UpperHalfPlane, Disk };

// Unit-determinant 2x2 complex matrix, defined up to sign.
// In the Disk model the entries have the SU(1,1) shape [[a, b], [conj(b), conj(a)]].
class GroupElement {
public:
    GroupElement() : GroupElement(identity(Model::Disk)) {}
    GroupElement(cplx a, cplx b, cplx c, cplx d, Model model);

    static GroupElement identity(Model model = Model::Disk);

    cplx a() const { return a_; }
    cplx b() const { return b_; }
    cplx c() const { return c_; }
    cplx d() const { return d_; }
    Model model() const { return model_; }
    cplx det() const { return a_ * d_ - b_ * c_; }

private:
    cplx a_, b_, c_, d_;
    Model model_;
};

GroupElement compose(const GroupElement& g1, const GroupElement& g2);
GroupElement invert(const GroupElement& g);
inline GroupElement operator*(const GroupElement& g1, const GroupElement& g2) { return compose(g1, g2); }

// min over the sign of the entrywise max-norm of the difference.
double projective_distance(const GroupElement& g, const GroupElement& h);
bool projective_equal(const GroupElement& g, const GroupElement& h, double tol = 1e-12);

// Cayley map between models: disk element = C g C^{-1}, C = [[1,-i],[1,i]]/sqrt(2i).
GroupElement to_disk(const GroupElement& g);
GroupElement to_half_plane(const GroupElement& g);
GroupElement cayley_matrix();

enum class Subgroup { A, N, Nbar, K };

// a_t = diag(e^{t/2}, e^{-t/2}), n_u = [[1,u],[0,1]], nbar_v = [[1,0],[v,1]],
// k_theta = [[cos th/2, sin th/2],[-sin th/2, cos th/2]] in the half-plane model.
GroupElement subgroup_element(Subgroup kind, double param, Model model = Model::Disk);

struct DiskPoint {
    cplx value;
    explicit DiskPoint(cplx z);
};

struct BoundaryPoint {
    cplx value;
    explicit BoundaryPoint(cplx b);
    static BoundaryPoint from_angle(double phi);
};

// (az+b)/(cz+d). A vanishing denominator sends the point to the designated
// boundary value: infinity is encoded as 1 in the disk chart.
cplx mobius_apply(const GroupElement& g, cplx p);
DiskPoint mobius_apply(const GroupElement& g, const DiskPoint& p);
BoundaryPoint mobius_apply(const GroupElement& g, const BoundaryPoint& p);

// Distance for ds^2 = 4|dz|^2/(1-|z|^2)^2.
double hyperbolic_distance(cplx z, cplx w);
inline double hyperbolic_distance(const DiskPoint& z, const DiskPoint& w) {
    return hyperbolic_distance(z.value, w.value);
}
double distance_from_origin(cplx z);

// Frame chart: base point z and angle theta in [0, 2pi), theta = 0 being the
// direction of the geodesic from z toward the boundary point 1.
struct Frame {
    cplx z;
    double theta;
};

// Horocyclic chart: base point and forward endpoint of the geodesic.
struct HoroCoord {
    cplx z;
    cplx b;
};

// [[1, z], [conj z, 1]] / sqrt(1 - |z|^2): hyperbolic translation taking 0 to z.
GroupElement translation_to(cplx z);
// diag(e^{i phi/2}, e^{-i phi/2}).
GroupElement disk_rotation(double phi);

Frame to_frame(const GroupElement& g);
GroupElement from_frame(const Frame& f);
HoroCoord to_horo_coords(const GroupElement& g);
GroupElement from_horo(const HoroCoord& h);
GroupElement from_horo(cplx z, cplx b);

// Base point g(0) of a disk-model element.
cplx base_point(const GroupElement& g);
// Forward endpoint g(1) of a disk-model element.
cplx forward_endpoint(const GroupElement& g);

// Haar draw with base point uniform in hyperbolic area on the ball of the
// given radius and theta uniform. Pure in (radius, seed, index).
GroupElement haar_draw(double ball_radius, std::uint64_t seed, std::uint64_t index);

std::vector<GroupElement> haar_sample(double ball_radius, long count, std::uint64_t seed);

// Rejection-rate estimate of the hyperbolic area of the ball.
struct AreaEstimate {
    double area;
    double stderr_area;
    long accepted;
    long proposed;
};
AreaEstimate haar_ball_area(double ball_radius, long proposals, std::uint64_t seed);

}  // namespace horolab

namespace horolab {

// Symmetrized group commutator of the right-action flows,
// (log C(h) + log C(-h)) / (2 h^2) with C(h) = e^{hX} e^{hY} e^{-hX} e^{-hY},
// compared with the expected bracket; max-norm residuals for the three pairs
// [H,X+] = X+, [H,X-] = -X-, [X+,X-] = 2H. Computed in long double.
struct BracketResiduals {
    double H_Xp = 0.0;
    double H_Xm = 0.0;
    double Xp_Xm = 0.0;
    double max() const;
};
BracketResiduals lie_bracket_residuals(double h);

}  // namespace horolab
