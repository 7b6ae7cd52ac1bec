#pragma once

// The surface family z^3 y'' = eps (y')^3 and its dual-space picture.
// Unparametrized geodesics are the conics k^2(y-l)^2 - k z^2 = eps, so a
// geodesic is a point [A:B:C:D] on the quadric AC - B^2 + eps D^2 = 0 in
// dual projective 3-space. Surface points become planes there, plane
// sections of the quadric become conics, and the billiard between a wall
// and the special section D=0 turns into a Poncelet-style map: step from
// one quadric point to the next along planes tangent to two fixed
// sections. This header carries the closed forms, the dual conics, the
// cone-of-common-tangents fit, and the rotation-number machinery.

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "geoweb/errors.hpp"

namespace geoweb {

struct EpsSurface {
    int eps;              // +1 or -1, exactly
    double z_min = 1e-6;  // chart floor: the surface lives in z > z_min

    explicit EpsSurface(int e, double zmin = 1e-6);
};

// Scale so the largest-magnitude component becomes +1 (first such index
// on ties). Canonical representative of a projective point or plane.
Eigen::Vector4d normalize_h(const Eigen::Vector4d& x);

// Distance between projective points (resp. planes) as min over the sign
// choice, after max-abs (resp. unit) normalization.
double point_gap(const Eigen::Vector4d& x, const Eigen::Vector4d& y);
double plane_gap(const Eigen::Vector4d& p, const Eigen::Vector4d& q);

// Matrix of the quadric AC - B^2 + eps D^2 as a symmetric bilinear form.
Eigen::Matrix4d quadric_matrix(int eps);

// A few Newton steps along the gradient pull x back onto the quadric;
// result is normalize_h'd. Keeps drift from compounding over long orbits.
Eigen::Vector4d project_to_quadric(Eigen::Vector4d x, const Eigen::Matrix4d& Q);

// Geodesic through (z, y) with slope dy/dz: either the conic labelled
// (k, l) or the special horizontal line y = l.
struct EpsGeodesic {
    bool special = false;  // y = l for all z
    double k = 0;
    double l = 0;
};

EpsGeodesic geodesic_through(const EpsSurface& s, double z, double y, double slope);

// [k^2 : -k^2 l : k^2 l^2 - eps : -k], the dual point of a regular
// geodesic; lies on the quadric identically.
Eigen::Vector4d dual_point(double k, double l, int eps);

// [1 : -l0 : l0^2 : 0], the dual point of the special line y = l0.
Eigen::Vector4d dual_point_special(double l0);

// Covector (y^2, 2y, 1, z^2): a dual point lies on this plane exactly when
// its geodesic passes through (z, y). The zeta overload frees the last
// slot from z^2 > 0 for dual-space constructions.
Eigen::Vector4d incidence_plane(double z, double y);
Eigen::Vector4d incidence_plane_zeta(double y, double zeta);

// Plane section of the quadric with its induced 3x3 quadratic form, the
// dual (adjugate) form for tangency tests, and a chord parametrization
// through a fixed real point. Degenerate sections are rejected.
class Conic {
  public:
    Conic(const Eigen::Vector4d& plane, const Eigen::Matrix4d& Q);

    const Eigen::Vector4d& plane() const { return plane_; }
    const Eigen::Matrix<double, 4, 3>& basis() const { return B_; }
    const Eigen::Matrix3d& section() const { return M_; }
    const Eigen::Matrix3d& dual() const { return A_; }

    // Angle in [0, pi) of the chord from the parametrization base point to
    // x; inverts point_at up to the conic's rational parametrization.
    double theta_of(const Eigen::Vector4d& x) const;
    Eigen::Vector4d point_at(double phi) const;

  private:
    void ensure_param() const;

    Eigen::Vector4d plane_;
    Eigen::Matrix<double, 4, 3> B_;
    Eigen::Matrix3d M_;
    Eigen::Matrix3d A_;
    mutable bool have_param_ = false;
    mutable Eigen::Vector3d s0_;
    mutable Eigen::Matrix<double, 3, 2> W_;
};

struct SectionTangency {
    double residual = 0;      // dual form of c on the line pi cut on c's plane
    Eigen::Vector4d point;    // the (near-)tangency point of that line
};

// Residual is zero exactly when the section by pi is tangent to c; the
// point is where the cut line touches (or comes closest to) the conic.
SectionTangency section_tangency(const Conic& c, const Eigen::Vector4d& pi);

// Degenerate (cone) members of the pencil Q - lambda * sym(p0 pw^T):
// vertex direction and a kernel-quality ratio for each real lambda.
struct ConeMember {
    double lambda = 0;
    Eigen::Vector4d vertex;
    double kernel_quality = 0;  // smallest/largest singular value of the member
};

std::vector<ConeMember> cone_members(const Eigen::Matrix4d& Q, const Eigen::Vector4d& p0,
                                     const Eigen::Vector4d& pw);

// All real planes through the quadric point l whose sections are tangent
// to both conics, found by degenerating the induced pencil on the plane
// bundle and polished by Newton on the two tangency conditions.
std::vector<Eigen::Vector4d> both_tangent_planes(const Eigen::Vector4d& l, const Conic& c0,
                                                 const Conic& cw);

// Real zeta values making incidence_plane_zeta(y, zeta) tangent to cw:
// where the vertical line of planes over y meets cw's tangent planes.
std::vector<double> wall_tangent_zetas(const Conic& cw, double y);

// Up to count wall-tangent planes from the single family through the
// given cone apex, swept over surface heights. The two zeta roots at a
// height belong to different cones; mixing them breaks concurrency.
std::vector<Eigen::Vector4d> wall_plane_family(const Conic& cw, const Eigen::Vector4d& vertex,
                                               int count);

// Line through the two tangency points of one wall plane.
struct VertexLine {
    Eigen::Vector4d a, b;
};

VertexLine tangency_line(const Conic& c0, const Conic& cw, const Eigen::Vector4d& pi);

struct ConeFit {
    Eigen::Vector4d vertex;
    double spread = 0;  // worst sine of the angle from the vertex to a line
};

// Least-squares common point of the lines (no tolerance applied); fewer
// than 3 lines throws InsufficientSamples.
ConeFit fit_cone_vertex(const std::vector<VertexLine>& lines);

// Same fit, but a spread above the tolerance throws NoConcurrency.
ConeFit cone_vertex(const std::vector<VertexLine>& lines, double spread_tol = 1e-6);

// The two fixed sections of one billiard: the special section c0 (plane
// D=0), the orbit section c_I, and the wall section c_w.
struct PonceletSystem {
    int eps;
    Eigen::Matrix4d Q;
    Conic c0, cI, cw;

    PonceletSystem(int e, const Eigen::Vector4d& pI, const Eigen::Vector4d& pw);
};

struct DualBilliardState {
    Eigen::Vector4d l;      // current quadric point on c_I
    Eigen::Vector4d plane;  // current common tangent plane through l
};

// Orbit start: the two common tangent planes through c_I(phi) sorted
// canonically; orient picks one of them.
DualBilliardState orbit_start(const PonceletSystem& sys, double phi, int orient);

// One step: the other common tangent plane through l, then the second
// intersection of its trace with c_I.
DualBilliardState poncelet_step(const PonceletSystem& sys, const DualBilliardState& st);

// Exact inverse of poncelet_step: back along the current plane's trace,
// then swap to the other tangent plane through the recovered point.
DualBilliardState poncelet_reverse(const PonceletSystem& sys, const DualBilliardState& st);

// Parameter of the wall-tangency point of the state's plane on c_w.
double wall_parameter(const PonceletSystem& sys, const DualBilliardState& st);

// Average advance of the wall-tangency parameter per step, in units of a
// half turn, estimated with a weighted Birkhoff mean over n_steps >= 100.
double rotation_number(const PonceletSystem& sys, double phi0, int orient, int n_steps);

// min(rho, 1-rho): rotation number independent of the travel direction.
double normalized_rotation(double rho);

// Numeric integration of z^3 y'' = eps (y')^3 as a curve over z, sampled
// at the integrator's steps; endpoint checked against the closed form by
// the tests. Throws LeftChart when the path dips below z_min.
struct EpsCurvePoint {
    double z, y, slope;
};

std::vector<EpsCurvePoint> integrate_eps_geodesic(const EpsSurface& s, double z0, double y0,
                                                  double slope, double dz);

} // namespace geoweb
