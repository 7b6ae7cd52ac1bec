#pragma once

// Geodesic nets and their bisector webs in conformal coordinates.
//
// A web is presented by three scalar fields on a chart: the bisector slope
// datum T (leaf slopes -T and 1/T), the net parameter P (the two net
// foliations have slopes tan(atan P -+ atan T)), and the conformal exponent
// lambda of the metric e^{2 lambda}(dx^2 + dy^2).  For a geodesic net these
// satisfy a first-order system in (T, lambda); pde_residuals measures how far
// a candidate web is from it, connection_and_curvature evaluates the web
// connection and its curvature K_B, and hexagon_defect measures Thomsen
// closure directly.

#include <functional>
#include <utility>

#include "geoweb/geodesic.hpp"
#include "geoweb/jet.hpp"
#include "geoweb/metric.hpp"

namespace geoweb {

struct WebFields {
    Chart chart;
    // Each evaluator returns value and derivatives through second order.
    std::function<Taylor2(double, double)> T;
    std::function<Taylor2(double, double)> P;
    std::function<Taylor2(double, double)> lambda;
};

struct PdeResiduals {
    double r_Px;    // defect of the P_x compatibility equation
    double r_Py;    // defect of the P_y compatibility equation
    double r_flat;  // conformal-flatness defect of T
};

struct ConnectionSample {
    double alpha;
    double beta;
    double K_B;  // curvature of the web connection alpha dx + beta dy
};

// Principal geodesic net of a Liouville metric: T = 0 (the bisectors are the
// coordinate lines, with the v = const family playing the role of -T leaves),
// P = b(v)/a(u), lambda = log(a^2 + b^2) / 2.
WebFields liouville_web(const LiouvilleMetric& m);

// Control family: same bisectors and conformal factor, but the net parameter
// nudged off the geodesic family to P + delta*u*v.
WebFields perturbed_web(const LiouvilleMetric& m, double delta);

// The perturbed net re-equipped with its true bisectors.  Writing
// psi = atan P and psi~ = atan(P + delta*u*v), the fields become
// T = -tan((psi~ - psi)/2) and P = tan((psi~ + psi)/2), so the three
// foliations are the two perturbed-net families and their genuine bisector.
WebFields rebisected_web(const LiouvilleMetric& m, double delta);

PdeResiduals pde_residuals(const WebFields& w, double x, double y);

// Throws ZeroP where the net parameter vanishes.  K_B is assembled
// analytically in gradient arithmetic; no finite differences involved.
ConnectionSample connection_and_curvature(const WebFields& w, double x, double y);

// Thomsen closure defect of the 3-web {net+, net-, bisector} around (cx, cy):
// walk six alternating legs between the reference leaves through the center,
// starting on the bisector leaf at arc eps, and return |end - start|.  Leaves
// are traced in long double with fixed-step RK4 (h = eps / steps_per_eps) and
// intersections refined on quintic Hermite interpolants, so the measurement
// floor decays faster than the cubic defect of a non-hexagonal web.
double hexagon_defect(const WebFields& w, double cx, double cy, double eps,
                      int steps_per_eps = 16);

// Coordinates (U, V) = (int du/a, int dv/b) taken from the chart midpoint by
// adaptive quadrature.  They straighten all four foliations: u = const and
// v = const become vertical and horizontal lines, the net leaves the
// diagonals U -+ V = const.
std::pair<double, double> linearize(const LiouvilleMetric& m, double u, double v);

// Cross-ratio of the four foliation directions pushed through the
// linearizing differential at (u, v), in the order (u = const, v = const,
// net+, net-).  Equals -1 identically.
double direction_cross_ratio(const LiouvilleMetric& m, double u, double v);

// Quadratic integral in momentum form, I2 = (q - Pp)(q + Pp) / (1 + P^2).
// Constant along geodesics of the metric the web was built from.
double net_integral(const WebFields& w, const PhasePoint& s);

} // namespace geoweb
