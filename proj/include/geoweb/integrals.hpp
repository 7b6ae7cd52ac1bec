#pragma once

// The quadratic first integral I0 of a Liouville metric, the pencil
// I_mu = mu*g + I0, extraction of the conserved parameter mu from a
// direction, the two net directions belonging to a pencil member, and the
// Clairaut momentum of the linear-integral normal form E(v)du^2 + dv^2.

#include <functional>
#include <utility>

#include "geoweb/geodesic.hpp"
#include "geoweb/metric.hpp"

namespace geoweb {

// I0(s) = [a^2+b^2] * (b^2 du^2 - a^2 dv^2).
double I0_eval(const LiouvilleMetric& m, const PhasePoint& s);

// g(s) = Lambda (du^2 + dv^2), the metric as a quadratic form.
double metric_eval(const LiouvilleMetric& m, const PhasePoint& s);

// I_mu(s) = mu * g(s) + I0(s).
double pencil_eval(const LiouvilleMetric& m, double mu, const PhasePoint& s);

// The unique mu with I_mu(s) = 0: mu = -(b^2 du^2 - a^2 dv^2)/(du^2 + dv^2).
// Invariant under rescaling of the velocity.
double mu_of_direction(const LiouvilleMetric& m, const PhasePoint& s);

struct Direction {
    double du, dv;
};

// The two directions (sqrt(a^2-mu), -/+ sqrt(b^2+mu)) of the net labelled
// by mu. Radicands in (-1e-12, 0) are clamped to zero (caustic tangency);
// anything lower throws ComplexDirections.
std::pair<Direction, Direction> net_directions(const LiouvilleMetric& m, double u, double v,
                                               double mu);

// Pointwise quadratic form A du^2 + 2B du dv + C dv^2.
struct QuadForm {
    double A = 0, B = 0, C = 0;
};
using QuadFormField = std::function<QuadForm(double, double)>;

// Shift amount mu* such that mu* H + I2 has two distinct real root
// directions near (u,v): the binary-quadratic discriminant is strictly
// positive on a 9-point stencil. Returns 0 when I2 already qualifies;
// otherwise scans a signed geometric grid of shifts and returns the one
// with the largest worst-case discriminant.
double real_root_normalize(const LiouvilleMetric& m, const QuadFormField& I2, double u, double v);

// Conserved momentum p = E(v) du of the u-translation symmetry.
double clairaut_eval(const ClairautMetric& cm, const PhasePoint& s);

// Geodesic of E(v)du^2 + dv^2 from s0 (normalized to unit speed), for the
// conservation checks. Chart walls behave as in the Liouville integrator.
GeodesicSegment clairaut_geodesic(const ClairautMetric& cm, PhasePoint s0, double max_arc);

} // namespace geoweb
