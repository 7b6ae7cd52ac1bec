#pragma once

// Billiards bounded by a coordinate leaf of a Liouville chart. The metric
// is conformal in (u,v), so reflection off a leaf is the ordinary chart
// reflection and the pencil parameter mu of a trajectory survives every
// bounce. Each trajectory therefore stays tangent to one caustic leaf,
// whose coordinate value solves a^2(u) = mu or b^2(v) = -mu.

#include <optional>
#include <string>
#include <vector>

#include "geoweb/geodesic.hpp"
#include "geoweb/metric.hpp"

namespace geoweb {

// Wall leaf wall_axis = wall_value, with the interior on the side where
// side*(coordinate - wall_value) < 0. With mirror set, the leaf at
// -wall_value bounds the table on the opposite side; that is the shape a
// two-sheeted chart needs so hyperbola-type orbits can alternate walls.
//
// Construction launches a probe fan of inward geodesics from the wall and
// requires every one of them to come back. A wall that lets probes drift
// out of the chart (EscapedChart) or wander without returning
// (EventNotFound) does not bound a billiard and is rejected here rather
// than mid-run.
class BilliardTable {
  public:
    BilliardTable(LiouvilleMetric metric, Axis wall_axis, double wall_value, int side,
                  bool mirror);

    const LiouvilleMetric& metric() const { return metric_; }
    Axis wall_axis() const { return wall_axis_; }
    double wall_value() const { return wall_value_; }
    int side() const { return side_; }
    bool mirror() const { return mirror_; }

    // Cap on the arc length of a single segment between bounces.
    double max_segment_arc = 100;

    // Integrator tolerances used for every segment and extension search.
    OdeOptions ode;

  private:
    LiouvilleMetric metric_;
    Axis wall_axis_;
    double wall_value_;
    int side_;
    bool mirror_;
};

struct BounceRecord {
    int index = 0;
    double u = 0, v = 0;            // bounce point on the wall
    double du_in = 0, dv_in = 0;    // unit-speed arrival, pointing out of the interior
    double du_out = 0, dv_out = 0;  // unit-speed departure after reflection
    double mu_in = 0;               // pencil parameter of the arriving segment
    double mu_out = 0;              // and of the departing one; equal up to roundoff
    double arc_len = 0;             // arc length of the segment ending here
    // Worst caustic miss of that segment, measured at its turning points or
    // on the chord's extension past the wall; -1 when the tangency point
    // lies outside the chart and cannot be measured.
    double tangency_residual = 0;
};

struct Caustic {
    Axis axis = Axis::V;
    double mu = 0;
    std::vector<double> values;   // every root in the chart, each residual <= 1e-12
    std::optional<double> wrap;   // chart period when the axis is periodic
};

// Chart reflection at the wall through s: the tangential component is kept,
// the normal one negated, and the result renormalized to unit speed.
// Throws NotOnWall when s is not on a wall leaf (within 1e-9) and
// TangentRay when the normal component is below 1e-10 of the chart speed.
PhasePoint reflect(const BilliardTable& t, PhasePoint s);

// Bounce loop: start on the wall pointing inward, follow the geodesic to
// the next wall crossing, reflect, repeat. One record per bounce. Throws
// EscapedChart when a segment reaches the chart boundary instead of a wall
// and EventNotFound when it exceeds max_segment_arc without returning.
std::vector<BounceRecord> run(const BilliardTable& t, PhasePoint start, int n_bounces);

// All caustic leaves of the pencil member mu inside the chart, found by a
// sign-change scan plus bisection. Throws NoCausticInChart when neither
// defining equation has a root.
Caustic caustic_of(const BilliardTable& t, double mu);

// How far the segment's turning points sit from the caustic: the worst
// distance from a recorded coordinate extremum to the nearest caustic
// value. A segment with no extremum in the caustic coordinate (the
// degenerate caustic-at-the-wall case) falls back to its extremal sampled
// coordinate and reports the closer end.
double tangency_residual(const GeodesicSegment& seg, const Caustic& c);

// One canonical JSON line {"i":...,"u":...,...}; mu is the arriving
// segment's parameter, matching arc_len and tangency_residual.
std::string bounce_jsonl_line(const BounceRecord& r);

} // namespace geoweb
