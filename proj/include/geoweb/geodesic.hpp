#pragma once

// Unit-speed geodesic flow of a Liouville metric in its conformal chart,
// with coordinate-level event detection on the dense output.

#include <optional>
#include <vector>

#include "geoweb/metric.hpp"
#include "geoweb/ode.hpp"

namespace geoweb {

struct PhasePoint {
    double u = 0, v = 0;
    double du = 0, dv = 0;
    double p = 0, q = 0;  // momenta p = Lambda*du, q = Lambda*dv

    // Rescale (du,dv) to metric unit speed and recompute momenta.
    void normalize(const LiouvilleMetric& m);
    void sync_momenta(const LiouvilleMetric& m);
};

double hamiltonian(const LiouvilleMetric& m, const PhasePoint& s);

// Time derivative of (u, v, du, dv) for the conformal-parametrization flow.
StateN<4> geodesic_rhs(const LiouvilleMetric& m, const StateN<4>& y);
StateN<4> geodesic_rhs(const LiouvilleMetric& m, const PhasePoint& s);

enum class Axis { U, V };

struct CoordinateEvent {
    Axis axis = Axis::U;
    double value = 0;
    // +1: fire when the coordinate increases through the level, -1 when it
    // decreases, 0 either way.
    int direction = 0;
};

struct IntegrateSpec {
    std::optional<CoordinateEvent> stop;
    std::vector<CoordinateEvent> stop_any;  // further stop events; first hit wins
    double max_arc = 100.0;
    bool record_extrema = false;  // log du=0 and dv=0 crossings
    OdeOptions ode;
};

struct GeodesicSegment {
    std::vector<double> t;          // arc-length samples (monotone)
    std::vector<StateN<4>> states;
    bool hit_event = false;
    int hit_index = -1;             // position in (stop, stop_any...) that fired
    PhasePoint end;                 // momenta synced, unit speed
    double arc_len = 0;
    std::vector<StateN<4>> u_extrema;  // states where du = 0
    std::vector<StateN<4>> v_extrema;  // states where dv = 0
};

// Integrates from s0 (normalized to unit speed first, so the parameter is
// arc length). Throws NumericError if the trajectory leaves the chart, or
// if a stop event was requested but not reached within max_arc.
GeodesicSegment integrate(const LiouvilleMetric& m, PhasePoint s0, const IntegrateSpec& spec);

} // namespace geoweb
