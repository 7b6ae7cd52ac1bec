#include "geoweb/geodesic.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace geoweb {

void PhasePoint::normalize(const LiouvilleMetric& m) {
    double L = m.lambda(u, v);
    double s2 = L * (du * du + dv * dv);
    if (!(s2 > 0)) throw ZeroVelocity("cannot normalize a zero-velocity phase point");
    double s = std::sqrt(s2);
    du /= s;
    dv /= s;
    sync_momenta(m);
}

void PhasePoint::sync_momenta(const LiouvilleMetric& m) {
    double L = m.lambda(u, v);
    p = L * du;
    q = L * dv;
}

double hamiltonian(const LiouvilleMetric& m, const PhasePoint& s) {
    m.require_inside(s.u, s.v);
    if (s.du == 0 && s.dv == 0) throw ZeroVelocity("hamiltonian of a zero-velocity phase point");
    return 0.5 * m.lambda(s.u, s.v) * (s.du * s.du + s.dv * s.dv);
}

StateN<4> geodesic_rhs(const LiouvilleMetric& m, const StateN<4>& y) {
    double phi_u, phi_v;
    m.phi(y[0], y[1], phi_u, phi_v);
    double du = y[2], dv = y[3];
    double d2 = du * du - dv * dv;
    return {du, dv, -phi_u * d2 - 2 * phi_v * du * dv, phi_v * d2 - 2 * phi_u * du * dv};
}

StateN<4> geodesic_rhs(const LiouvilleMetric& m, const PhasePoint& s) {
    m.require_inside(s.u, s.v);
    return geodesic_rhs(m, StateN<4>{s.u, s.v, s.du, s.dv});
}

GeodesicSegment integrate(const LiouvilleMetric& m, PhasePoint s0, const IntegrateSpec& spec) {
    m.require_inside(s0.u, s0.v);
    s0.normalize(m);
    const Chart& ch = m.chart();

    std::vector<CoordinateEvent> events;
    if (spec.stop) events.push_back(*spec.stop);
    events.insert(events.end(), spec.stop_any.begin(), spec.stop_any.end());

    for (const CoordinateEvent& ev : events) {
        bool reachable = ev.axis == Axis::U
                             ? (ev.value > ch.u_min && ev.value < ch.u_max)
                             : (ch.v_period || (ev.value > ch.v_min && ev.value < ch.v_max));
        if (!reachable)
            throw EventNotFound("event level " + std::to_string(ev.value) +
                                " lies outside the chart");
    }

    GeodesicSegment seg;
    std::vector<Watcher<4>> ws;
    const int n_events = static_cast<int>(events.size());

    for (const CoordinateEvent& ev : events) {
        Watcher<4> w;
        if (ev.axis == Axis::V && ch.v_period) {
            // Wrapped level: sin vanishes exactly at v = c + k*period, but
            // its slope alternates with k, so direction is checked on dv
            // in the acceptance filter instead.
            double P = *ch.v_period;
            double c = ev.value;
            int want = ev.direction;
            w.level = [P, c](const StateN<4>& y) {
                return std::sin(std::numbers::pi * (y[1] - c) / P);
            };
            w.direction = 0;
            w.accept = [P, c, want](double, const StateN<4>& y) {
                if (std::abs(std::remainder(y[1] - c, P)) > 1e-9) return false;
                return want == 0 || (want > 0 ? y[3] > 0 : y[3] < 0);
            };
        } else {
            int axis = ev.axis == Axis::U ? 0 : 1;
            double c = ev.value;
            w.level = [axis, c](const StateN<4>& y) { return y[axis] - c; };
            w.direction = ev.direction;
        }
        w.stop = true;
        ws.push_back(std::move(w));
    }

    int wall_begin = static_cast<int>(ws.size());
    auto add_wall = [&ws](int axis, double c) {
        Watcher<4> w;
        w.level = [axis, c](const StateN<4>& y) { return y[axis] - c; };
        w.stop = true;
        ws.push_back(std::move(w));
    };
    add_wall(0, ch.u_min);
    add_wall(0, ch.u_max);
    if (!ch.v_period) {
        add_wall(1, ch.v_min);
        add_wall(1, ch.v_max);
    }
    int wall_end = static_cast<int>(ws.size());

    if (spec.record_extrema) {
        Watcher<4> wu;
        wu.level = [](const StateN<4>& y) { return y[2]; };
        wu.stop = false;
        wu.record = [&seg](double, const StateN<4>& y) { seg.u_extrema.push_back(y); };
        ws.push_back(std::move(wu));
        Watcher<4> wv;
        wv.level = [](const StateN<4>& y) { return y[3]; };
        wv.stop = false;
        wv.record = [&seg](double, const StateN<4>& y) { seg.v_extrema.push_back(y); };
        ws.push_back(std::move(wv));
    }

    StateN<4> y0{s0.u, s0.v, s0.du, s0.dv};
    auto rhs = [&m](const StateN<4>& y, StateN<4>& dydt, double) { dydt = geodesic_rhs(m, y); };
    auto outcome = integrate_watched<4>(rhs, y0, 0.0, spec.max_arc, spec.ode, ws,
                                        [&seg](double t, const StateN<4>& y) {
                                            seg.t.push_back(t);
                                            seg.states.push_back(y);
                                        });

    if (outcome.watcher >= wall_begin && outcome.watcher < wall_end)
        throw LeftChart("trajectory reached the chart boundary at arc length " +
                        std::to_string(outcome.t));
    if (n_events > 0 && (outcome.watcher < 0 || outcome.watcher >= n_events))
        throw EventNotFound("stop event not reached within arc length " +
                            std::to_string(spec.max_arc));

    seg.hit_event = n_events > 0 && outcome.watcher >= 0 && outcome.watcher < n_events;
    seg.hit_index = seg.hit_event ? outcome.watcher : -1;
    seg.arc_len = outcome.t;
    seg.end.u = outcome.y[0];
    seg.end.v = outcome.y[1];
    seg.end.du = outcome.y[2];
    seg.end.dv = outcome.y[3];
    seg.end.normalize(m);
    return seg;
}

} // namespace geoweb
