#include "geoweb/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace geoweb {

double I0_eval(const LiouvilleMetric& m, const PhasePoint& s) {
    m.require_inside(s.u, s.v);
    double av = m.a().value(s.u), bv = m.b().value(s.v);
    double a2 = av * av, b2 = bv * bv;
    return (a2 + b2) * (b2 * s.du * s.du - a2 * s.dv * s.dv);
}

double metric_eval(const LiouvilleMetric& m, const PhasePoint& s) {
    m.require_inside(s.u, s.v);
    return m.lambda(s.u, s.v) * (s.du * s.du + s.dv * s.dv);
}

double pencil_eval(const LiouvilleMetric& m, double mu, const PhasePoint& s) {
    return mu * metric_eval(m, s) + I0_eval(m, s);
}

double mu_of_direction(const LiouvilleMetric& m, const PhasePoint& s) {
    m.require_inside(s.u, s.v);
    double n2 = s.du * s.du + s.dv * s.dv;
    if (!(n2 > 0)) throw ZeroVelocity("mu is undefined for a zero velocity");
    double av = m.a().value(s.u), bv = m.b().value(s.v);
    double a2 = av * av, b2 = bv * bv;
    return -(b2 * s.du * s.du - a2 * s.dv * s.dv) / n2;
}

std::pair<Direction, Direction> net_directions(const LiouvilleMetric& m, double u, double v,
                                               double mu) {
    m.require_inside(u, v);
    double av = m.a().value(u), bv = m.b().value(v);
    double ra2 = av * av - mu;
    double rb2 = bv * bv + mu;
    auto clamp = [](double r, const char* which) {
        if (r < -1e-12)
            throw ComplexDirections(std::string("radicand ") + which + " = " +
                                    std::to_string(r) + " is negative");
        return r < 0 ? 0.0 : r;
    };
    double ra = std::sqrt(clamp(ra2, "a^2-mu"));
    double rb = std::sqrt(clamp(rb2, "b^2+mu"));
    return {Direction{ra, -rb}, Direction{ra, rb}};
}

double real_root_normalize(const LiouvilleMetric& m, const QuadFormField& I2, double u, double v) {
    m.require_inside(u, v);
    QuadForm f0 = I2(u, v);
    double scale = std::max({std::abs(f0.A), std::abs(f0.B), std::abs(f0.C)});
    if (scale == 0) throw ProportionalToMetric("integral vanishes at the point");
    if (std::abs(f0.B) <= 1e-12 * scale && std::abs(f0.A - f0.C) <= 1e-12 * scale)
        throw ProportionalToMetric("integral is a multiple of the metric at the point");

    const Chart& ch = m.chart();
    double h = 1e-3 * std::min(ch.u_max - ch.u_min, ch.v_max - ch.v_min);
    auto min_disc = [&](double mu) {
        double worst = std::numeric_limits<double>::infinity();
        for (int i = -1; i <= 1; ++i) {
            for (int j = -1; j <= 1; ++j) {
                double uu = u + i * h, vv = v + j * h;
                QuadForm f = I2(uu, vv);
                // mu*H adds (mu Lambda/2)(du^2+dv^2) to the form
                double half = 0.5 * mu * m.lambda(uu, vv);
                double A = f.A + half, C = f.C + half;
                worst = std::min(worst, f.B * f.B - A * C);
            }
        }
        return worst;
    };

    if (min_disc(0) > 0) return 0;

    double base = scale / (0.5 * m.lambda(u, v));
    double best_mu = 0, best = 0;
    for (int k = -26; k <= 26; ++k) {
        for (double sgn : {1.0, -1.0}) {
            double mu = sgn * base * std::ldexp(1.0, k);
            double d = min_disc(mu);
            if (d > best) {
                best = d;
                best_mu = mu;
            }
        }
    }
    if (best <= 0)
        throw ProportionalToMetric("no shift gives distinct real roots near the point");
    return best_mu;
}

double clairaut_eval(const ClairautMetric& cm, const PhasePoint& s) {
    if (!cm.chart.contains(s.u, s.v))
        throw OutOfChart("point (" + std::to_string(s.u) + ", " + std::to_string(s.v) +
                         ") is outside the chart");
    return cm.momentum(s.v, s.du);
}

GeodesicSegment clairaut_geodesic(const ClairautMetric& cm, PhasePoint s0, double max_arc) {
    if (!cm.chart.contains(s0.u, s0.v))
        throw OutOfChart("start point is outside the chart");
    double E0 = cm.E.value(s0.v);
    if (!(E0 > 0)) throw DomainError("metric coefficient E must be positive");
    double s2 = E0 * s0.du * s0.du + s0.dv * s0.dv;
    if (!(s2 > 0)) throw ZeroVelocity("cannot normalize a zero-velocity phase point");
    double sc = std::sqrt(s2);
    s0.du /= sc;
    s0.dv /= sc;

    const Chart& ch = cm.chart;
    std::vector<Watcher<4>> ws;
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

    auto rhs = [&cm](const StateN<4>& y, StateN<4>& dydt, double) {
        Jet3 Ej = cm.E.jet(y[1]);
        if (!(Ej.v > 0)) throw DomainError("metric coefficient E must be positive");
        double du = y[2], dv = y[3];
        dydt = {du, dv, -(Ej.d1 / Ej.v) * du * dv, 0.5 * Ej.d1 * du * du};
    };

    GeodesicSegment seg;
    StateN<4> y0{s0.u, s0.v, s0.du, s0.dv};
    OdeOptions opts;
    auto outcome = integrate_watched<4>(rhs, y0, 0.0, max_arc, opts, ws,
                                        [&seg](double t, const StateN<4>& y) {
                                            seg.t.push_back(t);
                                            seg.states.push_back(y);
                                        });
    if (outcome.watcher >= 0)
        throw LeftChart("trajectory reached the chart boundary at arc length " +
                        std::to_string(outcome.t));
    seg.arc_len = outcome.t;
    seg.end.u = outcome.y[0];
    seg.end.v = outcome.y[1];
    seg.end.du = outcome.y[2];
    seg.end.dv = outcome.y[3];
    seg.end.p = cm.E.value(seg.end.v) * seg.end.du;
    seg.end.q = seg.end.dv;
    return seg;
}

} // namespace geoweb
