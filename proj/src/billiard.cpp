#include "geoweb/billiard.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "geoweb/integrals.hpp"

namespace geoweb {

namespace {

// Outward-crossing stop events for the wall pair. At the wall on side s of
// the interior, leaving means the coordinate moves with sign -side there.
std::vector<CoordinateEvent> wall_events(const BilliardTable& t) {
    int dir = t.side() == -1 ? +1 : -1;
    std::vector<CoordinateEvent> evs{{t.wall_axis(), t.wall_value(), dir}};
    if (t.mirror()) evs.push_back({t.wall_axis(), -t.wall_value(), -dir});
    return evs;
}

// Distance from a coordinate to the nearest wall leaf, reduced by the
// chart period when the wall coordinate wraps.
double wall_gap(const BilliardTable& t, double coord, double* nearest = nullptr) {
    const Chart& ch = t.metric().chart();
    bool wraps = t.wall_axis() == Axis::V && ch.v_period.has_value();
    auto gap = [&](double w) {
        double d = coord - w;
        if (wraps) d = std::remainder(d, *ch.v_period);
        return std::abs(d);
    };
    double best = gap(t.wall_value());
    if (nearest) *nearest = t.wall_value();
    if (t.mirror()) {
        double g = gap(-t.wall_value());
        if (g < best) {
            best = g;
            if (nearest) *nearest = -t.wall_value();
        }
    }
    return best;
}

GeodesicSegment next_segment(const BilliardTable& t, const PhasePoint& s) {
    IntegrateSpec spec;
    spec.stop_any = wall_events(t);
    spec.record_extrema = true;
    spec.max_arc = t.max_segment_arc;
    spec.ode = t.ode;
    try {
        return integrate(t.metric(), s, spec);
    } catch (const LeftChart& e) {
        throw EscapedChart(std::string("billiard segment left the chart: ") + e.what());
    }
}

double caustic_distance(const Caustic& c, double x) {
    double best = std::numeric_limits<double>::infinity();
    for (double r : c.values) {
        double d = x - r;
        if (c.wrap) d = std::remainder(d, *c.wrap);
        best = std::min(best, std::abs(d));
    }
    return best;
}

// First turning point of coordinate k on the flow continued from `from`,
// walked in short chunks so the chart edge cuts the search off cleanly.
std::optional<double> extension_extremum(const LiouvilleMetric& m, PhasePoint from, int k,
                                          const OdeOptions& ode) {
    IntegrateSpec spec;
    spec.record_extrema = true;
    spec.max_arc = 4.0;
    spec.ode = ode;
    PhasePoint s = from;
    // Keep walking until the chart ends; the cap only guards charts so wide
    // (or periodic coordinates) that no turn ever shows up.
    for (int chunk = 0; chunk < 60; ++chunk) {
        GeodesicSegment seg;
        try {
            seg = integrate(m, s, spec);
        } catch (const LeftChart&) {
            return std::nullopt;
        }
        const auto& ext = k == 0 ? seg.u_extrema : seg.v_extrema;
        if (!ext.empty()) return ext.front()[k];
        s = seg.end;
    }
    return std::nullopt;
}

// A segment that crosses the chart without turning is tangent to its
// caustic on the extension of the chord, so look for the turn past either
// wall. A chord running nearly parallel to a caustic asymptote touches it
// arbitrarily far out; when the turn is not inside the chart the residual
// is reported as -1 rather than a misleading endpoint distance.
double segment_residual(const BilliardTable& t, const GeodesicSegment& seg,
                        const PhasePoint& seg_start, const Caustic& c) {
    int k = c.axis == Axis::U ? 0 : 1;
    const auto& ext = k == 0 ? seg.u_extrema : seg.v_extrema;
    if (!ext.empty()) return tangency_residual(seg, c);
    if (auto x = extension_extremum(t.metric(), seg.end, k, t.ode)) return caustic_distance(c, *x);
    PhasePoint back{seg_start.u, seg_start.v, -seg_start.du, -seg_start.dv};
    if (auto x = extension_extremum(t.metric(), back, k, t.ode)) return caustic_distance(c, *x);
    return -1;
}

} // namespace

BilliardTable::BilliardTable(LiouvilleMetric metric, Axis wall_axis, double wall_value,
                             int side, bool mirror)
    : metric_(std::move(metric)),
      wall_axis_(wall_axis),
      wall_value_(wall_value),
      side_(side),
      mirror_(mirror) {
    if (side_ != -1 && side_ != 1)
        throw MalformedArtifact("billiard side must be -1 or +1");
    const Chart& ch = metric_.chart();
    auto inside = [&](double w) {
        return wall_axis_ == Axis::U ? (w > ch.u_min && w < ch.u_max)
                                     : (ch.v_period || (w > ch.v_min && w < ch.v_max));
    };
    if (!inside(wall_value_))
        throw OutOfChart("wall leaf lies outside the chart");
    if (mirror_ && (!inside(-wall_value_) || wall_value_ == 0))
        throw OutOfChart("mirrored wall leaf lies outside the chart");

    // Probe fan: three wall points, three launch angles off the wall
    // tangent, both walls when mirrored. sin(theta) > 0 keeps every probe
    // strictly inward.
    double lo, hi;
    if (wall_axis_ == Axis::U) {
        lo = ch.v_min;
        hi = ch.v_period ? ch.v_min + *ch.v_period : ch.v_max;
    } else {
        lo = ch.u_min;
        hi = ch.u_max;
    }
    const double fracs[3] = {0.18, 0.47, 0.81};
    const double angles[3] = {20.0, 90.0, 160.0};
    const int n_walls = mirror_ ? 2 : 1;
    for (int wi = 0; wi < n_walls; ++wi) {
        double w = wi == 0 ? wall_value_ : -wall_value_;
        int in_sign = wi == 0 ? side_ : -side_;
        for (double f : fracs) {
            double along = lo + f * (hi - lo);
            for (double deg : angles) {
                double th = deg * std::numbers::pi / 180.0;
                PhasePoint s;
                if (wall_axis_ == Axis::U) {
                    s = {w, along, in_sign * std::sin(th), std::cos(th)};
                } else {
                    s = {along, w, std::cos(th), in_sign * std::sin(th)};
                }
                try {
                    next_segment(*this, s);
                } catch (const EventNotFound&) {
                    throw EventNotFound("probe fan did not return to the wall; "
                                        "the leaf does not bound a billiard");
                }
            }
        }
    }
}

PhasePoint reflect(const BilliardTable& t, PhasePoint s) {
    int k = t.wall_axis() == Axis::U ? 0 : 1;
    double coord = k == 0 ? s.u : s.v;
    if (wall_gap(t, coord) > 1e-9)
        throw NotOnWall("phase point does not sit on a wall leaf");
    double speed = std::hypot(s.du, s.dv);
    double normal = k == 0 ? s.du : s.dv;
    if (std::abs(normal) < 1e-10 * speed)
        throw TangentRay("ray is tangent to the wall");
    if (k == 0)
        s.du = -s.du;
    else
        s.dv = -s.dv;
    s.normalize(t.metric());
    return s;
}

std::vector<BounceRecord> run(const BilliardTable& t, PhasePoint start, int n_bounces) {
    const LiouvilleMetric& m = t.metric();
    m.require_inside(start.u, start.v);
    start.normalize(m);

    int k = t.wall_axis() == Axis::U ? 0 : 1;
    double coord = k == 0 ? start.u : start.v;
    double wall_here = 0;
    if (wall_gap(t, coord, &wall_here) > 1e-9)
        throw NotOnWall("billiard start does not sit on a wall leaf");
    double speed = std::hypot(start.du, start.dv);
    double normal = k == 0 ? start.du : start.dv;
    if (std::abs(normal) < 1e-10 * speed)
        throw TangentRay("billiard start is tangent to the wall");
    int in_sign = wall_here == t.wall_value() ? t.side() : -t.side();
    if (normal * in_sign < 0)
        throw NotOnWall("billiard start points out of the table");

    std::vector<BounceRecord> records;
    records.reserve(std::max(n_bounces, 0));
    std::optional<Caustic> caustic;
    PhasePoint s = start;
    for (int i = 0; i < n_bounces; ++i) {
        PhasePoint seg_start = s;
        GeodesicSegment seg = next_segment(t, s);
        PhasePoint arrive = seg.end;
        double mu_in = mu_of_direction(m, arrive);
        PhasePoint out = reflect(t, arrive);

        if (!caustic || std::abs(caustic->mu - mu_in) > 1e-9 * std::max(1.0, std::abs(mu_in)))
            caustic = caustic_of(t, mu_in);

        BounceRecord r;
        r.index = i;
        r.u = arrive.u;
        r.v = arrive.v;
        r.du_in = arrive.du;
        r.dv_in = arrive.dv;
        r.du_out = out.du;
        r.dv_out = out.dv;
        r.mu_in = mu_in;
        r.mu_out = mu_of_direction(m, out);
        r.arc_len = seg.arc_len;
        r.tangency_residual = segment_residual(t, seg, seg_start, *caustic);
        records.push_back(r);
        s = out;
    }
    return records;
}

namespace {

// Roots of f on [lo, hi]: sign changes on a 4000-point grid refined by
// bisection, plus grid points where |f| is already below 1e-12 (double
// roots have no sign change to catch).
std::vector<double> scan_roots(const std::function<double(double)>& f, double lo, double hi) {
    const int n = 4000;
    std::vector<double> roots;
    double x_prev = lo;
    double f_prev = f(lo);
    if (std::abs(f_prev) <= 1e-12) roots.push_back(lo);
    for (int i = 1; i <= n; ++i) {
        double x = lo + (hi - lo) * i / n;
        double fx = f(x);
        if (std::abs(fx) <= 1e-12) {
            roots.push_back(x);
        } else if (std::abs(f_prev) > 1e-12 && std::signbit(f_prev) != std::signbit(fx)) {
            double a = x_prev, b = x, fa = f_prev;
            for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
                double mid = 0.5 * (a + b);
                double fm = f(mid);
                if (fm == 0) {
                    a = b = mid;
                    break;
                }
                if (std::signbit(fm) == std::signbit(fa)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        x_prev = x;
        f_prev = fx;
    }
    return roots;
}

void dedupe(std::vector<double>& xs, double tol) {
    std::sort(xs.begin(), xs.end());
    std::vector<double> out;
    for (double x : xs)
        if (out.empty() || x - out.back() > tol) out.push_back(x);
    xs = std::move(out);
}

} // namespace

Caustic caustic_of(const BilliardTable& t, double mu) {
    const LiouvilleMetric& m = t.metric();
    const Chart& ch = m.chart();

    auto fu = [&](double u) {
        double a = m.a().value(u);
        return a * a - mu;
    };
    std::vector<double> u_roots = scan_roots(fu, ch.u_min, ch.u_max);
    dedupe(u_roots, 1e-8);

    auto fv = [&](double v) {
        double b = m.b().value(v);
        return b * b + mu;
    };
    double v_hi = ch.v_period ? ch.v_min + *ch.v_period : ch.v_max;
    std::vector<double> v_roots = scan_roots(fv, ch.v_min, v_hi);
    if (ch.v_period) {
        for (double& r : v_roots)
            if (r >= v_hi - 1e-12) r -= *ch.v_period;
    }
    dedupe(v_roots, 1e-8);

    Caustic c;
    c.mu = mu;
    // Both equations can only have roots simultaneously where a or b
    // vanishes; the sign of mu picks the generic family.
    bool use_u = !u_roots.empty() && (v_roots.empty() || mu >= 0);
    if (use_u) {
        c.axis = Axis::U;
        c.values = std::move(u_roots);
    } else if (!v_roots.empty()) {
        c.axis = Axis::V;
        c.values = std::move(v_roots);
        c.wrap = ch.v_period;
    } else {
        throw NoCausticInChart("no caustic leaf in the chart for this pencil member");
    }
    return c;
}

double tangency_residual(const GeodesicSegment& seg, const Caustic& c) {
    const auto& ext = c.axis == Axis::U ? seg.u_extrema : seg.v_extrema;
    int k = c.axis == Axis::U ? 0 : 1;
    if (!ext.empty()) {
        double worst = 0;
        for (const auto& y : ext) worst = std::max(worst, caustic_distance(c, y[k]));
        return worst;
    }
    if (seg.states.empty())
        throw InsufficientSamples("segment carries no samples to measure tangency");
    // No interior turning point: the coordinate is monotone and its extreme
    // values sit at the segment ends. Only a caustic hugging the wall makes
    // that a tangency; report the closer end.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& y : seg.states) {
        lo = std::min(lo, y[k]);
        hi = std::max(hi, y[k]);
    }
    return std::min(caustic_distance(c, lo), caustic_distance(c, hi));
}

std::string bounce_jsonl_line(const BounceRecord& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "{\"i\":%d,\"u\":%.17g,\"v\":%.17g,\"du_in\":%.17g,\"dv_in\":%.17g,"
                  "\"du_out\":%.17g,\"dv_out\":%.17g,\"mu\":%.17g,\"arc_len\":%.17g,"
                  "\"tangency_residual\":%.17g}",
                  r.index, r.u, r.v, r.du_in, r.dv_in, r.du_out, r.dv_out, r.mu_in,
                  r.arc_len, r.tangency_residual);
    return buf;
}

} // namespace geoweb
