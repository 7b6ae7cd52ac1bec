#include "geoweb/render.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "geoweb/dual.hpp"
#include "geoweb/errors.hpp"
#include "geoweb/geodesic.hpp"
#include "geoweb/svg.hpp"
#include "geoweb/webs.hpp"

namespace geoweb {

namespace {

using njson = nlohmann::json;

// ---------------------------------------------------------------------
// Shared helpers.

std::vector<std::pair<double, double>> sampled(int n, auto&& f) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) pts.push_back(f(i / (n - 1.0)));
    return pts;
}

// Roots of f on [lo, hi] by sign-change scan plus bisection; good enough
// for caustic leaves drawn a pixel wide.
std::vector<double> scan_roots(auto&& f, double lo, double hi) {
    std::vector<double> roots;
    const int n = 400;
    double prev_x = lo, prev_f = f(lo);
    if (prev_f == 0) roots.push_back(lo);
    for (int i = 1; i <= n; ++i) {
        double x = lo + (hi - lo) * i / n;
        double fx = f(x);
        if (fx == 0) {
            roots.push_back(x);
        } else if (prev_f != 0 && std::signbit(fx) != std::signbit(prev_f)) {
            double a = prev_x, b = x, fa = prev_f;
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (a + b), fm = f(mid);
                if (fm == 0 || std::signbit(fm) == std::signbit(fa)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_f = fx;
    }
    return roots;
}

// ---------------------------------------------------------------------
// Bounce record round-trip.

double field_num(const njson& o, const char* key, const std::string& where) {
    if (!o.contains(key)) throw MalformedArtifact(where + ": missing field \"" + key + "\"");
    const njson& v = o.at(key);
    if (!v.is_number()) throw MalformedArtifact(where + ": field \"" + key + "\" not a number");
    return v.get<double>();
}

} // namespace

std::vector<BounceRecord> read_bounce_jsonl(const std::string& text,
                                            const std::string& origin) {
    static const char* kFields[] = {"i",      "u",      "v",       "du_in",
                                    "dv_in",  "du_out", "dv_out",  "mu",
                                    "arc_len", "tangency_residual"};
    std::vector<BounceRecord> recs;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::string where = origin + ":" + std::to_string(lineno);
        njson o;
        try {
            o = njson::parse(line);
        } catch (const njson::parse_error& e) {
            throw MalformedArtifact(where + ": " + e.what());
        }
        if (!o.is_object()) throw MalformedArtifact(where + ": expected an object");
        for (const auto& item : o.items()) {
            bool known = false;
            for (const char* k : kFields) known = known || item.key() == k;
            if (!known)
                throw MalformedArtifact(where + ": unknown field \"" + item.key() + "\"");
        }
        BounceRecord r;
        r.index = (int)field_num(o, "i", where);
        r.u = field_num(o, "u", where);
        r.v = field_num(o, "v", where);
        r.du_in = field_num(o, "du_in", where);
        r.dv_in = field_num(o, "dv_in", where);
        r.du_out = field_num(o, "du_out", where);
        r.dv_out = field_num(o, "dv_out", where);
        r.mu_in = r.mu_out = field_num(o, "mu", where);
        r.arc_len = field_num(o, "arc_len", where);
        r.tangency_residual = field_num(o, "tangency_residual", where);
        recs.push_back(r);
    }
    return recs;
}

// ---------------------------------------------------------------------
// Plane picture.

std::string render_plane_svg(const LiouvilleMetric& m, const WallSpec& wall,
                             const std::vector<BounceRecord>& recs) {
    if (wall.axis != Axis::U || !(wall.value > 0) || !wall.mirror)
        throw MalformedArtifact(
            "the plane picture needs a mirrored wall pair on the u axis");
    for (double x : {0.37, 0.91, 1.53}) {
        if (std::abs(m.a().value(x) - std::sinh(x)) > 1e-9 ||
            std::abs(m.b().value(x) - std::sin(x)) > 1e-9)
            throw MalformedArtifact(
                "the plane picture needs the elliptic chart a = sinh(u), b = sin(v)");
    }

    const double w = wall.value;
    const double A = std::cosh(w), B = std::sinh(w);
    auto to_plane = [](double u, double v) {
        return std::pair{std::cosh(u) * std::cos(v), std::sinh(u) * std::sin(v)};
    };

    SvgCanvas svg(-1.12 * A, 1.12 * A, -1.12 * A, 1.12 * A, 640);

    svg.begin_layer("wall");
    svg.polyline(sampled(257, [&](double t) { return to_plane(w, 2 * std::numbers::pi * t); }),
                 "wall", true);
    svg.end_layer();

    if (!recs.empty()) {
        double mu = recs.front().mu_in;
        svg.begin_layer("caustic");
        if (mu > 0 && mu < B * B) {
            double uc = std::asinh(std::sqrt(mu));
            svg.polyline(
                sampled(257, [&](double t) { return to_plane(uc, 2 * std::numbers::pi * t); }),
                "caustic", true);
        } else if (mu < 0 && mu > -1) {
            double vc = std::asin(std::sqrt(-mu));
            for (double branch : {vc, std::numbers::pi - vc})
                svg.polyline(
                    sampled(129, [&](double t) { return to_plane(w * (2 * t - 1), branch); }),
                    "caustic");
        }
        svg.end_layer();

        std::vector<std::pair<double, double>> pts;
        for (const BounceRecord& r : recs) pts.push_back(to_plane(r.u, r.v));
        svg.begin_layer("chords");
        svg.polyline(pts, "chord");
        svg.end_layer();
        svg.begin_layer("points");
        for (const auto& [x, y] : pts) svg.circle(x, y, 2.0, "point");
        svg.end_layer();
    }
    return svg.finish();
}

// ---------------------------------------------------------------------
// Chart picture.

std::string render_chart_svg(const LiouvilleMetric& m, const WallSpec& wall,
                             const std::vector<BounceRecord>& recs) {
    const Chart& c = m.chart();
    double mx = 0.05 * (c.u_max - c.u_min), my = 0.05 * (c.v_max - c.v_min);
    SvgCanvas svg(c.u_min - mx, c.u_max + mx, c.v_min - my, c.v_max + my, 640);

    svg.begin_layer("frame");
    svg.polyline({{c.u_min, c.v_min}, {c.u_max, c.v_min}, {c.u_max, c.v_max},
                  {c.u_min, c.v_max}},
                 "frame", true);
    svg.end_layer();

    auto leaf = [&](Axis axis, double value, const char* cls) {
        if (axis == Axis::U) {
            if (value < c.u_min || value > c.u_max) return;
            svg.polyline({{value, c.v_min}, {value, c.v_max}}, cls);
        } else {
            if (value < c.v_min || value > c.v_max) return;
            svg.polyline({{c.u_min, value}, {c.u_max, value}}, cls);
        }
    };

    svg.begin_layer("wall");
    leaf(wall.axis, wall.value, "wall");
    if (wall.mirror) leaf(wall.axis, -wall.value, "wall");
    svg.end_layer();

    if (!recs.empty()) {
        double mu = recs.front().mu_in;
        svg.begin_layer("caustic");
        auto au = [&](double u) { double a = m.a().value(u); return a * a - mu; };
        auto bv = [&](double v) { double b = m.b().value(v); return b * b + mu; };
        for (double r : scan_roots(au, c.u_min, c.u_max)) leaf(Axis::U, r, "caustic");
        for (double r : scan_roots(bv, c.v_min, c.v_max)) leaf(Axis::V, r, "caustic");
        svg.end_layer();

        std::vector<std::pair<double, double>> pts;
        for (const BounceRecord& r : recs) pts.push_back({r.u, r.v});
        svg.begin_layer("chords");
        svg.polyline(pts, "chord");
        svg.end_layer();
        svg.begin_layer("points");
        for (const auto& [x, y] : pts) svg.circle(x, y, 2.0, "point");
        svg.end_layer();
    }
    return svg.finish();
}

// ---------------------------------------------------------------------
// Web picture.

std::string render_web_svg(const LiouvilleMetric& m) {
    const Chart& c = m.chart();
    double mu0 = c.u_min + 0.15 * (c.u_max - c.u_min);
    double mu1 = c.u_max - 0.15 * (c.u_max - c.u_min);
    double mv0 = c.v_min + 0.15 * (c.v_max - c.v_min);
    double mv1 = c.v_max - 0.15 * (c.v_max - c.v_min);

    auto lin = [&](double u, double v) { return linearize(m, u, v); };

    // corner images span the view; coordinate leaves are axis-parallel in
    // (U, V) so the box maps onto a rectangle
    auto [U0, V0] = lin(mu0, mv0);
    auto [U1, V1] = lin(mu1, mv1);
    if (!(U0 < U1)) std::swap(U0, U1);
    if (!(V0 < V1)) std::swap(V0, V1);
    double pu = 0.08 * (U1 - U0), pv = 0.08 * (V1 - V0);
    SvgCanvas svg(U0 - pu, U1 + pu, V0 - pv, V1 + pv, 640);

    svg.begin_layer("frame");
    svg.polyline({{U0, V0}, {U1, V0}, {U1, V1}, {U0, V1}}, "frame", true);
    svg.end_layer();

    svg.begin_layer("leaves");
    for (int i = 0; i < 5; ++i) {
        double t = i / 4.0;
        double Uc = lin(mu0 + t * (mu1 - mu0), mv0).first;
        double Vc = lin(mu0, mv0 + t * (mv1 - mv0)).second;
        svg.polyline({{Uc, V0}, {Uc, V1}}, "leaf");
        svg.polyline({{U0, Vc}, {U1, Vc}}, "leaf");
    }
    svg.end_layer();

    // net leaves traced in the chart and pushed through the linearizing
    // coordinates, where they land on straight diagonals
    svg.begin_layer("net");
    for (int i = 0; i < 3; ++i) {
        double u0 = mu0 + (0.25 + 0.25 * i) * (mu1 - mu0);
        double v0 = mv0 + (0.25 + 0.25 * i) * (mv1 - mv0);
        for (double sgn : {1.0, -1.0}) {
            for (double flip : {1.0, -1.0}) {
                PhasePoint s0{u0, v0, flip * m.a().value(u0), flip * sgn * m.b().value(v0)};
                IntegrateSpec spec;
                spec.max_arc = 0.35 * (mu1 - mu0) *
                               std::hypot(m.a().value(u0), m.b().value(v0));
                std::vector<std::pair<double, double>> pts;
                try {
                    GeodesicSegment seg = integrate(m, s0, spec);
                    for (const auto& st : seg.states) {
                        if (st[0] < mu0 || st[0] > mu1 || st[1] < mv0 || st[1] > mv1) break;
                        pts.push_back(lin(st[0], st[1]));
                    }
                } catch (const LeftChart&) {
                    // the trace ran into the chart edge; draw what exists
                }
                svg.polyline(pts, "net");
            }
        }
    }
    svg.end_layer();
    return svg.finish();
}

// ---------------------------------------------------------------------
// Surface picture of a dual-quadric run.

namespace {

// Surface point whose incidence plane the given plane is, when real: the
// plane must be proportional to (y^2, 2y, 1, z^2) with z^2 > 0.
std::optional<std::pair<double, double>> surface_point_of_plane(const Eigen::Vector4d& pi) {
    if (std::abs(pi[2]) < 1e-12 * pi.norm()) return std::nullopt;
    double y = pi[1] / (2 * pi[2]);
    double z2 = pi[3] / pi[2];
    if (std::abs(pi[0] / pi[2] - y * y) > 1e-6 * (1 + y * y)) return std::nullopt;
    if (!(z2 > 1e-12)) return std::nullopt;
    return std::pair{std::sqrt(z2), y};
}

// Geodesic labels encoded in a section point, inverting the dual map.
std::optional<std::pair<double, double>> labels_of_dual_point(const Eigen::Vector4d& l) {
    double scale = l.cwiseAbs().maxCoeff();
    if (std::abs(l[0]) < 1e-10 * scale || std::abs(l[3]) < 1e-10 * scale)
        return std::nullopt;
    return std::pair{-l[0] / l[3], -l[1] / l[0]};  // k, then the offset
}

// Arc of k^2(y-l)^2 - k z^2 = eps between two surface points, sampled in
// the upper half plane z > 0.
std::vector<std::pair<double, double>> conic_arc(double k, double l, int eps,
                                                 std::pair<double, double> a,
                                                 std::pair<double, double> b) {
    const int n = 48;
    std::vector<std::pair<double, double>> pts;
    if (k < 0) {
        // closed oval centered on the axis; walk the angle between the
        // endpoint parameters through the upper half
        double K = -k;
        auto ang = [&](const std::pair<double, double>& p) {
            return std::atan2(p.first * std::sqrt(K), K * (p.second - l));
        };
        double t0 = ang(a), t1 = ang(b);
        for (int i = 0; i <= n; ++i) {
            double t = t0 + (t1 - t0) * i / n;
            pts.push_back({std::sin(t) / std::sqrt(K), l + std::cos(t) / K});
        }
    } else {
        // one open branch; y runs monotonically between the endpoints and
        // the square root is clamped against roundoff at the vertex
        for (int i = 0; i <= n; ++i) {
            double y = a.second + (b.second - a.second) * i / n;
            double z2 = (k * k * (y - l) * (y - l) - eps) / k;
            pts.push_back({std::sqrt(std::max(0.0, z2)), y});
        }
    }
    // the picture has y across and z up
    for (auto& p : pts) p = {p.second, p.first};
    return pts;
}

} // namespace

std::string render_poncelet_svg(const PonceletExperiment& exp, int epsilon) {
    PonceletSystem sys(epsilon, exp.c_I, exp.c_w);

    // envelope points of each section: heights whose incidence planes are
    // tangent to the section, kept when the touch is on the real surface
    auto envelope = [&](const Conic& conic) {
        std::vector<std::pair<double, double>> pts;
        for (int i = 0; i < 321; ++i) {
            double y = -2.0 + 4.0 * i / 320.0;
            for (double zeta : wall_tangent_zetas(conic, y))
                if (zeta > 1e-9 && zeta < 9.0) pts.push_back({y, std::sqrt(zeta)});
        }
        return pts;
    };
    std::vector<std::pair<double, double>> wall_pts = envelope(sys.cw);
    std::vector<std::pair<double, double>> caustic_pts = envelope(sys.cI);

    // geodesic arcs of the first orbit: each state's section point labels
    // a geodesic, and the incoming and outgoing planes mark where it
    // touches the wall envelope
    std::vector<std::vector<std::pair<double, double>>> arcs;
    DualBilliardState st = orbit_start(sys, exp.starts.front(), exp.orient);
    int drawn_steps = std::min(exp.steps, 60);
    for (int i = 0; i < drawn_steps; ++i) {
        DualBilliardState next = poncelet_step(sys, st);
        auto from = surface_point_of_plane(st.plane);
        auto to = surface_point_of_plane(next.plane);
        auto labels = labels_of_dual_point(st.l);
        if (from && to && labels)
            arcs.push_back(conic_arc(labels->first, labels->second, epsilon, *from, *to));
        st = next;
    }

    double x0 = -2.1, x1 = 2.1, y0 = 0, y1 = 1;
    for (const auto& pts : {wall_pts, caustic_pts})
        for (const auto& [x, z] : pts) y1 = std::max(y1, z);
    for (const auto& arc : arcs)
        for (const auto& [x, z] : arc) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y1 = std::max(y1, z);
        }
    SvgCanvas svg(x0 - 0.1, x1 + 0.1, y0 - 0.1, y1 + 0.1, 640);

    svg.begin_layer("wall");
    for (const auto& [x, z] : wall_pts) svg.circle(x, z, 1.2, "point");
    svg.end_layer();
    svg.begin_layer("caustic");
    for (const auto& [x, z] : caustic_pts) svg.circle(x, z, 1.2, "caustic");
    svg.end_layer();
    svg.begin_layer("chords");
    for (const auto& arc : arcs) svg.polyline(arc, "chord");
    svg.end_layer();
    return svg.finish();
}

} // namespace geoweb
