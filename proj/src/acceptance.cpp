#include "geoweb/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "geoweb/billiard.hpp"
#include "geoweb/dual.hpp"
#include "geoweb/integrals.hpp"
#include "geoweb/rng.hpp"
#include "geoweb/webs.hpp"

namespace geoweb {

namespace {

const double kPi = std::numbers::pi;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

// One criterion's verdict: did the measurement clear its gate, and what
// was measured. The suite driver adds index, title and timing.
using Verdict = std::pair<bool, std::string>;

// ---------------------------------------------------------------------
// Elliptic billiard fixtures. The two-sheeted chart a = sinh u, b = sin v
// maps isometrically onto the interior of the plane ellipse with semi-axes
// cosh 1, sinh 1, with both walls |u| = 1 landing on the boundary.

LiouvilleMetric elliptic_cover(double u_span) {
    return LiouvilleMetric(Expr::parse("sinh(u)", "u"), Expr::parse("sin(v)", "v"),
                           Chart{-u_span, u_span, 0, 2 * kPi, 2 * kPi});
}

struct Launch {
    double v0 = 0;     // foot point on the wall u = +1
    double theta = 0;  // angle off the wall tangent, radians
    int sign = 1;      // tangential direction along the wall
};

PhasePoint launch_point(const Launch& l) {
    return {1.0, l.v0, -std::sin(l.theta), l.sign * std::cos(l.theta)};
}

// Random inward launches with angles in (5, 85) degrees. Draws whose
// pencil parameter sits on the separatrix are rejected so that relative
// drift stays a meaningful measure.
std::vector<Launch> random_launches(const LiouvilleMetric& m, int count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Launch> out;
    while ((int)out.size() < count) {
        Launch l{rng.uniform(0, 2 * kPi), rng.uniform(5 * kPi / 180, 85 * kPi / 180),
                 rng.uniform() < 0.5 ? 1 : -1};
        if (std::abs(mu_of_direction(m, launch_point(l))) < 1e-3) continue;
        out.push_back(l);
    }
    return out;
}

// Plane-ellipse oracle in long double: straight chords inside the ellipse
// x^2/A2 + y^2/B2 = 1, chord advance and mirror reflection in closed form.
struct PlanePoint {
    long double x, y;
};

PlanePoint to_plane(double u, double v) {
    return {std::cosh((long double)u) * std::cos((long double)v),
            std::sinh((long double)u) * std::sin((long double)v)};
}

struct EllipseOracle {
    long double A2, B2;
    long double x, y, dx, dy;

    void bounce() {
        long double pd = x * dx / A2 + y * dy / B2;
        long double dd = dx * dx / A2 + dy * dy / B2;
        long double t = -2 * pd / dd;
        x += t * dx;
        y += t * dy;
        long double nx = x / A2, ny = y / B2;
        long double nn = std::sqrt(nx * nx + ny * ny);
        nx /= nn;
        ny /= nn;
        long double dn = dx * nx + dy * ny;
        dx -= 2 * dn * nx;
        dy -= 2 * dn * ny;
    }
};

EllipseOracle oracle_from(const PhasePoint& s) {
    EllipseOracle o;
    o.A2 = std::cosh(1.0L) * std::cosh(1.0L);
    o.B2 = std::sinh(1.0L) * std::sinh(1.0L);
    PlanePoint p = to_plane(s.u, s.v);
    o.x = p.x;
    o.y = p.y;
    long double cu = std::cosh((long double)s.u), su = std::sinh((long double)s.u);
    long double cv = std::cos((long double)s.v), sv = std::sin((long double)s.v);
    o.dx = su * cv * s.du - cu * sv * s.dv;
    o.dy = cu * sv * s.du + su * cv * s.dv;
    long double n = std::sqrt(o.dx * o.dx + o.dy * o.dy);
    o.dx /= n;
    o.dy /= n;
    return o;
}

// ---------------------------------------------------------------------
// Web fixtures and grid scans.

LiouvilleMetric strip_metric() {
    return LiouvilleMetric(Expr::parse("sinh(u)", "u"), Expr::parse("sin(v)", "v"),
                           Chart{0.2, 2.2, 0.3, 2.8, std::nullopt});
}

struct GridMax {
    double r_Px = 0, r_Py = 0, r_flat = 0, K_B = 0;

    double pde_worst() const { return std::max({r_Px, r_Py, r_flat}); }
};

GridMax grid_max(const WebFields& w, double x0, double x1, double y0, double y1, int n) {
    GridMax g;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double x = x0 + (x1 - x0) * (i + 0.5) / n;
            double y = y0 + (y1 - y0) * (j + 0.5) / n;
            PdeResiduals r = pde_residuals(w, x, y);
            ConnectionSample c = connection_and_curvature(w, x, y);
            g.r_Px = std::max(g.r_Px, std::abs(r.r_Px));
            g.r_Py = std::max(g.r_Py, std::abs(r.r_Py));
            g.r_flat = std::max(g.r_flat, std::abs(r.r_flat));
            g.K_B = std::max(g.K_B, std::abs(c.K_B));
        }
    }
    return g;
}

double collinearity_residual(const std::vector<std::pair<double, double>>& pts) {
    double ax = pts.front().first, ay = pts.front().second;
    double bx = pts.back().first, by = pts.back().second;
    double len = std::hypot(bx - ax, by - ay);
    double worst = len > 0 ? 0 : 1e9;
    for (const auto& [x, y] : pts) {
        double d = std::abs((bx - ax) * (y - ay) - (by - ay) * (x - ax)) / len;
        worst = std::max(worst, d);
    }
    return worst;
}

// ---------------------------------------------------------------------
// Criterion 1: the pencil parameter mu survives 100 bounces for 20 random
// launches, with relative drift at most 1e-6.

Verdict mu_conservation() {
    LiouvilleMetric m = elliptic_cover(3.0);
    BilliardTable table(m, Axis::U, 1.0, -1, true);
    double worst = 0;
    for (const Launch& l : random_launches(m, 20, 20240801)) {
        PhasePoint s0 = launch_point(l);
        double mu0 = mu_of_direction(m, s0);
        for (const BounceRecord& r : run(table, s0, 100)) {
            double d = std::max(std::abs(r.mu_in - mu0), std::abs(r.mu_out - mu0));
            worst = std::max(worst, d / std::abs(mu0));
        }
    }
    return {worst <= 1e-6, "max relative mu drift " + fmt(worst) + ", gate 1e-6"};
}

// ---------------------------------------------------------------------
// Criterion 2: across 20 caustic parameters the turning point of every
// segment sits on the caustic leaf within 1e-6, and the hyperbola-family
// caustic coordinate moves monotonically with mu. A chord nearly parallel
// to a caustic asymptote touches beyond any finite chart, so each mu gets
// a short list of launch angles and uses the first whose segments all
// measure; the residual gate is applied to every measured segment.

Verdict caustic_tangency() {
    LiouvilleMetric m = elliptic_cover(6.0);  // room for turns far out on extensions
    BilliardTable table(m, Axis::U, 1.0, -1, true);
    const double A = std::sinh(1.0) * std::sinh(1.0);

    std::vector<double> mus;
    for (int i = 0; i < 10; ++i) mus.push_back(0.05 + (0.9 * A - 0.05) * i / 9.0);
    for (int i = 0; i < 10; ++i) mus.push_back(-0.85 + 0.8 * i / 9.0);
    const double cands[5] = {kPi / 2, kPi / 2 + 0.15, kPi / 2 - 0.15, kPi / 2 + 0.25,
                             kPi / 2 - 0.25};

    double worst = 0, prev_vc = 10;
    bool monotone = true;
    int unmeasured = 0;
    for (double mu : mus) {
        bool measured = false;
        for (int ci = 0; ci < 5 && !measured; ++ci) {
            double sv = std::sin(cands[ci]);
            double c2 = (mu + sv * sv) / (A + sv * sv);
            double c = std::sqrt(c2), s = std::sqrt(1 - c2);
            auto recs = run(table, PhasePoint{1.0, cands[ci], -s, c}, 15);
            double local = 0;
            bool clean = true;
            for (const BounceRecord& r : recs) {
                if (r.tangency_residual < 0) {
                    clean = false;
                    break;
                }
                local = std::max(local, r.tangency_residual);
            }
            if (!clean) continue;
            measured = true;
            worst = std::max(worst, local);
            if (mu < 0) {
                // smallest root in the chart is the branch in (0, pi/2)
                double vc = caustic_of(table, recs.front().mu_in).values.front();
                if (!(vc < prev_vc)) monotone = false;
                prev_vc = vc;
            }
        }
        if (!measured) ++unmeasured;
    }
    bool pass = unmeasured == 0 && monotone && worst <= 1e-6;
    return {pass, "worst tangency residual " + fmt(worst) + ", gate 1e-6; " +
                      std::to_string(unmeasured) + " of 20 mu unmeasured; caustic " +
                      (monotone ? "monotone" : "NOT monotone")};
}

// ---------------------------------------------------------------------
// Criterion 3: bounce points of the criterion-1 launches, mapped to the
// plane, track a long-double straight-line ellipse billiard for 50
// bounces within 1e-6.

Verdict plane_ellipse_match() {
    LiouvilleMetric m = elliptic_cover(3.0);
    BilliardTable table(m, Axis::U, 1.0, -1, true);
    double worst = 0;
    for (const Launch& l : random_launches(m, 20, 20240801)) {
        PhasePoint s0 = launch_point(l);
        EllipseOracle o = oracle_from(s0);
        for (const BounceRecord& r : run(table, s0, 50)) {
            o.bounce();
            PlanePoint q = to_plane(r.u, r.v);
            worst = std::max(worst,
                             std::hypot((double)(q.x - o.x), (double)(q.y - o.y)));
        }
    }
    return {worst <= 1e-6, "max bounce point gap " + fmt(worst) + ", gate 1e-6"};
}

// ---------------------------------------------------------------------
// Criterion 4: the principal web of three metrics solves the structure
// equations on a 50 x 50 grid, and the perturbed net fails both the
// curvature and the bisector test by a visible margin.

Verdict web_residuals() {
    struct Box {
        LiouvilleMetric m;
        double x0, x1, y0, y1;
    };
    std::vector<Box> boxes;
    boxes.push_back({LiouvilleMetric(Expr::parse("1", "u"), Expr::parse("1", "v"),
                                     Chart{-5, 5, -5, 5, std::nullopt}),
                     -4, 4, -4, 4});
    boxes.push_back({LiouvilleMetric(Expr::parse("sinh(u)", "u"), Expr::parse("sin(v)", "v"),
                                     Chart{0.2, 2.2, 0, 2 * kPi, 2 * kPi}),
                     0.5, 1.9, 0.3, 1.3});
    boxes.push_back({LiouvilleMetric(Expr::parse("exp(u)", "u"), Expr::parse("1", "v"),
                                     Chart{-2, 2, -2, 2, std::nullopt}),
                     -1.7, 1.7, -1.7, 1.7});

    double worst = 0;
    for (const Box& b : boxes) {
        GridMax g = grid_max(liouville_web(b.m), b.x0, b.x1, b.y0, b.y1, 50);
        worst = std::max({worst, g.pde_worst(), g.K_B});
    }

    const LiouvilleMetric& elliptic = boxes[1].m;
    GridMax gp = grid_max(perturbed_web(elliptic, 0.1), 0.5, 1.5, 0.3, 1.3, 50);
    GridMax gr = grid_max(rebisected_web(elliptic, 0.1), 0.5, 1.5, 0.3, 1.3, 50);

    bool pass = worst <= 1e-6 && gp.K_B >= 1e-2 && gr.r_flat >= 1e-3;
    return {pass, "worst residual " + fmt(worst) + " (gate 1e-6); perturbed K_B " +
                      fmt(gp.K_B) + " (floor 1e-2), bisector " + fmt(gr.r_flat) +
                      " (floor 1e-3)"};
}

// ---------------------------------------------------------------------
// Criterion 5: hexagon closure defects of the geodesic web shrink at
// least 12-fold per halving of the hexagon size, while the rebisected
// control stays near its cubic rate, at most 10-fold.

Verdict hexagon_rates() {
    LiouvilleMetric m = strip_metric();
    WebFields lw = liouville_web(m);
    WebFields cw = rebisected_web(m, 0.1);
    // coarse walker steps: the web defect at half size drops toward the
    // long-double noise floor, and finer stepping only digs it in deeper
    const int steps = 4;
    double min_web = 1e18, max_ctl = 0;
    for (double eps : {0.1, 0.05, 0.025}) {
        double d1 = hexagon_defect(lw, 1.0, 0.8, eps, steps);
        double d2 = hexagon_defect(lw, 1.0, 0.8, eps / 2, steps);
        double c1 = hexagon_defect(cw, 1.0, 0.8, eps, steps);
        double c2 = hexagon_defect(cw, 1.0, 0.8, eps / 2, steps);
        if (!(d2 > 0) || !(c2 > 0)) return {false, "defect underflowed at eps " + fmt(eps)};
        min_web = std::min(min_web, d1 / d2);
        max_ctl = std::max(max_ctl, c1 / c2);
    }
    bool pass = min_web >= 12.0 && max_ctl <= 10.0;
    return {pass, "web ratio >= " + fmt(min_web) + " (floor 12); control ratio <= " +
                      fmt(max_ctl) + " (cap 10)"};
}

// ---------------------------------------------------------------------
// Criterion 6: the momentum form of the quadratic integral is conserved
// along 20 random geodesics within 1e-7 relative.

Verdict net_integral_conserved() {
    LiouvilleMetric m(Expr::parse("1/cosh(u)", "u"), Expr::parse("sin(v)", "v"),
                      Chart{-2, 2, 0, 2 * kPi, 2 * kPi});
    WebFields w = liouville_web(m);
    Rng rng(606060);
    double worst = 0;
    int done = 0;
    while (done < 20) {
        PhasePoint s0{rng.uniform(-1.2, 1.2), rng.uniform(0, 2 * kPi), 0, 0};
        double psi = rng.uniform(0, 2 * kPi);
        s0.du = std::cos(psi);
        s0.dv = std::sin(psi);
        // mu bounds the u excursion; keep orbits clear of the chart edge
        if (mu_of_direction(m, s0) < 0.12) continue;
        s0.normalize(m);
        s0.sync_momenta(m);
        double ref = net_integral(w, s0);
        IntegrateSpec spec;
        spec.max_arc = 20;
        GeodesicSegment seg = integrate(m, s0, spec);
        for (std::size_t i = 0; i < seg.states.size(); i += 3) {
            PhasePoint s{seg.states[i][0], seg.states[i][1], seg.states[i][2],
                         seg.states[i][3]};
            s.sync_momenta(m);
            worst = std::max(worst,
                             std::abs(net_integral(w, s) - ref) / std::max(1.0, std::abs(ref)));
        }
        ++done;
    }
    return {worst <= 1e-7, "max relative integral drift " + fmt(worst) + ", gate 1e-7"};
}

// ---------------------------------------------------------------------
// Criterion 7: net leaves map to straight lines under the linearizing
// coordinates, and the four foliation directions are exactly harmonic.

Verdict web_linearization() {
    LiouvilleMetric m = strip_metric();
    const std::pair<double, double> starts[4] = {{0.7, 0.9}, {1.0, 1.2}, {1.3, 1.8},
                                                 {1.6, 0.7}};
    double worst = 0;
    for (const auto& [u0, v0] : starts) {
        for (double sgn : {1.0, -1.0}) {
            PhasePoint s0{u0, v0, m.a().value(u0), sgn * m.b().value(v0)};
            IntegrateSpec spec;
            spec.max_arc = 0.7;
            GeodesicSegment seg = integrate(m, s0, spec);
            std::vector<std::pair<double, double>> pts;
            for (const auto& st : seg.states) pts.push_back(linearize(m, st[0], st[1]));
            if (pts.size() < 5) return {false, "leaf trace too short to judge"};
            worst = std::max(worst, collinearity_residual(pts));
        }
    }

    bool harmonic = true;
    LiouvilleMetric exp_one(Expr::parse("exp(u)", "u"), Expr::parse("1", "v"),
                            Chart{-2, 2, -2, 2, std::nullopt});
    LiouvilleMetric flat(Expr::parse("1", "u"), Expr::parse("1", "v"),
                         Chart{-5, 5, -5, 5, std::nullopt});
    for (const auto& [x, y] : {std::pair{1.0, 0.8}, {0.7, 2.0}, {1.6, 1.4}})
        harmonic = harmonic && direction_cross_ratio(m, x, y) == -1.0;
    for (const auto& [x, y] : {std::pair{0.0, 0.0}, {-0.4, 1.3}})
        harmonic = harmonic && direction_cross_ratio(flat, x, y) == -1.0 &&
                   direction_cross_ratio(exp_one, x, y) == -1.0;

    bool pass = worst <= 1e-6 && harmonic;
    return {pass, "max collinearity residual " + fmt(worst) + ", gate 1e-6; cross-ratio " +
                      (harmonic ? "exactly -1" : "NOT -1")};
}

// ---------------------------------------------------------------------
// Criterion 8: numerically integrated surface geodesics land on the conic
// their initial data labels, residual at most 1e-8, 100 runs per sign.

Verdict surface_conics() {
    Rng rng(808);
    double worst = 0;
    for (int eps : {1, -1}) {
        EpsSurface s(eps);
        int measured = 0, attempts = 0;
        while (measured < 100) {
            if (++attempts > 10000) return {false, "initial-condition rejection ran away"};
            double z0 = rng.uniform(0.6, 1.8);
            double y0 = rng.uniform(-1.0, 1.0);
            double slope = (rng.uniform() < 0.5 ? -1 : 1) * rng.uniform(0.2, 1.5);
            EpsGeodesic g;
            try {
                g = geodesic_through(s, z0, y0, slope);
            } catch (const DegenerateK&) {
                continue;
            }
            double dz = 0.9;
            if (g.k < 0) {
                // ellipse-type label: stay clear of the vertical tangent
                double z_top = 1.0 / std::sqrt(-g.k);
                if (z_top - z0 < 0.05) continue;
                dz = 0.5 * (z_top - z0);
            }
            const EpsCurvePoint& end = integrate_eps_geodesic(s, z0, y0, slope, dz).back();
            double lead = g.k * g.k * (end.y - g.l) * (end.y - g.l);
            double mid = g.k * end.z * end.z;
            double res = std::abs(lead - mid - eps) / std::max({1.0, std::abs(lead),
                                                                std::abs(mid)});
            worst = std::max(worst, res);
            ++measured;
        }
    }
    return {worst <= 1e-8, "worst conic residual " + fmt(worst) + ", gate 1e-8"};
}

// ---------------------------------------------------------------------
// Criterion 9: for five random wall sections, the tangency chords of ten
// common tangent planes concur in a cone vertex within 1e-6, and bending
// one chord off the surface spreads the bundle past 1e-3.

Verdict cone_concurrency() {
    const Eigen::Matrix4d Q = quadric_matrix(1);
    const Conic c0(Eigen::Vector4d(0, 0, 0, 1), Q);
    Rng rng(909090);
    double worst_spread = 0, least_bent = 1e18;
    int done = 0, attempts = 0;
    while (done < 5) {
        if (++attempts > 200) return {false, "generic wall draw ran away"};
        Eigen::Vector4d pw(rng.gaussian(), rng.gaussian(), rng.gaussian(), rng.gaussian());
        std::vector<VertexLine> lines;
        try {
            Conic cw(pw, Q);
            for (const ConeMember& mb : cone_members(Q, c0.plane(), pw)) {
                std::vector<Eigen::Vector4d> planes = wall_plane_family(cw, mb.vertex, 10);
                if (planes.size() < 10) continue;
                lines.clear();
                for (const Eigen::Vector4d& pi : planes)
                    lines.push_back(tangency_line(c0, cw, pi));
                break;
            }
        } catch (const NumericError&) {
            continue;  // degenerate draw, not a generic wall
        }
        if (lines.size() < 10) continue;

        ConeFit fit = fit_cone_vertex(lines);
        worst_spread = std::max(worst_spread, fit.spread);
        std::vector<VertexLine> bent = lines;
        bent[3].b[3] += 1e-2;
        least_bent = std::min(least_bent, fit_cone_vertex(bent).spread);
        ++done;
    }
    bool pass = worst_spread <= 1e-6 && least_bent >= 1e-3;
    return {pass, "max concurrency spread " + fmt(worst_spread) +
                      " (gate 1e-6); bent control spread " + fmt(least_bent) +
                      " (floor 1e-3)"};
}

// ---------------------------------------------------------------------
// Criterion 10: the rotation number is launch-independent to 1e-8, and
// after bisecting the section pencil to rotation number 1/5 every orbit
// closes up after five steps within 1e-6.

Verdict porism_closure() {
    const Eigen::Vector4d base(1, 0.2, 0.7, -0.5);
    const Eigen::Vector4d wall(0.4, -0.3, 0.9, 1.2);
    const Eigen::Vector4d dir(0, 0, 0, 1);
    auto system_at = [&](double t) { return PonceletSystem(1, base + t * dir, wall); };

    std::vector<double> phis;
    for (int j = 0; j < 10; ++j) phis.push_back(0.1 + 2.8 * j / 9.0);

    PonceletSystem sys0 = system_at(0.0);
    double lo_r = 1e18, hi_r = -1e18;
    for (double phi : phis) {
        double r = normalized_rotation(rotation_number(sys0, phi, 0, 500));
        lo_r = std::min(lo_r, r);
        hi_r = std::max(hi_r, r);
    }
    double spread = hi_r - lo_r;

    auto rho_defect = [&](double t) {
        return normalized_rotation(rotation_number(system_at(t), 0.7, 0, 500)) - 0.2;
    };
    double lo = 0.6, hi = 0.8;
    double flo = rho_defect(lo);
    if (flo * rho_defect(hi) > 0) return {false, "resonance bracket lost"};
    for (int it = 0; it < 48; ++it) {
        double mid = 0.5 * (lo + hi);
        if (flo * rho_defect(mid) <= 0) {
            hi = mid;
        } else {
            lo = mid;
            flo = rho_defect(mid);
        }
    }
    PonceletSystem tuned = system_at(0.5 * (lo + hi));

    double worst_close = 0;
    for (double phi : phis) {
        DualBilliardState s0 = orbit_start(tuned, phi, 0);
        DualBilliardState s = s0;
        for (int k = 0; k < 5; ++k) s = poncelet_step(tuned, s);
        double defect = std::max(point_gap(s.l, s0.l), plane_gap(s.plane, s0.plane));
        worst_close = std::max(worst_close, defect);
    }
    bool pass = spread <= 1e-8 && worst_close <= 1e-6;
    return {pass, "rotation spread " + fmt(spread) + " (gate 1e-8); five-step defect " +
                      fmt(worst_close) + " (gate 1e-6)"};
}

// ---------------------------------------------------------------------
// Criterion 11: the revolution momentum E(v) du is conserved along 20
// random geodesics of E = cosh^2 v within 1e-8 relative.

Verdict clairaut_momentum() {
    ClairautMetric rev{Expr::parse("cosh(v)^2", "v"), Chart{-10, 10, -4, 4, std::nullopt}};
    Rng rng(111111);
    double worst = 0;
    int done = 0;
    while (done < 20) {
        PhasePoint s0{rng.uniform(-2, 2), rng.uniform(-1.2, 1.2), 0, 0};
        double psi = rng.uniform(0, 2 * kPi);
        s0.du = std::cos(psi);
        s0.dv = std::sin(psi);
        // the momentum is conserved along unit-speed geodesics, so bring
        // the start to metric unit speed before taking the reference
        double sc = std::hypot(std::cosh(s0.v) * s0.du, s0.dv);
        s0.du /= sc;
        s0.dv /= sc;
        double p0 = clairaut_eval(rev, s0);
        if (std::abs(p0) < 1e-3) continue;  // near-meridian, relative drift meaningless
        GeodesicSegment seg = clairaut_geodesic(rev, s0, 2.0);
        for (const auto& y : seg.states) {
            double p = clairaut_eval(rev, {y[0], y[1], y[2], y[3]});
            worst = std::max(worst, std::abs(p - p0) / std::abs(p0));
        }
        ++done;
    }
    return {worst <= 1e-8, "max relative momentum drift " + fmt(worst) + ", gate 1e-8"};
}

} // namespace

std::vector<CriterionResult> run_acceptance_suite(std::ostream& out) {
    struct Check {
        const char* title;
        double budget_s;  // 0 means no runtime gate
        Verdict (*measure)();
    };
    const Check checks[] = {
        {"pencil parameter conserved across bounces", 30, mu_conservation},
        {"segments tangent to their caustic leaf", 30, caustic_tangency},
        {"chart billiard matches the plane ellipse", 10, plane_ellipse_match},
        {"principal webs solve the structure equations", 60, web_residuals},
        {"geodesic web hexagons close at fourth order", 60, hexagon_rates},
        {"net integral conserved along the flow", 10, net_integral_conserved},
        {"web leaves straighten, directions harmonic", 0, web_linearization},
        {"surface geodesics land on their conics", 10, surface_conics},
        {"wall tangency chords concur in a vertex", 30, cone_concurrency},
        {"five-step closure after rotation tuning", 120, porism_closure},
        {"revolution momentum conserved", 10, clairaut_momentum},
    };

    std::vector<CriterionResult> results;
    int index = 0;
    for (const Check& c : checks) {
        ++index;
        CriterionResult r;
        r.index = index;
        r.title = c.title;
        auto t0 = std::chrono::steady_clock::now();
        try {
            auto [pass, detail] = c.measure();
            r.pass = pass;
            r.detail = std::move(detail);
        } catch (const Error& e) {
            r.pass = false;
            r.detail = e.name() + ": " + e.what();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = e.what();
        }
        r.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (r.pass && c.budget_s > 0 && r.seconds > c.budget_s)
            r.detail += "; over the " + fmt(c.budget_s) + " s budget";
        if (c.budget_s > 0 && r.seconds > c.budget_s) r.pass = false;
        out << (r.pass ? "pass" : "FAIL") << "  " << r.index << ". " << r.title << "  ["
            << r.detail << "]  (" << fmt(r.seconds) << " s)" << std::endl;
        results.push_back(std::move(r));
    }
    return results;
}

} // namespace geoweb
