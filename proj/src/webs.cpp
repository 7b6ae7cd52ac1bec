#include "geoweb/webs.hpp"

#include <array>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "geoweb/errors.hpp"

namespace geoweb {

WebFields liouville_web(const LiouvilleMetric& m) {
    WebFields w;
    w.chart = m.chart();
    w.T = [](double, double) { return Taylor2::con(0.0); };
    const Expr a = m.a();
    const Expr b = m.b();
    w.P = [a, b](double x, double y) {
        const Taylor2 ax = Taylor2::of_x(a.jet(x));
        if (std::abs(ax.v) < 1e-14)
            throw ZeroDenominator("net slope b/a undefined where a vanishes");
        return Taylor2::of_y(b.jet(y)) / ax;
    };
    w.lambda = [a, b](double x, double y) {
        const Taylor2 ax = Taylor2::of_x(a.jet(x));
        const Taylor2 by = Taylor2::of_y(b.jet(y));
        return 0.5 * log(ax * ax + by * by);
    };
    return w;
}

WebFields perturbed_web(const LiouvilleMetric& m, double delta) {
    WebFields w = liouville_web(m);
    auto base = w.P;
    w.P = [base, delta](double x, double y) {
        const Taylor2 xy{x * y, y, x, 0, 1, 0};
        return base(x, y) + delta * xy;
    };
    return w;
}

WebFields rebisected_web(const LiouvilleMetric& m, double delta) {
    WebFields w = liouville_web(m);
    auto P0 = w.P;
    auto Pt = perturbed_web(m, delta).P;
    w.T = [P0, Pt](double x, double y) {
        return -tan(0.5 * (atan(Pt(x, y)) - atan(P0(x, y))));
    };
    w.P = [P0, Pt](double x, double y) {
        return tan(0.5 * (atan(Pt(x, y)) + atan(P0(x, y))));
    };
    return w;
}

PdeResiduals pde_residuals(const WebFields& w, double x, double y) {
    const Taylor2 T = w.T(x, y);
    const Taylor2 P = w.P(x, y);
    const Taylor2 L = w.lambda(x, y);
    const double tt = T.v * T.v;
    const double pp = P.v * P.v;
    const double t2 = 1 + tt;
    const double pre = (1 + pp) / (P.v * t2);
    const double rhs_x = pre * ((1 + pp) / t2 * T.v * T.dx + (pp - tt) / t2 * T.dy
                                + (tt - pp) * L.dx + T.v * (1 + pp) * L.dy);
    const double rhs_y = pre * ((1 - tt * pp) / t2 * T.dx - (1 + pp) / t2 * T.v * T.dy
                                + T.v * (1 + pp) * L.dx + (1 - tt * pp) * L.dy);
    const double flat = T.dxx + T.dyy - 2 * T.v * (T.dx * T.dx + T.dy * T.dy) / t2;
    return {P.dx - rhs_x, P.dy - rhs_y, flat};
}

ConnectionSample connection_and_curvature(const WebFields& w, double x, double y) {
    const Taylor2 Tt = w.T(x, y);
    const Taylor2 Pt = w.P(x, y);
    const Taylor2 Lt = w.lambda(x, y);
    if (Pt.v == 0) throw ZeroP("connection form undefined at P = 0");

    // First-order views; differentiating the assembled alpha, beta once gives
    // K_B without ever forming third derivatives of the fields.
    const Grad2 T{Tt.v, Tt.dx, Tt.dy};
    const Grad2 Tx{Tt.dx, Tt.dxx, Tt.dxy};
    const Grad2 Ty{Tt.dy, Tt.dxy, Tt.dyy};
    const Grad2 Lx{Lt.dx, Lt.dxx, Lt.dxy};
    const Grad2 Ly{Lt.dy, Lt.dxy, Lt.dyy};
    const Grad2 P{Pt.v, Pt.dx, Pt.dy};

    const Grad2 T2 = T * T + 1.0;
    const Grad2 P2 = P * P;
    const Grad2 pre = 1.0 / (T2 * P2);
    const Grad2 A1 = T * T * P2 + 2.0 * P2 + 1.0;
    const Grad2 A2 = 2.0 * T * T * P2 + T * T + P2;
    const Grad2 A3 = 1.0 - T * T * P2;
    const Grad2 common = (P2 + 1.0) * (T * Lx + Ly);
    const Grad2 alpha = pre * (A2 / T2 * Ty - A1 / T2 * T * Tx - T * common);
    const Grad2 beta = pre * (A3 / T2 * T * Ty - A1 / T2 * Tx - common);
    return {alpha.v, beta.v, beta.dx - alpha.dy};
}

namespace {

using LD = long double;

struct V2 {
    LD x = 0, y = 0;
};

inline V2 operator+(V2 a, V2 b) { return {a.x + b.x, a.y + b.y}; }
inline V2 operator-(V2 a, V2 b) { return {a.x - b.x, a.y - b.y}; }
inline V2 operator-(V2 a) { return {-a.x, -a.y}; }
inline V2 operator*(LD c, V2 a) { return {c * a.x, c * a.y}; }
inline LD cross(V2 a, V2 b) { return a.x * b.y - a.y * b.x; }

// Tangent angle of one foliation and its gradient, from the slope fields.
struct AngleProbe {
    LD th, gx, gy;
};

AngleProbe probe(const WebFields& w, int fam, V2 p) {
    const Taylor2 T = w.T(static_cast<double>(p.x), static_cast<double>(p.y));
    const Taylor2 P = w.P(static_cast<double>(p.x), static_cast<double>(p.y));
    const double wP = 1.0 / (1.0 + P.v * P.v);
    const double wT = 1.0 / (1.0 + T.v * T.v);
    const double psiP = std::atan(P.v);
    const double psiT = std::atan(T.v);
    switch (fam) {
        case 0: return {psiP - psiT, P.dx * wP - T.dx * wT, P.dy * wP - T.dy * wT};
        case 1: return {-psiP - psiT, -P.dx * wP - T.dx * wT, -P.dy * wP - T.dy * wT};
        default: return {-psiT, -T.dx * wT, -T.dy * wT};
    }
}

V2 unit_dir(const WebFields& w, int fam, V2 p, int sigma) {
    const AngleProbe a = probe(w, fam, p);
    return {sigma * std::cos(a.th), sigma * std::sin(a.th)};
}

// Curve second derivative in arc length; independent of the trace direction.
V2 accel(const WebFields& w, int fam, V2 p) {
    const AngleProbe a = probe(w, fam, p);
    const LD ths = a.gx * std::cos(a.th) + a.gy * std::sin(a.th);
    return {-ths * std::sin(a.th), ths * std::cos(a.th)};
}

struct Trace {
    std::vector<V2> xs;   // nodes
    std::vector<V2> ts;   // unit tangents, oriented along the traversal
    std::vector<V2> as;   // second derivatives
};

Trace rk4_trace(const WebFields& w, int fam, V2 x0, int sigma, LD h, int nmax) {
    Trace tr;
    auto f = [&](V2 p) { return unit_dir(w, fam, p, sigma); };
    auto check = [&](V2 p) {
        if (!w.chart.contains(static_cast<double>(p.x), static_cast<double>(p.y)))
            throw LeftChart("hexagon trace left the chart");
    };
    check(x0);
    tr.xs.push_back(x0);
    tr.ts.push_back(f(x0));
    tr.as.push_back(accel(w, fam, x0));
    V2 x = x0;
    for (int i = 0; i < nmax; ++i) {
        const V2 k1 = f(x);
        const V2 k2 = f(x + (h / 2) * k1);
        const V2 k3 = f(x + (h / 2) * k2);
        const V2 k4 = f(x + h * k3);
        x = x + (h / 6) * (k1 + 2.0L * k2 + 2.0L * k3 + k4);
        check(x);
        tr.xs.push_back(x);
        tr.ts.push_back(f(x));
        tr.as.push_back(accel(w, fam, x));
    }
    return tr;
}

// C^2 quintic Hermite interpolant over one trace segment, s in [0, 1].
V2 quintic(const Trace& tr, std::size_t i, LD h, LD s) {
    const LD s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const LD A0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
    const LD A1 = s - 6 * s3 + 8 * s4 - 3 * s5;
    const LD A2 = (s2 - 3 * s3 + 3 * s4 - s5) / 2;
    const LD B0 = 10 * s3 - 15 * s4 + 6 * s5;
    const LD B1 = -4 * s3 + 7 * s4 - 3 * s5;
    const LD B2 = (s3 - 2 * s4 + s5) / 2;
    return A0 * tr.xs[i] + (A1 * h) * tr.ts[i] + (A2 * h * h) * tr.as[i]
         + B0 * tr.xs[i + 1] + (B1 * h) * tr.ts[i + 1] + (B2 * h * h) * tr.as[i + 1];
}

V2 quintic_d(const Trace& tr, std::size_t i, LD h, LD s) {
    const LD s2 = s * s, s3 = s2 * s, s4 = s3 * s;
    const LD A0 = -30 * s2 + 60 * s3 - 30 * s4;
    const LD A1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
    const LD A2 = (2 * s - 9 * s2 + 12 * s3 - 5 * s4) / 2;
    const LD B0 = 30 * s2 - 60 * s3 + 30 * s4;
    const LD B1 = -12 * s2 + 28 * s3 - 15 * s4;
    const LD B2 = (3 * s2 - 8 * s3 + 5 * s4) / 2;
    return A0 * tr.xs[i] + (A1 * h) * tr.ts[i] + (A2 * h * h) * tr.as[i]
         + B0 * tr.xs[i + 1] + (B1 * h) * tr.ts[i + 1] + (B2 * h * h) * tr.as[i + 1];
}

bool seg_intersect(V2 p, V2 r, V2 q, V2 s, LD& t, LD& u) {
    const LD d = cross(r, s);
    if (std::abs(d) < 1e-30L) return false;
    const V2 qp = q - p;
    t = cross(qp, s) / d;
    u = cross(qp, r) / d;
    return true;
}

// Intersect two traced leaves: coarse polyline scan, then Newton on the
// quintic interpolants of the bracketing segments.
bool curve_intersect(const Trace& a, LD ha, const Trace& b, LD hb,
                     std::size_t skip_a, V2& out) {
    for (std::size_t i = skip_a; i + 1 < a.xs.size(); ++i) {
        const V2 pa = a.xs[i];
        const V2 ra = a.xs[i + 1] - a.xs[i];
        for (std::size_t j = 0; j + 1 < b.xs.size(); ++j) {
            LD t, u;
            if (!seg_intersect(pa, ra, b.xs[j], b.xs[j + 1] - b.xs[j], t, u)) continue;
            if (t < -1e-9L || t > 1 + 1e-9L || u < -1e-9L || u > 1 + 1e-9L) continue;
            LD s_ = t, t_ = u;
            for (int it = 0; it < 16; ++it) {
                const V2 F = quintic(a, i, ha, s_) - quintic(b, j, hb, t_);
                const V2 dA = quintic_d(a, i, ha, s_);
                const V2 dB = quintic_d(b, j, hb, t_);
                const LD det = dA.x * (-dB.y) - (-dB.x) * dA.y;
                if (std::abs(det) < 1e-30L) break;
                const LD ds = (-F.x * (-dB.y) - (-dB.x) * (-F.y)) / det;
                const LD dt = (dA.x * (-F.y) - (-F.x) * dA.y) / det;
                s_ += ds;
                t_ += dt;
                if (std::max(std::abs(ds), std::abs(dt)) < 1e-26L) break;
            }
            out = quintic(a, i, ha, s_);
            return true;
        }
    }
    return false;
}

} // namespace

double hexagon_defect(const WebFields& w, double cx, double cy, double eps,
                      int steps_per_eps) {
    const V2 c{cx, cy};
    const LD e = eps;
    const LD h = e / steps_per_eps;
    const int nref = static_cast<int>(std::ceil(static_cast<double>(2.2L * e / h)));

    // Reference leaves through the center, traced both ways and concatenated.
    std::array<Trace, 3> ref;
    for (int fam = 0; fam < 3; ++fam) {
        const Trace fwd = rk4_trace(w, fam, c, +1, h, nref);
        const Trace bwd = rk4_trace(w, fam, c, -1, h, nref);
        Trace& r = ref[fam];
        for (std::size_t k = bwd.xs.size(); k-- > 0;) {
            r.xs.push_back(bwd.xs[k]);
            r.ts.push_back(-bwd.ts[k]);
            r.as.push_back(bwd.as[k]);
        }
        for (std::size_t k = 1; k < fwd.xs.size(); ++k) {
            r.xs.push_back(fwd.xs[k]);
            r.ts.push_back(fwd.ts[k]);
            r.as.push_back(fwd.as[k]);
        }
    }

    const V2 x0 = rk4_trace(w, 2, c, +1, h, steps_per_eps).xs.back();

    // Fixed leg order: alternate through the families, each leg ending on the
    // reference leaf of the family left out.
    static constexpr int seq[6][2] = {{0, 1}, {2, 0}, {1, 2}, {0, 1}, {2, 0}, {1, 2}};
    const int nleg = static_cast<int>(std::ceil(static_cast<double>(3.0L * e / h)));
    V2 x = x0;
    for (const auto& leg : seq) {
        const int fam = leg[0];
        const Trace& target = ref[leg[1]];
        const V2 d = unit_dir(w, fam, x, +1);
        const int sigma = cross(x - c, d) > 0 ? -1 : +1;  // walk clockwise
        const Trace a = rk4_trace(w, fam, x, sigma, h, nleg);
        V2 hit;
        // Skip the first segment by default: the leg starts on or next to a
        // reference leaf and must not re-detect its own start point.
        if (!curve_intersect(a, h, target, h, 1, hit) &&
            !curve_intersect(a, h, target, h, 0, hit))
            throw EventNotFound("hexagon leg missed the reference leaf");
        x = hit;
    }
    return static_cast<double>(std::sqrt((x.x - x0.x) * (x.x - x0.x) +
                                         (x.y - x0.y) * (x.y - x0.y)));
}

std::pair<double, double> linearize(const LiouvilleMetric& m, double u, double v) {
    using boost::math::quadrature::gauss_kronrod;
    const Chart& c = m.chart();
    const double u0 = 0.5 * (c.u_min + c.u_max);
    const double v0 = 0.5 * (c.v_min + c.v_max);
    // The quadrature itself cannot tell a pole from a sharp peak, so scan the
    // path for zeros or sign changes of the coefficient first.
    auto scan = [](const Expr& f, double from, double to, auto make_error) {
        double prev = f.value(from);
        for (int i = 0; i <= 200; ++i) {
            const double t = from + (to - from) * i / 200.0;
            const double ft = f.value(t);
            if (std::abs(ft) < 1e-12 || ft * prev < 0) throw make_error();
            prev = ft;
        }
    };
    scan(m.a(), u0, u, [] { return SingularA("a vanishes on the linearizing path"); });
    scan(m.b(), v0, v, [] { return SingularB("b vanishes on the linearizing path"); });
    auto oriented = [](auto f, double from, double to) {
        if (from == to) return 0.0;
        const double lo = std::min(from, to);
        const double hi = std::max(from, to);
        const double r = gauss_kronrod<double, 31>::integrate(f, lo, hi, 10, 1e-12);
        return from < to ? r : -r;
    };
    auto inv_a = [&m](double t) { return 1.0 / m.a().value(t); };
    auto inv_b = [&m](double t) { return 1.0 / m.b().value(t); };
    return {oriented(inv_a, u0, u), oriented(inv_b, v0, v)};
}

double direction_cross_ratio(const LiouvilleMetric& m, double u, double v) {
    const double au = m.a().value(u);
    const double bv = m.b().value(v);
    if (std::abs(au) < 1e-12) throw SingularA("a vanishes at the cross-ratio point");
    if (std::abs(bv) < 1e-12) throw SingularB("b vanishes at the cross-ratio point");
    // Push (du, dv) through d(U, V) = (du/a, dv/b) for the four foliation
    // tangents: u = const, v = const, and the net pair (a, +-b).
    const double d[4][2] = {{0.0, 1.0 / bv}, {1.0 / au, 0.0}, {1.0, 1.0}, {1.0, -1.0}};
    auto det = [&](int i, int j) { return d[i][0] * d[j][1] - d[j][0] * d[i][1]; };
    return (det(0, 2) * det(1, 3)) / (det(0, 3) * det(1, 2));
}

double net_integral(const WebFields& w, const PhasePoint& s) {
    const Taylor2 P = w.P(s.u, s.v);
    return (s.q - P.v * s.p) * (s.q + P.v * s.p) / (1 + P.v * P.v);
}

} // namespace geoweb
