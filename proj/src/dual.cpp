#include "geoweb/dual.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "geoweb/rng.hpp"

namespace geoweb {
namespace {

std::string fmt_spread(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Orthonormal basis of the orthogonal complement, taken from the tail
// columns of a Householder QR of the vector itself.
Eigen::Matrix<double, 4, 3> complement4(const Eigen::Vector4d& v) {
    if (!(v.norm() > 0)) throw MalformedArtifact("cannot take the complement of a zero vector");
    Eigen::HouseholderQR<Eigen::Matrix<double, 4, 1>> qr(v);
    Eigen::Matrix4d full = qr.householderQ();
    return full.rightCols<3>();
}

Eigen::Matrix<double, 3, 2> complement3(const Eigen::Vector3d& v) {
    if (!(v.norm() > 0)) throw MalformedArtifact("cannot take the complement of a zero vector");
    Eigen::HouseholderQR<Eigen::Matrix<double, 3, 1>> qr(v);
    Eigen::Matrix3d full = qr.householderQ();
    return full.rightCols<2>();
}

// Adjugate via the cyclic 2x2-minor formula; exact transpose-of-cofactors
// for any 3x3 input.
Eigen::Matrix3d adj3(const Eigen::Matrix3d& m) {
    Eigen::Matrix3d a;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
            int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            a(i, j) = m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
        }
    }
    return a;
}

Eigen::Matrix3d cross_mat(const Eigen::Vector3d& p) {
    Eigen::Matrix3d s;
    s << 0, -p[2], p[1],
         p[2], 0, -p[0],
         -p[1], p[0], 0;
    return s;
}

// Split a degenerate symmetric 3x3 form into its two lines. Rank 2 gives
// a distinct pair via the adjugate's kernel point, rank 1 a doubled line.
// A positive adjugate diagonal means the line pair is complex: no split.
std::optional<std::pair<Eigen::Vector3d, Eigen::Vector3d>> split_degenerate(
    const Eigen::Matrix3d& c) {
    double scale_c = c.cwiseAbs().maxCoeff();
    if (!(scale_c > 0)) return std::nullopt;
    Eigen::Matrix3d bm = adj3(c);
    double scale_b = std::max(bm.cwiseAbs().maxCoeff(), 1e-300);
    int i = 0;
    for (int j = 1; j < 3; ++j)
        if (std::abs(bm(j, j)) > std::abs(bm(i, i))) i = j;
    if (bm(i, i) > 1e-10 * scale_b) return std::nullopt;
    double beta = std::sqrt(std::max(-bm(i, i), 0.0));
    if (beta * beta <= 1e-12 * scale_b) {
        // adjugate is numerically zero: a doubled line, read off a row
        int j = 0;
        for (int k = 1; k < 3; ++k)
            if (std::abs(c(k, k)) > std::abs(c(j, j))) j = k;
        if (std::abs(c(j, j)) < 1e-12 * scale_c) return std::nullopt;
        Eigen::Vector3d line = c.row(j).transpose().normalized();
        return std::make_pair(line, line);
    }
    Eigen::Vector3d p = bm.col(i) / beta;
    Eigen::Matrix3d d = c + cross_mat(p);
    int r = 0, cc = 0;
    d.cwiseAbs().maxCoeff(&r, &cc);
    if (std::abs(d(r, cc)) < 1e-12 * scale_c) return std::nullopt;
    Eigen::Vector3d l1 = d.col(cc).normalized();
    Eigen::Vector3d l2 = d.row(r).transpose().normalized();
    return std::make_pair(l1, l2);
}

// Points of the form {s m s = 0} on the line {g.s = 0}, via the stable
// quadratic in the line's chart. The linear branch keeps the root at
// infinity; a clearly negative discriminant means no real point.
std::vector<Eigen::Vector3d> form_line_roots(const Eigen::Matrix3d& m, const Eigen::Vector3d& g) {
    Eigen::Matrix<double, 3, 2> chart = complement3(g);
    Eigen::Vector3d sa = chart.col(0), sb = chart.col(1);
    double a = sb.dot(m * sb);
    double b = sa.dot(m * sb);
    double c = sa.dot(m * sa);
    double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
    std::vector<Eigen::Vector3d> out;
    if (!(scale > 0)) return out;
    if (std::abs(a) < 1e-12 * scale) {
        if (std::abs(b) > 0) out.push_back(sa - (c / (2 * b)) * sb);
        out.push_back(sb);
        return out;
    }
    double disc = b * b - a * c;
    if (disc < -1e-10 * scale * scale) return out;
    double sd = std::sqrt(std::max(disc, 0.0));
    double q = -(b + std::copysign(sd, b != 0.0 ? b : 1.0));
    if (q != 0) {
        out.push_back(sa + (q / a) * sb);
        out.push_back(sa + (c / q) * sb);
    } else {
        out.push_back(sa);
    }
    return out;
}

// Real roots of c0 + c1 x + c2 x^2 + c3 x^3, degree-reduced against the
// largest coefficient, cubic case by companion-matrix eigenvalues.
std::vector<double> real_cubic_roots(const std::array<double, 4>& c) {
    double scale = std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2]), std::abs(c[3])});
    std::vector<double> out;
    if (!(scale > 0)) return out;
    int deg = 3;
    while (deg > 0 && std::abs(c[deg]) < 1e-12 * scale) --deg;
    if (deg == 0) return out;
    if (deg == 1) {
        out.push_back(-c[0] / c[1]);
        return out;
    }
    if (deg == 2) {
        double disc = c[1] * c[1] - 4 * c[2] * c[0];
        if (disc < 0) return out;
        double sd = std::sqrt(disc);
        double q = -(c[1] + std::copysign(sd, c[1] != 0.0 ? c[1] : 1.0));
        if (q != 0) {
            out.push_back(q / (2 * c[2]));
            out.push_back(2 * c[0] / q);
        } else {
            out.push_back(0.0);
        }
        return out;
    }
    Eigen::Matrix3d comp = Eigen::Matrix3d::Zero();
    comp(1, 0) = 1;
    comp(2, 1) = 1;
    comp(0, 2) = -c[0] / c[3];
    comp(1, 2) = -c[1] / c[3];
    comp(2, 2) = -c[2] / c[3];
    Eigen::EigenSolver<Eigen::Matrix3d> es(comp);
    for (int i = 0; i < 3; ++i) {
        std::complex<double> z = es.eigenvalues()[i];
        if (std::abs(z.imag()) < 1e-7 * (1 + std::abs(z.real()))) out.push_back(z.real());
    }
    return out;
}

// Polish a 2-residual zero (t G0 t, t Gw t) on the unit sphere; reports
// whether the refined point genuinely solves both.
bool newton_tangency_pair(const Eigen::Matrix3d& g0, const Eigen::Matrix3d& gw,
                          Eigen::Vector3d& t) {
    if (!(t.norm() > 0)) return false;
    t.normalize();
    for (int it = 0; it < 6; ++it) {
        Eigen::Vector2d r(t.dot(g0 * t), t.dot(gw * t));
        Eigen::Matrix<double, 2, 3> jac;
        jac.row(0) = 2.0 * (g0 * t).transpose();
        jac.row(1) = 2.0 * (gw * t).transpose();
        Eigen::Vector3d dt = jac.completeOrthogonalDecomposition().solve(r);
        t -= dt;
        if (!(t.norm() > 0)) return false;
        t.normalize();
    }
    Eigen::Vector2d r(t.dot(g0 * t), t.dot(gw * t));
    return std::max(std::abs(r[0]), std::abs(r[1])) < 1e-8;
}

std::vector<Eigen::Vector3d> dedupe_directions(const std::vector<Eigen::Vector3d>& cand,
                                               double tol) {
    std::vector<Eigen::Vector3d> out;
    for (Eigen::Vector3d t : cand) {
        int i = 0;
        for (int j = 1; j < 3; ++j)
            if (std::abs(t[j]) > std::abs(t[i])) i = j;
        if (t[i] < 0) t = -t;
        bool dup = false;
        for (const auto& u : out) {
            if ((t - u).norm() < tol || (t + u).norm() < tol) {
                dup = true;
                break;
            }
        }
        if (!dup) out.push_back(t);
    }
    return out;
}

// Pull a homogeneous point back onto a conic without leaving its plane:
// Newton on the induced 3x3 form in plane coordinates.
Eigen::Vector4d polish_on_conic(const Conic& c, const Eigen::Vector4d& x) {
    Eigen::Vector3d s = c.basis().transpose() * x;
    if (!(s.norm() > 0)) throw MalformedArtifact("cannot polish a point off the conic's plane");
    s.normalize();
    for (int it = 0; it < 3; ++it) {
        Eigen::Vector3d g = c.section() * s;
        double f = s.dot(g);
        double g2 = g.squaredNorm();
        if (!(g2 > 0)) break;
        s -= (f / (2.0 * g2)) * g;
    }
    return normalize_h(c.basis() * s);
}

// Both intersection points of a plane's trace line with the conic.
std::vector<Eigen::Vector4d> trace_points(const Conic& c, const Eigen::Vector4d& plane) {
    Eigen::Vector3d w = c.basis().transpose() * plane;
    double nw = w.norm();
    if (nw < 1e-13 * plane.norm())
        throw DegenerateConic("plane coincides with the section's plane; no trace line");
    w /= nw;
    std::vector<Eigen::Vector4d> out;
    for (const auto& s : form_line_roots(c.section(), w))
        out.push_back(normalize_h(c.basis() * s));
    return out;
}

// The common tangent plane through l other than the one already carried.
Eigen::Vector4d other_tangent_plane(const PonceletSystem& sys, const Eigen::Vector4d& l,
                                    const Eigen::Vector4d& plane) {
    std::vector<Eigen::Vector4d> cands = both_tangent_planes(l, sys.c0, sys.cw);
    if (cands.size() < 2)
        throw NoRealContinuation("the tangent-plane pair through the current point is not real");
    std::size_t inear = 0, ifar = 0;
    double dnear = std::numeric_limits<double>::infinity(), dfar = -1;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        double gap = plane_gap(cands[i], plane);
        if (gap < dnear) {
            dnear = gap;
            inear = i;
        }
        if (gap > dfar) {
            dfar = gap;
            ifar = i;
        }
    }
    (void)inear;
    if (dnear > 1e-4)
        throw LostTangency("the carried plane is no longer tangent to both sections");
    return cands[ifar];
}

// Second intersection of the plane's trace with the orbit section.
Eigen::Vector4d second_trace_point(const PonceletSystem& sys, const Eigen::Vector4d& plane,
                                   const Eigen::Vector4d& l) {
    std::vector<Eigen::Vector4d> pts = trace_points(sys.cI, plane);
    if (pts.empty()) throw NoRealContinuation("the plane's trace misses the orbit section");
    std::size_t best = 0;
    double dbest = -1;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double gap = point_gap(pts[i], l);
        if (gap > dbest) {
            dbest = gap;
            best = i;
        }
    }
    return polish_on_conic(sys.cI, pts[best]);
}

int checked_eps(int e) {
    if (e != 1 && e != -1) throw MalformedArtifact("the curvature sign must be +1 or -1");
    return e;
}

} // namespace

EpsSurface::EpsSurface(int e, double zmin) : eps(checked_eps(e)), z_min(zmin) {
    if (!(zmin > 0) || !std::isfinite(zmin))
        throw MalformedArtifact("the chart floor in z must be positive");
}

Eigen::Vector4d normalize_h(const Eigen::Vector4d& x) {
    int imax = 0;
    double best = -1;
    for (int i = 0; i < 4; ++i) {
        double a = std::abs(x[i]);
        if (a > best) {
            best = a;
            imax = i;
        }
    }
    if (!(best > 0)) throw MalformedArtifact("cannot normalize a zero homogeneous vector");
    return x / x[imax];
}

double point_gap(const Eigen::Vector4d& x, const Eigen::Vector4d& y) {
    Eigen::Vector4d a = normalize_h(x), b = normalize_h(y);
    return std::min((a - b).norm(), (a + b).norm());
}

double plane_gap(const Eigen::Vector4d& p, const Eigen::Vector4d& q) {
    double np = p.norm(), nq = q.norm();
    if (!(np > 0) || !(nq > 0)) throw MalformedArtifact("cannot compare a zero covector");
    Eigen::Vector4d a = p / np, b = q / nq;
    return std::min((a - b).norm(), (a + b).norm());
}

Eigen::Matrix4d quadric_matrix(int eps) {
    checked_eps(eps);
    Eigen::Matrix4d q = Eigen::Matrix4d::Zero();
    q(0, 2) = q(2, 0) = 0.5;
    q(1, 1) = -1;
    q(3, 3) = eps;
    return q;
}

Eigen::Vector4d project_to_quadric(Eigen::Vector4d x, const Eigen::Matrix4d& Q) {
    for (int it = 0; it < 4; ++it) {
        Eigen::Vector4d g = 2.0 * (Q * x);
        double f = x.dot(Q * x);
        double g2 = g.squaredNorm();
        if (!(g2 > 0)) break;
        x -= (f / g2) * g;
    }
    return normalize_h(x);
}

EpsGeodesic geodesic_through(const EpsSurface& s, double z, double y, double slope) {
    if (!std::isfinite(z) || !std::isfinite(y) || !std::isfinite(slope))
        throw MalformedArtifact("nonfinite surface point or slope");
    if (!(z > s.z_min)) throw OutOfChart("the point lies at or below the chart floor in z");
    EpsGeodesic g;
    if (slope == 0) {
        g.special = true;
        g.l = y;
        return g;
    }
    double r = z / slope;
    double num = r * r - s.eps;
    if (std::abs(num) <= 1e-12 * std::max(r * r, 1.0))
        throw DegenerateK("the tangent direction carries no conic label");
    g.k = num / (z * z);
    g.l = y - z / (g.k * slope);
    return g;
}

Eigen::Vector4d dual_point(double k, double l, int eps) {
    checked_eps(eps);
    if (!(std::abs(k) > 1e-300)) throw ZeroK("a vanishing conic label has no dual point");
    if (!std::isfinite(k) || !std::isfinite(l)) throw MalformedArtifact("nonfinite conic label");
    Eigen::Vector4d x(k * k, -k * k * l, k * k * l * l - eps, -k);
    return normalize_h(x);
}

Eigen::Vector4d dual_point_special(double l0) {
    if (!std::isfinite(l0)) throw MalformedArtifact("nonfinite line height");
    return normalize_h(Eigen::Vector4d(1, -l0, l0 * l0, 0));
}

Eigen::Vector4d incidence_plane(double z, double y) {
    if (!std::isfinite(z) || !std::isfinite(y)) throw MalformedArtifact("nonfinite surface point");
    if (!(z > 0)) throw OutOfChart("incidence planes require a point with positive z");
    return Eigen::Vector4d(y * y, 2 * y, 1, z * z);
}

Eigen::Vector4d incidence_plane_zeta(double y, double zeta) {
    if (!std::isfinite(y) || !std::isfinite(zeta))
        throw MalformedArtifact("nonfinite plane parameters");
    return Eigen::Vector4d(y * y, 2 * y, 1, zeta);
}

Conic::Conic(const Eigen::Vector4d& plane, const Eigen::Matrix4d& Q) {
    double n = plane.norm();
    if (!(n > 0)) throw MalformedArtifact("a conic needs a nonzero plane covector");
    plane_ = plane / n;
    B_ = complement4(plane_);
    M_ = B_.transpose() * Q * B_;
    M_ = 0.5 * (M_ + M_.transpose().eval());
    double fm = M_.norm();
    if (!(fm > 0)) throw DegenerateConic("the plane section vanishes identically");
    M_ /= fm;
    if (std::abs(M_.determinant()) < 1e-10)
        throw DegenerateConic("the plane cuts a degenerate section");
    A_ = adj3(M_);
    A_ /= A_.norm();
}

void Conic::ensure_param() const {
    if (have_param_) return;
    Rng rng(99);
    for (int attempt = 0; attempt < 200; ++attempt) {
        Eigen::Vector3d sa(rng.gaussian(), rng.gaussian(), rng.gaussian());
        Eigen::Vector3d sb(rng.gaussian(), rng.gaussian(), rng.gaussian());
        double a = sb.dot(M_ * sb);
        double b = sa.dot(M_ * sb);
        double c = sa.dot(M_ * sa);
        double disc = b * b - a * c;
        if (!(disc > 1e-8) || !(std::abs(a) > 1e-6)) continue;
        Eigen::Vector3d s = sa + ((-b + std::sqrt(disc)) / a) * sb;
        if (!(s.norm() > 0)) continue;
        s.normalize();
        for (int it = 0; it < 3; ++it) {
            Eigen::Vector3d g = M_ * s;
            double f = s.dot(g);
            double g2 = g.squaredNorm();
            if (!(g2 > 0)) break;
            s -= (f / (2.0 * g2)) * g;
            s.normalize();
        }
        if (std::abs(s.dot(M_ * s)) < 1e-12) {
            s0_ = s;
            W_ = complement3(s);
            have_param_ = true;
            return;
        }
    }
    throw DomainError("found no real point on the conic section to anchor its parametrization");
}

double Conic::theta_of(const Eigen::Vector4d& x) const {
    ensure_param();
    Eigen::Vector3d s = B_.transpose() * x;
    double th = std::atan2(W_.col(1).dot(s), W_.col(0).dot(s));
    const double pi = std::numbers::pi;
    if (th < 0) th += pi;
    if (th >= pi) th -= pi;
    return th;
}

Eigen::Vector4d Conic::point_at(double phi) const {
    ensure_param();
    Eigen::Vector3d d = std::cos(phi) * W_.col(0) + std::sin(phi) * W_.col(1);
    double dmd = d.dot(M_ * d);
    double dms = d.dot(M_ * s0_);
    Eigen::Vector3d s;
    if (std::abs(dmd) < 1e-14) {
        s = d;
    } else {
        double t = -2.0 * dms / dmd;
        s = std::abs(t) <= 1e-13 ? s0_ : Eigen::Vector3d(s0_ + t * d);
    }
    return normalize_h(B_ * s);
}

SectionTangency section_tangency(const Conic& c, const Eigen::Vector4d& pi) {
    Eigen::Vector3d w = c.basis().transpose() * pi;
    double nw = w.norm();
    if (nw < 1e-13 * pi.norm())
        throw DegenerateConic("plane coincides with the section's plane; nothing to cut");
    w /= nw;
    SectionTangency out;
    out.residual = w.dot(c.dual() * w);
    Eigen::Matrix<double, 3, 2> chart = complement3(w);
    Eigen::Vector3d sa = chart.col(0), sb = chart.col(1);
    const Eigen::Matrix3d& m = c.section();
    double a = sb.dot(m * sb);
    double b = sa.dot(m * sb);
    double cc = sa.dot(m * sa);
    // double root of the restricted quadratic, led by the larger endpoint
    // coefficient for stability
    Eigen::Vector3d s;
    if (std::abs(a) >= std::abs(cc)) {
        s = std::abs(a) > 0 ? Eigen::Vector3d(sa - (b / a) * sb) : sa;
    } else {
        s = sb - (b / cc) * sa;
    }
    out.point = normalize_h(c.basis() * s);
    return out;
}

std::vector<ConeMember> cone_members(const Eigen::Matrix4d& Q, const Eigen::Vector4d& p0,
                                     const Eigen::Vector4d& pw) {
    double n0 = p0.norm(), nw = pw.norm();
    if (!(n0 > 0) || !(nw > 0)) throw MalformedArtifact("pencil planes must be nonzero");
    Eigen::Vector4d a = p0 / n0, b = pw / nw;
    Eigen::Matrix4d r = 0.5 * (a * b.transpose() + b * a.transpose());
    // det(Q - lambda r) has degree two because r has rank two; three
    // evaluations pin the quadratic exactly
    auto dets = [&](double lam) { return (Q - lam * r).determinant(); };
    double d0 = dets(0), dp = dets(1), dm = dets(-1);
    double c0 = d0;
    double c1 = (dp - dm) / 2;
    double c2 = (dp + dm) / 2 - d0;
    std::vector<double> roots = real_cubic_roots({c0, c1, c2, 0});
    std::vector<ConeMember> out;
    for (double lam : roots) {
        Eigen::Matrix4d s = Q - lam * r;
        Eigen::JacobiSVD<Eigen::Matrix4d> svd(s, Eigen::ComputeFullV);
        ConeMember m;
        m.lambda = lam;
        m.vertex = normalize_h(svd.matrixV().col(3));
        m.kernel_quality = svd.singularValues()[3] / svd.singularValues()[0];
        out.push_back(m);
    }
    return out;
}

std::vector<Eigen::Vector4d> both_tangent_planes(const Eigen::Vector4d& l, const Conic& c0,
                                                 const Conic& cw) {
    Eigen::Matrix<double, 4, 3> phi = complement4(l);
    Eigen::Matrix3d w0 = c0.basis().transpose() * phi;
    Eigen::Matrix3d ww = cw.basis().transpose() * phi;
    Eigen::Matrix3d g0 = w0.transpose() * c0.dual() * w0;
    Eigen::Matrix3d gw = ww.transpose() * cw.dual() * ww;
    g0 = 0.5 * (g0 + g0.transpose().eval());
    gw = 0.5 * (gw + gw.transpose().eval());
    double f0 = g0.norm(), fw = gw.norm();
    if (!(f0 > 0) || !(fw > 0))
        throw DegenerateConic("the tangency forms collapse at this point");
    g0 /= f0;
    gw /= fw;
    // degenerate members of the pencil g0 + x gw carry every common zero
    // on their line pair; one split member recovers all tangent planes
    const double xs[4] = {-2.0, -0.5, 0.5, 2.0};
    Eigen::Matrix4d vand;
    Eigen::Vector4d dets;
    for (int i = 0; i < 4; ++i) {
        double x = xs[i];
        vand(i, 0) = 1;
        vand(i, 1) = x;
        vand(i, 2) = x * x;
        vand(i, 3) = x * x * x;
        dets[i] = (g0 + x * gw).determinant();
    }
    Eigen::Vector4d coef = vand.fullPivLu().solve(dets);
    std::vector<double> roots = real_cubic_roots({coef[0], coef[1], coef[2], coef[3]});
    std::sort(roots.begin(), roots.end(),
              [](double p, double q) { return std::abs(p) < std::abs(q); });
    std::vector<Eigen::Vector3d> sols;
    for (double x : roots) {
        auto lines = split_degenerate(g0 + x * gw);
        if (!lines) continue;
        std::vector<Eigen::Vector3d> cand;
        for (const Eigen::Vector3d& g : {lines->first, lines->second}) {
            for (Eigen::Vector3d t : form_line_roots(g0, g)) {
                if (newton_tangency_pair(g0, gw, t)) cand.push_back(t);
            }
        }
        if (cand.empty()) continue;
        sols = dedupe_directions(cand, 1e-5);
        break;
    }
    std::vector<Eigen::Vector4d> out;
    out.reserve(sols.size());
    for (const auto& t : sols) out.push_back(normalize_h(phi * t));
    return out;
}

std::vector<double> wall_tangent_zetas(const Conic& cw, double y) {
    Eigen::Vector3d wc = cw.basis().transpose() * incidence_plane_zeta(y, 0);
    Eigen::Vector3d wd = cw.basis().transpose() * Eigen::Vector4d(0, 0, 0, 1);
    const Eigen::Matrix3d& a3 = cw.dual();
    double a = wd.dot(a3 * wd);
    double b = wc.dot(a3 * wd);
    double c = wc.dot(a3 * wc);
    double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
    std::vector<double> out;
    if (!(scale > 0)) return out;
    if (std::abs(a) < 1e-12 * scale) {
        if (std::abs(b) > 0) out.push_back(-c / (2 * b));
        return out;
    }
    double disc = b * b - a * c;
    if (disc < 0) return out;
    double sd = std::sqrt(disc);
    double q = -(b + std::copysign(sd, b != 0.0 ? b : 1.0));
    if (q != 0) {
        out.push_back(q / a);
        out.push_back(c / q);
    } else {
        out.push_back(0.0);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Eigen::Vector4d> wall_plane_family(const Conic& cw, const Eigen::Vector4d& vertex,
                                               int count) {
    if (count < 1) throw MalformedArtifact("the family needs a positive plane count");
    double nv = vertex.norm();
    if (!(nv > 0)) throw MalformedArtifact("the cone apex must be a nonzero point");
    Eigen::Vector4d v = vertex / nv;
    std::vector<Eigen::Vector4d> out;
    for (int i = 0; i < 400 && static_cast<int>(out.size()) < count; ++i) {
        double y = -2.0 + 4.0 * i / 399.0;
        for (double zeta : wall_tangent_zetas(cw, y)) {
            if (static_cast<int>(out.size()) >= count) break;
            Eigen::Vector4d pi = incidence_plane_zeta(y, zeta);
            // a plane of the apex's family passes through the apex
            if (std::abs(pi.dot(v)) / pi.norm() <= 1e-8) out.push_back(pi);
        }
    }
    return out;
}

VertexLine tangency_line(const Conic& c0, const Conic& cw, const Eigen::Vector4d& pi) {
    VertexLine ln;
    ln.a = section_tangency(c0, pi).point;
    ln.b = section_tangency(cw, pi).point;
    return ln;
}

ConeFit fit_cone_vertex(const std::vector<VertexLine>& lines) {
    if (lines.size() < 3)
        throw InsufficientSamples("a vertex fit needs at least three tangency lines");
    Eigen::MatrixXd rows(4 * static_cast<int>(lines.size()), 4);
    int r = 0;
    for (const VertexLine& ln : lines) {
        Eigen::Vector4d a = ln.a, b = ln.b;
        double na = a.norm(), nb = b.norm();
        if (!(na > 0) || !(nb > 0)) throw MalformedArtifact("a tangency line endpoint is zero");
        a /= na;
        b /= nb;
        // x lies on span{a,b} exactly when all four 3x3 minors of the
        // stacked matrix [a; b; x] vanish; each minor is linear in x
        for (int skip = 0; skip < 4; ++skip) {
            int idx[3];
            int t = 0;
            for (int i = 0; i < 4; ++i)
                if (i != skip) idx[t++] = i;
            int i = idx[0], j = idx[1], k = idx[2];
            Eigen::RowVector4d row = Eigen::RowVector4d::Zero();
            row[i] = a[j] * b[k] - a[k] * b[j];
            row[j] = -(a[i] * b[k] - a[k] * b[i]);
            row[k] = a[i] * b[j] - a[j] * b[i];
            rows.row(r++) = row;
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeThinV);
    Eigen::Vector4d x = svd.matrixV().col(3);
    ConeFit fit;
    double spread = 0;
    for (const VertexLine& ln : lines) {
        Eigen::Matrix<double, 4, 2> ab;
        ab.col(0) = ln.a.normalized();
        ab.col(1) = ln.b.normalized();
        Eigen::HouseholderQR<Eigen::Matrix<double, 4, 2>> qr(ab);
        Eigen::Matrix4d full = qr.householderQ();
        Eigen::Matrix<double, 4, 2> span = full.leftCols<2>();
        Eigen::Vector4d res = x - span * (span.transpose() * x);
        spread = std::max(spread, res.norm() / x.norm());
    }
    fit.vertex = normalize_h(x);
    fit.spread = spread;
    return fit;
}

ConeFit cone_vertex(const std::vector<VertexLine>& lines, double spread_tol) {
    ConeFit fit = fit_cone_vertex(lines);
    if (fit.spread > spread_tol)
        throw NoConcurrency("tangency lines are not concurrent; spread " +
                            fmt_spread(fit.spread));
    return fit;
}

PonceletSystem::PonceletSystem(int e, const Eigen::Vector4d& pI, const Eigen::Vector4d& pw)
    : eps(checked_eps(e)),
      Q(quadric_matrix(e)),
      c0(Eigen::Vector4d(0, 0, 0, 1), Q),
      cI(pI, Q),
      cw(pw, Q) {
    if (plane_gap(pI, pw) < 1e-9)
        throw DegenerateConic("the orbit and wall sections coincide");
    Eigen::Vector4d special(0, 0, 0, 1);
    if (plane_gap(pI, special) < 1e-9 || plane_gap(pw, special) < 1e-9)
        throw DegenerateConic("a billiard section coincides with the special section");
}

DualBilliardState orbit_start(const PonceletSystem& sys, double phi, int orient) {
    if (orient != 0 && orient != 1)
        throw MalformedArtifact("the orientation flag must be 0 or 1");
    Eigen::Vector4d l = polish_on_conic(sys.cI, sys.cI.point_at(phi));
    std::vector<Eigen::Vector4d> cands = both_tangent_planes(l, sys.c0, sys.cw);
    if (cands.size() < 2)
        throw NoRealContinuation("no real pair of tangent planes through the start point");
    std::sort(cands.begin(), cands.end(), [](const Eigen::Vector4d& p, const Eigen::Vector4d& q) {
        Eigen::Vector4d a = normalize_h(p), b = normalize_h(q);
        for (int i = 0; i < 4; ++i) {
            if (a[i] < b[i]) return true;
            if (a[i] > b[i]) return false;
        }
        return false;
    });
    DualBilliardState st;
    st.l = l;
    st.plane = cands[static_cast<std::size_t>(orient)];
    return st;
}

DualBilliardState poncelet_step(const PonceletSystem& sys, const DualBilliardState& st) {
    Eigen::Vector4d next_plane = other_tangent_plane(sys, st.l, st.plane);
    if (std::abs(section_tangency(sys.c0, next_plane).residual) > 1e-8 ||
        std::abs(section_tangency(sys.cw, next_plane).residual) > 1e-8)
        throw LostTangency("the continuation plane misses tangency to a fixed section");
    DualBilliardState out;
    out.l = second_trace_point(sys, next_plane, st.l);
    out.plane = next_plane;
    return out;
}

DualBilliardState poncelet_reverse(const PonceletSystem& sys, const DualBilliardState& st) {
    DualBilliardState out;
    out.l = second_trace_point(sys, st.plane, st.l);
    out.plane = other_tangent_plane(sys, out.l, st.plane);
    return out;
}

double wall_parameter(const PonceletSystem& sys, const DualBilliardState& st) {
    return sys.cw.theta_of(section_tangency(sys.cw, st.plane).point);
}

double rotation_number(const PonceletSystem& sys, double phi0, int orient, int n_steps) {
    if (n_steps < 100)
        throw InsufficientSamples("rotation numbers need at least one hundred steps");
    DualBilliardState st = orbit_start(sys, phi0, orient);
    std::vector<double> theta;
    theta.reserve(static_cast<std::size_t>(n_steps) + 1);
    theta.push_back(wall_parameter(sys, st));
    for (int j = 0; j < n_steps; ++j) {
        st = poncelet_step(sys, st);
        theta.push_back(wall_parameter(sys, st));
    }
    // weighted Birkhoff average of the per-step advance: the bump weights
    // kill boundary error far faster than the plain mean for orbits
    // conjugate to irrational rotations
    const double pi = std::numbers::pi;
    double sw = 0, swd = 0;
    for (int j = 0; j < n_steps; ++j) {
        double d = theta[static_cast<std::size_t>(j) + 1] - theta[static_cast<std::size_t>(j)];
        d -= pi * std::floor(d / pi);
        double t = (j + 0.5) / n_steps;
        double w = std::exp(-1.0 / (t * (1.0 - t)));
        sw += w;
        swd += w * d;
    }
    return swd / (pi * sw);
}

double normalized_rotation(double rho) {
    double r = rho - std::floor(rho);
    return std::min(r, 1.0 - r);
}

std::vector<EpsCurvePoint> integrate_eps_geodesic(const EpsSurface& s, double z0, double y0,
                                                  double slope, double dz) {
    if (!std::isfinite(z0) || !std::isfinite(y0) || !std::isfinite(slope) || !std::isfinite(dz))
        throw MalformedArtifact("nonfinite initial data");
    if (!(z0 > s.z_min)) throw OutOfChart("the start lies at or below the chart floor in z");
    if (dz == 0) return {{z0, y0, slope}};
    double z1 = z0 + dz;
    if (!(z1 > s.z_min)) throw LeftChart("the geodesic leaves the chart through the z floor");
    using State = std::array<double, 2>;
    const double e = s.eps;
    auto rhs = [e](const State& x, State& dxdz, double z) {
        dxdz[0] = x[1];
        dxdz[1] = e * x[1] * x[1] * x[1] / (z * z * z);
    };
    std::vector<EpsCurvePoint> out;
    auto observe = [&out](const State& x, double z) {
        if (!std::isfinite(x[0]) || !std::isfinite(x[1]))
            throw DomainError("the slope blew up during integration");
        if (out.size() > 200000) throw DomainError("step size collapsed during integration");
        out.push_back({z, x[0], x[1]});
    };
    State x{y0, slope};
    namespace ode = boost::numeric::odeint;
    auto stepper = ode::make_controlled(1e-12, 1e-12, ode::runge_kutta_dopri5<State>());
    try {
        ode::integrate_adaptive(stepper, rhs, x, z0, z1, dz / 64.0, observe);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& ex) {
        throw DomainError(std::string("integration failed: ") + ex.what());
    }
    return out;
}

} // namespace geoweb
