#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "geoweb/dual.hpp"
#include "geoweb/errors.hpp"
#include "geoweb/rng.hpp"

using namespace geoweb;

namespace {

double quadric_residual(const Eigen::Vector4d& x, int eps) {
    return x[0] * x[2] - x[1] * x[1] + eps * x[3] * x[3];
}

// Relative residual of the conic label (k, l) at a surface point.
double conic_label_residual(double k, double l, int eps, double z, double y) {
    double lead = k * k * (y - l) * (y - l);
    double mid = k * z * z;
    double val = lead - mid - eps;
    return std::abs(val) / std::max({1.0, std::abs(lead), std::abs(mid)});
}

PonceletSystem pinned_system() {
    return PonceletSystem(1, Eigen::Vector4d(1, 0.2, 0.7, -0.5),
                          Eigen::Vector4d(0.4, -0.3, 0.9, 1.2));
}

// Ten distinct wall planes tangent to the wall section, swept along the
// one-parameter family of planes over each surface height y.
std::vector<Eigen::Vector4d> ten_wall_planes(const Conic& cw) {
    std::vector<Eigen::Vector4d> planes;
    for (int i = 0; i < 80 && planes.size() < 10; ++i) {
        double y = -2.0 + 4.0 * i / 79.0;
        for (double zeta : wall_tangent_zetas(cw, y)) {
            if (planes.size() >= 10) break;
            planes.push_back(incidence_plane_zeta(y, zeta));
        }
    }
    return planes;
}

} // namespace

TEST_SUITE("dual") {

TEST_CASE("quadric matrix matches the defining form") {
    Rng rng(11);
    for (int eps : {1, -1}) {
        Eigen::Matrix4d q = quadric_matrix(eps);
        for (int i = 0; i < 20; ++i) {
            Eigen::Vector4d x(rng.gaussian(), rng.gaussian(), rng.gaussian(), rng.gaussian());
            CHECK(x.dot(q * x) == doctest::Approx(quadric_residual(x, eps)).epsilon(1e-14));
        }
    }
    CHECK_THROWS_AS(quadric_matrix(0), MalformedArtifact);
}

TEST_CASE("a slanted tangent line picks out its conic label") {
    EpsSurface s(1);
    EpsGeodesic g = geodesic_through(s, 1.0, 0.0, 2.0);
    CHECK_FALSE(g.special);
    CHECK(g.k == doctest::Approx(-0.75).epsilon(1e-15));
    CHECK(g.l == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

    // asymptotic slope: the label degenerates
    CHECK_THROWS_AS(geodesic_through(s, 1.0, 0.0, 1.0), DegenerateK);

    EpsGeodesic flat = geodesic_through(s, 1.0, 0.4, 0.0);
    CHECK(flat.special);
    CHECK(flat.l == 0.4);

    CHECK_THROWS_AS(geodesic_through(s, 1e-9, 0.0, 2.0), OutOfChart);
    CHECK_THROWS_AS(EpsSurface(0), MalformedArtifact);
    CHECK_THROWS_AS(EpsSurface(1, -0.5), MalformedArtifact);
}

TEST_CASE("the conic label satisfies its defining conic at the sample point") {
    Rng rng(23);
    for (int eps : {1, -1}) {
        EpsSurface s(eps);
        int measured = 0;
        while (measured < 100) {
            double z = rng.uniform(0.5, 2.0);
            double y = rng.uniform(-2.0, 2.0);
            double slope = (rng.uniform() < 0.5 ? -1 : 1) * rng.uniform(0.1, 3.0);
            try {
                EpsGeodesic g = geodesic_through(s, z, y, slope);
                CHECK(conic_label_residual(g.k, g.l, eps, z, y) <= 1e-12);
                ++measured;
            } catch (const DegenerateK&) {
                // a draw can land on the asymptotic slope; redraw
            }
        }
    }
}

TEST_CASE("dual points land on the quadric and match the worked example") {
    Eigen::Vector4d d = dual_point(-0.75, 2.0 / 3.0, 1);
    Eigen::Vector4d want = normalize_h(Eigen::Vector4d(3, -2, -4, 4));
    for (int i = 0; i < 4; ++i) CHECK(d[i] == doctest::Approx(want[i]).epsilon(1e-14));

    Rng rng(31);
    for (int eps : {1, -1}) {
        for (int i = 0; i < 500; ++i) {
            double k = (rng.uniform() < 0.5 ? -1 : 1) * rng.uniform(0.05, 3.0);
            double l = rng.uniform(-3.0, 3.0);
            CHECK(std::abs(quadric_residual(dual_point(k, l, eps), eps)) <= 1e-14);
        }
    }
    CHECK_THROWS_AS(dual_point(0.0, 1.0, 1), ZeroK);

    Eigen::Vector4d sp = dual_point_special(0.0);
    CHECK(sp[0] == 1.0);
    CHECK(sp[1] == 0.0);
    CHECK(sp[2] == 0.0);
    CHECK(sp[3] == 0.0);
    for (int i = 0; i < 50; ++i) {
        double l0 = rng.uniform(-3.0, 3.0);
        Eigen::Vector4d x = dual_point_special(l0);
        CHECK(x[3] == 0.0);
        CHECK(std::abs(quadric_residual(x, 1)) <= 1e-14);
    }
}

TEST_CASE("incidence planes pair to zero against incident dual points") {
    Eigen::Vector4d pi = incidence_plane(1.0, 0.0);
    CHECK(pi[0] == 0.0);
    CHECK(pi[1] == 0.0);
    CHECK(pi[2] == 1.0);
    CHECK(pi[3] == 1.0);
    CHECK(std::abs(pi.dot(dual_point(-0.75, 2.0 / 3.0, 1))) <= 1e-15);

    // distinct surface points give genuinely distinct covectors
    CHECK(plane_gap(incidence_plane(1.0, 0.0), incidence_plane(1.1, 0.0)) > 1e-3);
    CHECK(plane_gap(incidence_plane(1.0, 0.0), incidence_plane(1.0, 0.1)) > 1e-3);

    // the horizontal line through (z, y) is incident for every z
    Rng rng(41);
    for (int i = 0; i < 50; ++i) {
        double z = rng.uniform(0.2, 3.0);
        double y = rng.uniform(-2.0, 2.0);
        CHECK(std::abs(incidence_plane(z, y).dot(dual_point_special(y))) <= 1e-13);
    }
    CHECK_THROWS_AS(incidence_plane(0.0, 1.0), OutOfChart);
}

TEST_CASE("every surface point's plane touches the special section") {
    Rng rng(43);
    for (int eps : {1, -1}) {
        Conic c0(Eigen::Vector4d(0, 0, 0, 1), quadric_matrix(eps));
        for (int i = 0; i < 40; ++i) {
            double z = rng.uniform(0.3, 2.5);
            double y = rng.uniform(-2.0, 2.0);
            SectionTangency st = section_tangency(c0, incidence_plane(z, y));
            CHECK(std::abs(st.residual) <= 1e-12);
            // the touch point is the dual of the horizontal line at y
            CHECK(point_gap(st.point, dual_point_special(y)) <= 1e-8);
        }
    }
}

TEST_CASE("a genuinely tangent wall plane touches the wall section") {
    PonceletSystem sys = pinned_system();
    std::vector<Eigen::Vector4d> planes = ten_wall_planes(sys.cw);
    REQUIRE(planes.size() == 10);
    for (const Eigen::Vector4d& pi : planes) {
        SectionTangency st = section_tangency(sys.cw, pi);
        CHECK(std::abs(st.residual) <= 1e-9);
        Eigen::Vector4d p = st.point / st.point.norm();
        CHECK(std::abs(sys.cw.plane().dot(p)) <= 1e-10);
        CHECK(std::abs(pi.dot(p)) / pi.norm() <= 1e-9);
        CHECK(std::abs(quadric_residual(st.point, 1)) <= 1e-9);
    }
    // a generic plane through the chart is nowhere near tangency
    CHECK(std::abs(section_tangency(sys.cw, incidence_plane(1.0, 0.0)).residual) > 1e-6);
    // cutting a conic with its own plane leaves no line to test
    CHECK_THROWS_AS(section_tangency(sys.cw, Eigen::Vector4d(0.4, -0.3, 0.9, 1.2)),
                    DegenerateConic);
}

TEST_CASE("the conic parametrization closes on itself") {
    PonceletSystem sys = pinned_system();
    for (int i = 1; i <= 14; ++i) {
        double phi = 0.21 * i;
        Eigen::Vector4d x = sys.cI.point_at(phi);
        CHECK(std::abs(quadric_residual(x, 1)) <= 1e-10);
        CHECK(std::abs(sys.cI.plane().dot(x / x.norm())) <= 1e-10);
        double theta = sys.cI.theta_of(x);
        double pi = std::acos(-1.0);
        double diff = std::abs(std::remainder(theta - phi, pi));
        CHECK(diff <= 1e-9);
    }
}

TEST_CASE("tangency lines of the wall planes meet in a cone vertex") {
    PonceletSystem sys = pinned_system();

    // the pencil of quadrics through both sections degenerates to cones;
    // pick an apex whose tangent-plane family is real along the sweep
    std::vector<ConeMember> members =
        cone_members(sys.Q, Eigen::Vector4d(0, 0, 0, 1), sys.cw.plane());
    REQUIRE(!members.empty());
    Eigen::Vector4d apex = Eigen::Vector4d::Zero();
    std::vector<VertexLine> lines;
    for (const ConeMember& m : members) {
        CHECK(m.kernel_quality <= 1e-6);
        std::vector<Eigen::Vector4d> planes = wall_plane_family(sys.cw, m.vertex, 10);
        if (planes.size() < 10 || lines.size() == 10) continue;
        apex = m.vertex;
        for (const Eigen::Vector4d& pi : planes)
            lines.push_back(tangency_line(sys.c0, sys.cw, pi));
    }
    REQUIRE(lines.size() == 10);

    ConeFit fit = cone_vertex(lines);
    CHECK(fit.spread <= 1e-6);
    CHECK(point_gap(fit.vertex, apex) <= 1e-6);

    std::vector<VertexLine> two(lines.begin(), lines.begin() + 2);
    CHECK_THROWS_AS(cone_vertex(two), InsufficientSamples);

    // nudging one tangency point off the surface breaks the concurrency
    std::vector<VertexLine> bent = lines;
    bent[3].b[3] += 1e-2;
    CHECK_THROWS_AS(cone_vertex(bent), NoConcurrency);
    CHECK(fit_cone_vertex(bent).spread >= 1e-3);
}

TEST_CASE("a dual billiard orbit stays on its section and keeps tangency") {
    PonceletSystem sys = pinned_system();
    DualBilliardState st = orbit_start(sys, 0.7, 0);
    DualBilliardState prev = st;
    for (int i = 0; i < 60; ++i) {
        DualBilliardState next = poncelet_step(sys, prev);
        CHECK(std::abs(quadric_residual(next.l, 1)) <= 1e-10);
        CHECK(std::abs(sys.cI.plane().dot(next.l / next.l.norm())) <= 1e-10);
        CHECK(std::abs(section_tangency(sys.c0, next.plane).residual) <= 1e-8);
        CHECK(std::abs(section_tangency(sys.cw, next.plane).residual) <= 1e-8);
        if (i % 20 == 5) {
            DualBilliardState back = poncelet_reverse(sys, next);
            CHECK(point_gap(back.l, prev.l) <= 1e-9);
            CHECK(plane_gap(back.plane, prev.plane) <= 1e-9);
        }
        prev = next;
    }
}

TEST_CASE("the two orientations launch along different planes") {
    PonceletSystem sys = pinned_system();
    DualBilliardState a = orbit_start(sys, 0.7, 0);
    DualBilliardState b = orbit_start(sys, 0.7, 1);
    CHECK(point_gap(a.l, b.l) <= 1e-12);
    CHECK(plane_gap(a.plane, b.plane) > 1e-3);
    CHECK_THROWS_AS(orbit_start(sys, 0.7, 2), MalformedArtifact);
}

TEST_CASE("rotation numbers do not depend on the launch point") {
    PonceletSystem sys = pinned_system();
    double r1 = normalized_rotation(rotation_number(sys, 0.3, 0, 500));
    double r2 = normalized_rotation(rotation_number(sys, 1.9, 0, 500));
    CHECK(r1 > 0.0);
    CHECK(r1 < 0.5);
    CHECK(std::abs(r1 - r2) <= 1e-8);
    CHECK_THROWS_AS(rotation_number(sys, 0.3, 0, 50), InsufficientSamples);
}

TEST_CASE("a rotation bracket straddles the five-step resonance") {
    Eigen::Vector4d base(1, 0.2, 0.7, -0.5);
    Eigen::Vector4d wall(0.4, -0.3, 0.9, 1.2);
    auto rho_at = [&](double t) {
        PonceletSystem sys(1, base + t * Eigen::Vector4d(0, 0, 0, 1), wall);
        return normalized_rotation(rotation_number(sys, 0.7, 0, 500));
    };
    double lo = rho_at(0.6) - 0.2;
    double hi = rho_at(0.8) - 0.2;
    CHECK(lo * hi < 0);
}

TEST_CASE("degenerate section choices are rejected") {
    Eigen::Vector4d p(1, 0.2, 0.7, -0.5);
    Eigen::Vector4d pw(0.4, -0.3, 0.9, 1.2);
    CHECK_THROWS_AS(PonceletSystem(1, p, p), DegenerateConic);
    CHECK_THROWS_AS(PonceletSystem(1, Eigen::Vector4d(0, 0, 0, 1), pw), DegenerateConic);
    CHECK_THROWS_AS(PonceletSystem(0, p, pw), MalformedArtifact);

    // a plane tangent to the quadric cuts it in a degenerate section
    Eigen::Matrix4d q = quadric_matrix(1);
    Eigen::Vector4d tangent = q * dual_point_special(0.5);
    CHECK_THROWS_AS(Conic(tangent, q), DegenerateConic);
}

TEST_CASE("numerically integrated geodesics land on their conic") {
    Rng rng(7);
    for (int eps : {1, -1}) {
        EpsSurface s(eps);
        int measured = 0;
        while (measured < 40) {
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
            std::vector<EpsCurvePoint> path = integrate_eps_geodesic(s, z0, y0, slope, dz);
            REQUIRE(path.size() >= 2);
            const EpsCurvePoint& end = path.back();
            CHECK(end.z == doctest::Approx(z0 + dz).epsilon(1e-12));
            CHECK(conic_label_residual(g.k, g.l, eps, end.z, end.y) <= 1e-8);
            ++measured;
        }
    }
}

TEST_CASE("horizontal starts integrate to exactly horizontal lines") {
    EpsSurface s(-1);
    std::vector<EpsCurvePoint> path = integrate_eps_geodesic(s, 0.8, 0.37, 0.0, 1.4);
    for (const EpsCurvePoint& p : path) {
        CHECK(p.y == 0.37);
        CHECK(p.slope == 0.0);
    }
}

TEST_CASE("integration reverses to its starting data") {
    EpsSurface s(1);
    // slope below z keeps the label hyperbola-type: no vertical tangent
    std::vector<EpsCurvePoint> fwd = integrate_eps_geodesic(s, 0.9, -0.4, 0.6, 0.8);
    const EpsCurvePoint& end = fwd.back();
    std::vector<EpsCurvePoint> bwd = integrate_eps_geodesic(s, end.z, end.y, end.slope, -0.8);
    CHECK(std::abs(bwd.back().y - (-0.4)) <= 1e-8);
    CHECK(std::abs(bwd.back().slope - 0.6) <= 1e-8);

    CHECK_THROWS_AS(integrate_eps_geodesic(s, 1.0, 0.0, 0.3, -1.5), LeftChart);
    CHECK_THROWS_AS(integrate_eps_geodesic(s, 1e-9, 0.0, 0.3, 0.5), OutOfChart);
}

TEST_CASE("dual labels and tangent data round-trip") {
    struct Probe {
        int eps;
        double k, l, z;
    };
    for (const Probe& pr : {Probe{1, 0.8, 0.3, 1.3}, Probe{-1, 1.4, -0.2, 1.1},
                            Probe{1, -0.5, 1.0, 1.2}}) {
        EpsSurface s(pr.eps);
        double rad = (pr.eps + pr.k * pr.z * pr.z) / (pr.k * pr.k);
        REQUIRE(rad > 0);
        double y = pr.l + std::sqrt(rad);
        double slope = pr.z / (pr.k * (y - pr.l));
        EpsGeodesic g = geodesic_through(s, pr.z, y, slope);
        CHECK(g.k == doctest::Approx(pr.k).epsilon(1e-10));
        CHECK(g.l == doctest::Approx(pr.l).epsilon(1e-10));
        // the dual point of the label is incident to the point's plane
        double pair = incidence_plane(pr.z, y).dot(dual_point(g.k, g.l, pr.eps));
        CHECK(std::abs(pair) <= 1e-10);
    }
}

TEST_CASE("homogeneous normalization picks the first largest component") {
    Eigen::Vector4d a = normalize_h(Eigen::Vector4d(2, -2, 1, 0));
    CHECK(a[0] == 1.0);
    CHECK(a[1] == -1.0);
    CHECK(a[2] == 0.5);
    Eigen::Vector4d b = normalize_h(Eigen::Vector4d(0, -3, 1, 0));
    CHECK(b[1] == 1.0);
    CHECK_THROWS_AS(normalize_h(Eigen::Vector4d::Zero()), MalformedArtifact);
    Eigen::Vector4d x(0.3, -1.2, 0.8, 0.05);
    CHECK(point_gap(x, -x) == 0.0);
}

} // TEST_SUITE
