#include "geoweb/metric.hpp"

#include <cmath>

namespace geoweb {

namespace {

// Midpoint sampling avoids chart corners, where elliptic-type coordinates
// may legitimately degenerate (e.g. sinh^2 u + sin^2 v = 0 at a focus on
// the boundary of the closed chart but not at any midpoint).
constexpr int kGridN = 64;

} // namespace

LiouvilleMetric::LiouvilleMetric(Expr a, Expr b, Chart chart)
    : a_(std::move(a)), b_(std::move(b)), chart_(chart) {
    if (chart_.u_min >= chart_.u_max || chart_.v_min >= chart_.v_max)
        throw ConfigError("chart rectangle is empty");
    for (int i = 0; i < kGridN; ++i) {
        double u = chart_.u_min + (i + 0.5) * (chart_.u_max - chart_.u_min) / kGridN;
        for (int j = 0; j < kGridN; ++j) {
            double v = chart_.v_min + (j + 0.5) * (chart_.v_max - chart_.v_min) / kGridN;
            double av = a_.value(u), bv = b_.value(v);
            double L = av * av + bv * bv;
            if (!(L > 0) || !std::isfinite(L))
                throw ConfigError("metric coefficient a^2+b^2 is not positive on the chart");
        }
    }
}

double LiouvilleMetric::lambda(double u, double v) const {
    double av = a_.value(u), bv = b_.value(v);
    return av * av + bv * bv;
}

void LiouvilleMetric::phi(double u, double v, double& phi_u, double& phi_v) const {
    Jet3 aj = a_.jet(u), bj = b_.jet(v);
    double L = aj.v * aj.v + bj.v * bj.v;
    phi_u = aj.v * aj.d1 / L;
    phi_v = bj.v * bj.d1 / L;
}

void LiouvilleMetric::require_inside(double u, double v) const {
    if (!chart_.contains(u, v))
        throw OutOfChart("point (" + std::to_string(u) + ", " + std::to_string(v) +
                         ") is outside the chart");
}

} // namespace geoweb
