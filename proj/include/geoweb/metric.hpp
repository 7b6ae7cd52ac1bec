#pragma once

// Liouville metrics [a^2(u)+b^2(v)](du^2+dv^2) on a rectangular chart,
// plus the Clairaut form E(v)du^2+dv^2 used for the linear-integral check.

#include <optional>
#include <string>

#include "geoweb/expr.hpp"

namespace geoweb {

struct Chart {
    double u_min, u_max, v_min, v_max;
    std::optional<double> v_period;  // if set, v wraps with this period

    bool contains(double u, double v) const {
        if (u < u_min || u > u_max) return false;
        if (v_period) return true;
        return v >= v_min && v <= v_max;
    }
};

class LiouvilleMetric {
  public:
    LiouvilleMetric(Expr a, Expr b, Chart chart);

    const Expr& a() const { return a_; }
    const Expr& b() const { return b_; }
    const Chart& chart() const { return chart_; }

    double lambda(double u, double v) const;            // a^2+b^2
    // Conformal log-derivative pair (phi_u, phi_v) = (a a'/Lambda, b b'/Lambda).
    void phi(double u, double v, double& phi_u, double& phi_v) const;

    void require_inside(double u, double v) const;      // throws OutOfChart

  private:
    Expr a_, b_;
    Chart chart_;
};

struct ClairautMetric {
    Expr E;  // in v; metric E(v) du^2 + dv^2
    Chart chart;

    // Conserved momentum of the u-translation symmetry.
    double momentum(double v, double du) const { return E.value(v) * du; }
};

} // namespace geoweb
