#pragma once

// Dense-output Dormand-Prince integration with level-crossing watchers.
//
// A watcher observes a scalar function of the state. When the function
// changes sign between accepted steps, the crossing is bracketed on the
// dense output and refined by a safeguarded secant/bisection hybrid.
// Stopping watchers end the run at the refined crossing; recording
// watchers fire a callback and integration continues. Sign change is
// required, so tangential near-misses are classified as no-crossing.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "geoweb/errors.hpp"

namespace geoweb {

template <std::size_t N>
using StateN = std::array<double, N>;

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double init_dt = 1e-3;
};

template <std::size_t N>
struct Watcher {
    std::function<double(const StateN<N>&)> level;
    // +1: fire only when the level increases through zero, -1: only when
    // it decreases, 0: either way.
    int direction = 0;
    bool stop = true;
    std::function<void(double, const StateN<N>&)> record;
    // Optional post-refinement filter. A hit failing it is dropped (used
    // for wrapped levels, whose branch jumps also flip the sign).
    std::function<bool(double, const StateN<N>&)> accept;
};

template <std::size_t N>
struct OdeOutcome {
    double t = 0;
    StateN<N> y{};
    int watcher = -1;  // index of the stopping watcher, -1 if t_end reached
};

namespace detail {

// Refine a bracketed sign change of g(t) to |g| <= 1e-13 (or until the
// bracket collapses). Secant proposals are accepted only when they fall
// strictly inside the bracket; otherwise bisect.
template <class Eval>
double refine_crossing(Eval&& g, double ta, double ga, double tb, double gb) {
    double best_t = std::abs(ga) < std::abs(gb) ? ta : tb;
    double best_g = std::min(std::abs(ga), std::abs(gb));
    for (int it = 0; it < 120; ++it) {
        if (best_g <= 1e-13) break;
        double tm;
        double denom = gb - ga;
        if (denom != 0) {
            tm = tb - gb * (tb - ta) / denom;
            double lo = std::min(ta, tb), hi = std::max(ta, tb);
            double pad = 0.01 * (hi - lo);
            if (!(tm > lo + pad && tm < hi - pad)) tm = 0.5 * (ta + tb);
        } else {
            tm = 0.5 * (ta + tb);
        }
        if (tm == ta || tm == tb) break;  // bracket at floating point limit
        double gm = g(tm);
        if (std::abs(gm) < best_g) { best_g = std::abs(gm); best_t = tm; }
        if ((ga < 0) == (gm < 0)) { ta = tm; ga = gm; }
        else { tb = tm; gb = gm; }
        if (std::abs(tb - ta) < 1e-15 * (1 + std::abs(ta))) break;
    }
    return best_t;
}

} // namespace detail

// Integrates y' = rhs(y, dydt, t) from t0 to t_end, watching for level
// crossings. `on_sample` (optional) receives every accepted step.
template <std::size_t N, class RHS>
OdeOutcome<N> integrate_watched(RHS&& rhs, const StateN<N>& y0, double t0, double t_end,
                                const OdeOptions& opts, std::vector<Watcher<N>>& watchers,
                                const std::function<void(double, const StateN<N>&)>& on_sample = {}) {
    namespace odeint = boost::numeric::odeint;
    using State = StateN<N>;
    auto stepper = odeint::make_dense_output(opts.abs_tol, opts.rel_tol,
                                             odeint::runge_kutta_dopri5<State>());
    stepper.initialize(y0, t0, opts.init_dt);

    std::vector<double> g_prev(watchers.size());
    for (std::size_t i = 0; i < watchers.size(); ++i) g_prev[i] = watchers[i].level(y0);
    if (on_sample) on_sample(t0, y0);

    auto eval_level = [&](std::size_t i, double t) {
        State y;
        stepper.calc_state(t, y);
        return watchers[i].level(y);
    };

    while (stepper.current_time() < t_end) {
        double ta;
        try {
            ta = stepper.do_step(rhs).first;
        } catch (const std::exception& e) {
            throw NumericError(std::string("integration step failed: ") + e.what());
        }
        double tb = std::min(stepper.current_time(), t_end);
        State yb;
        stepper.calc_state(tb, yb);

        struct Hit { double t; std::size_t idx; };
        std::vector<Hit> hits;
        for (std::size_t i = 0; i < watchers.size(); ++i) {
            double gb = watchers[i].level(yb);
            bool crossed = (g_prev[i] < 0 && gb > 0) || (g_prev[i] > 0 && gb < 0);
            if (crossed) {
                int dir = gb > g_prev[i] ? +1 : -1;
                if (watchers[i].direction == 0 || watchers[i].direction == dir) {
                    double tc = detail::refine_crossing(
                        [&](double t) { return eval_level(i, t); }, ta, g_prev[i], tb, gb);
                    hits.push_back({tc, i});
                }
            }
            g_prev[i] = gb;
        }
        std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
            return a.t != b.t ? a.t < b.t : a.idx < b.idx;
        });
        for (const Hit& h : hits) {
            State yc;
            stepper.calc_state(h.t, yc);
            if (watchers[h.idx].accept && !watchers[h.idx].accept(h.t, yc)) continue;
            if (watchers[h.idx].stop) {
                if (on_sample) on_sample(h.t, yc);
                return {h.t, yc, static_cast<int>(h.idx)};
            }
            if (watchers[h.idx].record) watchers[h.idx].record(h.t, yc);
        }
        if (on_sample) on_sample(tb, yb);
        if (tb >= t_end) return {t_end, yb, -1};
    }
    State yfin;
    stepper.calc_state(t_end, yfin);
    return {t_end, yfin, -1};
}

} // namespace geoweb
