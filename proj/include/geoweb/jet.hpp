#pragma once

// Truncated Taylor arithmetic in one and two variables.
//
// Jet3   : value and first three derivatives of a univariate function.
// Grad2  : value and gradient of a bivariate function.
// Taylor2: value, gradient and Hessian of a bivariate function.
//
// Elementary functions are applied through small tables of outer
// derivatives, so a new function needs one table entry, not three
// composition rules.

#include <cmath>

#include "geoweb/errors.hpp"

namespace geoweb {

struct Jet3 {
    double v = 0, d1 = 0, d2 = 0, d3 = 0;

    static Jet3 con(double c) { return {c, 0, 0, 0}; }
    static Jet3 var(double x) { return {x, 1, 0, 0}; }
};

inline Jet3 operator+(const Jet3& a, const Jet3& b) {
    return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3};
}
inline Jet3 operator-(const Jet3& a, const Jet3& b) {
    return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3};
}
inline Jet3 operator-(const Jet3& a) { return {-a.v, -a.d1, -a.d2, -a.d3}; }
inline Jet3 operator*(const Jet3& a, const Jet3& b) {
    return {a.v * b.v,
            a.d1 * b.v + a.v * b.d1,
            a.d2 * b.v + 2 * a.d1 * b.d1 + a.v * b.d2,
            a.d3 * b.v + 3 * a.d2 * b.d1 + 3 * a.d1 * b.d2 + a.v * b.d3};
}
inline Jet3 operator/(const Jet3& a, const Jet3& b) {
    if (b.v == 0) throw DomainError("division by zero in jet arithmetic");
    Jet3 w;
    w.v = a.v / b.v;
    w.d1 = (a.d1 - w.v * b.d1) / b.v;
    w.d2 = (a.d2 - w.v * b.d2 - 2 * w.d1 * b.d1) / b.v;
    w.d3 = (a.d3 - w.v * b.d3 - 3 * w.d1 * b.d2 - 3 * w.d2 * b.d1) / b.v;
    return w;
}
inline Jet3 operator+(const Jet3& a, double c) { return a + Jet3::con(c); }
inline Jet3 operator+(double c, const Jet3& a) { return Jet3::con(c) + a; }
inline Jet3 operator-(const Jet3& a, double c) { return a - Jet3::con(c); }
inline Jet3 operator-(double c, const Jet3& a) { return Jet3::con(c) - a; }
inline Jet3 operator*(const Jet3& a, double c) { return {a.v * c, a.d1 * c, a.d2 * c, a.d3 * c}; }
inline Jet3 operator*(double c, const Jet3& a) { return a * c; }
inline Jet3 operator/(const Jet3& a, double c) { return a * (1.0 / c); }
inline Jet3 operator/(double c, const Jet3& a) { return Jet3::con(c) / a; }

struct Grad2 {
    double v = 0, dx = 0, dy = 0;

    static Grad2 con(double c) { return {c, 0, 0}; }
    static Grad2 varx(double x) { return {x, 1, 0}; }
    static Grad2 vary(double y) { return {y, 0, 1}; }
};

inline Grad2 operator+(const Grad2& a, const Grad2& b) { return {a.v + b.v, a.dx + b.dx, a.dy + b.dy}; }
inline Grad2 operator-(const Grad2& a, const Grad2& b) { return {a.v - b.v, a.dx - b.dx, a.dy - b.dy}; }
inline Grad2 operator-(const Grad2& a) { return {-a.v, -a.dx, -a.dy}; }
inline Grad2 operator*(const Grad2& a, const Grad2& b) {
    return {a.v * b.v, a.dx * b.v + a.v * b.dx, a.dy * b.v + a.v * b.dy};
}
inline Grad2 operator/(const Grad2& a, const Grad2& b) {
    if (b.v == 0) throw DomainError("division by zero in jet arithmetic");
    double w = a.v / b.v;
    return {w, (a.dx - w * b.dx) / b.v, (a.dy - w * b.dy) / b.v};
}
inline Grad2 operator+(const Grad2& a, double c) { return {a.v + c, a.dx, a.dy}; }
inline Grad2 operator+(double c, const Grad2& a) { return a + c; }
inline Grad2 operator-(const Grad2& a, double c) { return {a.v - c, a.dx, a.dy}; }
inline Grad2 operator-(double c, const Grad2& a) { return {c - a.v, -a.dx, -a.dy}; }
inline Grad2 operator*(const Grad2& a, double c) { return {a.v * c, a.dx * c, a.dy * c}; }
inline Grad2 operator*(double c, const Grad2& a) { return a * c; }
inline Grad2 operator/(const Grad2& a, double c) { return a * (1.0 / c); }
inline Grad2 operator/(double c, const Grad2& a) { return Grad2::con(c) / a; }

struct Taylor2 {
    double v = 0, dx = 0, dy = 0, dxx = 0, dxy = 0, dyy = 0;

    static Taylor2 con(double c) { return {c, 0, 0, 0, 0, 0}; }
    static Taylor2 varx(double x) { return {x, 1, 0, 0, 0, 0}; }
    static Taylor2 vary(double y) { return {y, 0, 1, 0, 0, 0}; }

    // Embed a univariate jet as a function of x alone (or y alone).
    static Taylor2 of_x(const Jet3& j) { return {j.v, j.d1, 0, j.d2, 0, 0}; }
    static Taylor2 of_y(const Jet3& j) { return {j.v, 0, j.d1, 0, 0, j.d2}; }

    Grad2 grad() const { return {v, dx, dy}; }
};

inline Taylor2 operator+(const Taylor2& a, const Taylor2& b) {
    return {a.v + b.v, a.dx + b.dx, a.dy + b.dy, a.dxx + b.dxx, a.dxy + b.dxy, a.dyy + b.dyy};
}
inline Taylor2 operator-(const Taylor2& a, const Taylor2& b) {
    return {a.v - b.v, a.dx - b.dx, a.dy - b.dy, a.dxx - b.dxx, a.dxy - b.dxy, a.dyy - b.dyy};
}
inline Taylor2 operator-(const Taylor2& a) { return {-a.v, -a.dx, -a.dy, -a.dxx, -a.dxy, -a.dyy}; }
inline Taylor2 operator*(const Taylor2& a, const Taylor2& b) {
    return {a.v * b.v,
            a.dx * b.v + a.v * b.dx,
            a.dy * b.v + a.v * b.dy,
            a.dxx * b.v + 2 * a.dx * b.dx + a.v * b.dxx,
            a.dxy * b.v + a.dx * b.dy + a.dy * b.dx + a.v * b.dxy,
            a.dyy * b.v + 2 * a.dy * b.dy + a.v * b.dyy};
}
inline Taylor2 operator/(const Taylor2& a, const Taylor2& b) {
    if (b.v == 0) throw DomainError("division by zero in jet arithmetic");
    Taylor2 w;
    w.v = a.v / b.v;
    w.dx = (a.dx - w.v * b.dx) / b.v;
    w.dy = (a.dy - w.v * b.dy) / b.v;
    w.dxx = (a.dxx - w.v * b.dxx - 2 * w.dx * b.dx) / b.v;
    w.dxy = (a.dxy - w.v * b.dxy - w.dx * b.dy - w.dy * b.dx) / b.v;
    w.dyy = (a.dyy - w.v * b.dyy - 2 * w.dy * b.dy) / b.v;
    return w;
}
inline Taylor2 operator+(const Taylor2& a, double c) { Taylor2 r = a; r.v += c; return r; }
inline Taylor2 operator+(double c, const Taylor2& a) { return a + c; }
inline Taylor2 operator-(const Taylor2& a, double c) { Taylor2 r = a; r.v -= c; return r; }
inline Taylor2 operator-(double c, const Taylor2& a) { return Taylor2::con(c) - a; }
inline Taylor2 operator*(const Taylor2& a, double c) {
    return {a.v * c, a.dx * c, a.dy * c, a.dxx * c, a.dxy * c, a.dyy * c};
}
inline Taylor2 operator*(double c, const Taylor2& a) { return a * c; }
inline Taylor2 operator/(const Taylor2& a, double c) { return a * (1.0 / c); }
inline Taylor2 operator/(double c, const Taylor2& a) { return Taylor2::con(c) / a; }

// Outer derivatives f(x0), f'(x0), f''(x0), f'''(x0) of an elementary
// function, used to push any of the jet types through f.
struct Outer {
    double f0, f1, f2, f3;
};

namespace detail {

inline Outer outer_sin(double x) { return {std::sin(x), std::cos(x), -std::sin(x), -std::cos(x)}; }
inline Outer outer_cos(double x) { return {std::cos(x), -std::sin(x), -std::cos(x), std::sin(x)}; }
inline Outer outer_tan(double x) {
    double t = std::tan(x), s = 1 + t * t;
    return {t, s, 2 * t * s, s * (2 + 6 * t * t)};
}
inline Outer outer_sinh(double x) { return {std::sinh(x), std::cosh(x), std::sinh(x), std::cosh(x)}; }
inline Outer outer_cosh(double x) { return {std::cosh(x), std::sinh(x), std::cosh(x), std::sinh(x)}; }
inline Outer outer_tanh(double x) {
    double s = std::tanh(x), m = 1 - s * s;
    return {s, m, -2 * s * m, m * (6 * s * s - 2)};
}
inline Outer outer_exp(double x) { double e = std::exp(x); return {e, e, e, e}; }
inline Outer outer_log(double x) {
    if (x <= 0) throw DomainError("log of non-positive value");
    return {std::log(x), 1 / x, -1 / (x * x), 2 / (x * x * x)};
}
inline Outer outer_sqrt(double x) {
    if (x <= 0) throw DomainError("sqrt of non-positive value in jet arithmetic");
    double s = std::sqrt(x);
    return {s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x)};
}
inline Outer outer_atan(double x) {
    double q = 1 + x * x;
    return {std::atan(x), 1 / q, -2 * x / (q * q), (6 * x * x - 2) / (q * q * q)};
}
inline Outer outer_abs(double x) {
    if (x == 0) throw DomainError("abs is not differentiable at 0");
    return {std::abs(x), x > 0 ? 1.0 : -1.0, 0, 0};
}
inline Outer outer_pow(double x, double p) {
    if (x <= 0) throw DomainError("pow with non-positive base and non-integer exponent");
    double f = std::pow(x, p);
    return {f, p * f / x, p * (p - 1) * f / (x * x), p * (p - 1) * (p - 2) * f / (x * x * x)};
}

} // namespace detail

// Faa di Bruno up to order three.
inline Jet3 compose(const Outer& f, const Jet3& g) {
    return {f.f0,
            f.f1 * g.d1,
            f.f2 * g.d1 * g.d1 + f.f1 * g.d2,
            f.f3 * g.d1 * g.d1 * g.d1 + 3 * f.f2 * g.d1 * g.d2 + f.f1 * g.d3};
}
inline Grad2 compose(const Outer& f, const Grad2& g) {
    return {f.f0, f.f1 * g.dx, f.f1 * g.dy};
}
inline Taylor2 compose(const Outer& f, const Taylor2& g) {
    return {f.f0,
            f.f1 * g.dx,
            f.f1 * g.dy,
            f.f2 * g.dx * g.dx + f.f1 * g.dxx,
            f.f2 * g.dx * g.dy + f.f1 * g.dxy,
            f.f2 * g.dy * g.dy + f.f1 * g.dyy};
}

template <class J> J sin(const J& g) { return compose(detail::outer_sin(g.v), g); }
template <class J> J cos(const J& g) { return compose(detail::outer_cos(g.v), g); }
template <class J> J tan(const J& g) { return compose(detail::outer_tan(g.v), g); }
template <class J> J sinh(const J& g) { return compose(detail::outer_sinh(g.v), g); }
template <class J> J cosh(const J& g) { return compose(detail::outer_cosh(g.v), g); }
template <class J> J tanh(const J& g) { return compose(detail::outer_tanh(g.v), g); }
template <class J> J exp(const J& g) { return compose(detail::outer_exp(g.v), g); }
template <class J> J log(const J& g) { return compose(detail::outer_log(g.v), g); }
template <class J> J sqrt(const J& g) { return compose(detail::outer_sqrt(g.v), g); }
template <class J> J atan(const J& g) { return compose(detail::outer_atan(g.v), g); }
template <class J> J abs(const J& g) { return compose(detail::outer_abs(g.v), g); }

// Integer powers by repeated multiplication (valid for any base); real
// exponents via the outer table (base must be positive).
template <class J> J pow(const J& g, double p) {
    double ip;
    if (std::modf(p, &ip) == 0.0 && std::abs(ip) <= 64) {
        int n = static_cast<int>(ip);
        if (n == 0) return J::con(1.0);
        bool inv = n < 0;
        n = inv ? -n : n;
        J acc = g;
        for (int i = 1; i < n; ++i) acc = acc * g;
        return inv ? J::con(1.0) / acc : acc;
    }
    return compose(detail::outer_pow(g.v, p), g);
}

// Plain-double overloads with the same domain checks as the jet versions,
// so generic evaluation code never propagates silent NaNs.
inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double tan(double x) { return std::tan(x); }
inline double sinh(double x) { return std::sinh(x); }
inline double cosh(double x) { return std::cosh(x); }
inline double tanh(double x) { return std::tanh(x); }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) {
    if (x <= 0) throw DomainError("log of non-positive value");
    return std::log(x);
}
inline double sqrt(double x) {
    if (x < 0) throw DomainError("sqrt of negative value");
    return std::sqrt(x);
}
inline double atan(double x) { return std::atan(x); }
inline double abs(double x) { return std::abs(x); }
inline double pow(double x, double p) {
    double ip;
    bool integral = std::modf(p, &ip) == 0.0;
    if (x < 0 && !integral) throw DomainError("pow with negative base and non-integer exponent");
    if (x == 0 && p < 0) throw DomainError("zero raised to a negative power");
    return std::pow(x, p);
}

} // namespace geoweb
