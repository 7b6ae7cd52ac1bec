#include <doctest.h>

#include <cmath>

#include "geoweb/expr.hpp"
#include "geoweb/jet.hpp"

using namespace geoweb;

TEST_SUITE("jet") {

TEST_CASE("constants carry zero derivatives") {
    Jet3 c = Jet3::con(4.25);
    CHECK(c.v == 4.25);
    CHECK(c.d1 == 0.0);
    CHECK(c.d2 == 0.0);
    CHECK(c.d3 == 0.0);
}

TEST_CASE("Leibniz rule for third-order products") {
    // (f*g)''' = f'''g + 3f''g' + 3f'g'' + fg''' with f = sin, g = exp
    double x = 0.8;
    Jet3 f = sin(Jet3::var(x));
    Jet3 g = exp(Jet3::var(x));
    Jet3 p = f * g;
    double expect = f.d3 * g.v + 3 * f.d2 * g.d1 + 3 * f.d1 * g.d2 + f.v * g.d3;
    CHECK(p.d3 == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("chain rule through composition matches the hand expansion") {
    // h(x) = tanh(x^2): h' = 2x sech^2(x^2)
    double x = 0.6;
    Jet3 h = tanh(pow(Jet3::var(x), 2.0));
    double s = 1.0 / std::cosh(x * x);
    CHECK(h.v == doctest::Approx(std::tanh(x * x)).epsilon(1e-15));
    CHECK(h.d1 == doctest::Approx(2 * x * s * s).epsilon(1e-14));
}

TEST_CASE("quotient derivatives against finite differences") {
    auto f = [](double x) { return std::sin(x) / (2 + std::cos(x)); };
    double x = 1.1, h = 1e-5;
    Jet3 j = sin(Jet3::var(x)) / (Jet3::con(2.0) + cos(Jet3::var(x)));
    CHECK(j.d1 == doctest::Approx((f(x + h) - f(x - h)) / (2 * h)).epsilon(1e-8));
    CHECK(j.d2 ==
          doctest::Approx((f(x + h) - 2 * f(x) + f(x - h)) / (h * h)).epsilon(1e-4));
}

TEST_CASE("Grad2 carries independent x and y slots") {
    Grad2 x = Grad2::varx(1.2), y = Grad2::vary(0.7);
    Grad2 w = x * x + sin(y);
    CHECK(w.v == doctest::Approx(1.44 + std::sin(0.7)));
    CHECK(w.dx == doctest::Approx(2.4));
    CHECK(w.dy == doctest::Approx(std::cos(0.7)));
}

TEST_CASE("Taylor2 second derivatives of a mixed product") {
    // w = x^2 y: w_xx = 2y, w_xy = 2x, w_yy = 0
    Taylor2 x = Taylor2::varx(1.5), y = Taylor2::vary(-0.4);
    Taylor2 w = x * x * y;
    CHECK(w.dxx == doctest::Approx(2 * -0.4));
    CHECK(w.dxy == doctest::Approx(2 * 1.5));
    CHECK(w.dyy == doctest::Approx(0.0));
}

TEST_CASE("Taylor2 lifts of one-variable jets slot into x or y") {
    Expr a = Expr::parse("sinh(u)", "u");
    Jet3 ju = a.jet(0.9);
    Taylor2 ax = Taylor2::of_x(ju);
    CHECK(ax.v == ju.v);
    CHECK(ax.dx == ju.d1);
    CHECK(ax.dy == 0.0);
    CHECK(ax.dxx == ju.d2);
    CHECK(ax.dxy == 0.0);
    Taylor2 ay = Taylor2::of_y(ju);
    CHECK(ay.dy == ju.d1);
    CHECK(ay.dyy == ju.d2);
    CHECK(ay.dx == 0.0);
}

TEST_CASE("Taylor2 of a two-variable composite against finite differences") {
    auto f = [](double x, double y) { return std::exp(x * y) + std::cos(x - 2 * y); };
    double x0 = 0.4, y0 = -0.3, h = 1e-5;
    Taylor2 x = Taylor2::varx(x0), y = Taylor2::vary(y0);
    Taylor2 w = exp(x * y) + cos(x - Taylor2::con(2.0) * y);
    CHECK(w.v == doctest::Approx(f(x0, y0)).epsilon(1e-14));
    CHECK(w.dx == doctest::Approx((f(x0 + h, y0) - f(x0 - h, y0)) / (2 * h)).epsilon(1e-8));
    CHECK(w.dy == doctest::Approx((f(x0, y0 + h) - f(x0, y0 - h)) / (2 * h)).epsilon(1e-8));
    CHECK(w.dxx == doctest::Approx((f(x0 + h, y0) - 2 * f(x0, y0) + f(x0 - h, y0)) / (h * h))
                       .epsilon(1e-4));
    CHECK(w.dyy == doctest::Approx((f(x0, y0 + h) - 2 * f(x0, y0) + f(x0, y0 - h)) / (h * h))
                       .epsilon(1e-4));
    double mixed = (f(x0 + h, y0 + h) - f(x0 + h, y0 - h) - f(x0 - h, y0 + h) +
                    f(x0 - h, y0 - h)) /
                   (4 * h * h);
    CHECK(w.dxy == doctest::Approx(mixed).epsilon(1e-4));
}

TEST_CASE("abs differentiates away from zero and refuses the kink") {
    Jet3 j = abs(Jet3::var(-2.0));
    CHECK(j.v == 2.0);
    CHECK(j.d1 == -1.0);
    CHECK(j.d2 == 0.0);
    CHECK_THROWS_AS(abs(Jet3::var(0.0)), DomainError);
    CHECK(geoweb::abs(0.0) == 0.0);  // plain value is still fine
}

TEST_CASE("domain guards") {
    CHECK_THROWS_AS(log(Jet3::var(0.0)), DomainError);
    CHECK_THROWS_AS(sqrt(Jet3::var(-1.0)), DomainError);
    CHECK_THROWS_AS(pow(Jet3::var(-1.0), 0.5), DomainError);
    CHECK_NOTHROW(pow(Jet3::var(-1.0), 3.0));
}

} // TEST_SUITE
