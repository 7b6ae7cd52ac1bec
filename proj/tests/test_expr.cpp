#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "geoweb/expr.hpp"

using namespace geoweb;

namespace {

bool same_node(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == ExprNode::Num || a.kind == ExprNode::Pow) {
        if (a.num != b.num) return false;
    }
    if (a.kind == ExprNode::Call && a.fn != b.fn) return false;
    if (static_cast<bool>(a.a) != static_cast<bool>(b.a)) return false;
    if (static_cast<bool>(a.b) != static_cast<bool>(b.b)) return false;
    if (a.a && !same_node(*a.a, *b.a)) return false;
    if (a.b && !same_node(*a.b, *b.b)) return false;
    return true;
}

bool same_tree(const Expr& x, const Expr& y) {
    return x.root() && y.root() && same_node(*x.root(), *y.root());
}

} // namespace

TEST_SUITE("expr") {

TEST_CASE("single function application parses to the expected shape") {
    Expr e = Expr::parse("sinh(u)", "u");
    CHECK(e.value(1.0) == doctest::Approx(std::sinh(1.0)).epsilon(1e-15));
    CHECK(e.unparse() == "sinh(u)");
}

TEST_CASE("precedence: u^2 + 3*u") {
    Expr e = Expr::parse("u^2 + 3*u", "u");
    CHECK(e.value(2.0) == doctest::Approx(10.0));
    CHECK(e.value(-1.5) == doctest::Approx(2.25 - 4.5));
}

TEST_CASE("unbalanced paren reports offset 5 and the expected token") {
    try {
        Expr::parse("sin(v", "v");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.offset == 5);
        CHECK(std::string(e.what()).find("expected ')'") != std::string::npos);
    }
}

TEST_CASE("unknown identifiers are rejected with their name") {
    try {
        Expr::parse("2*w + 1", "u");
        FAIL("expected UnknownIdentifier");
    } catch (const UnknownIdentifier& e) {
        CHECK(e.ident == "w");
    }
    CHECK_THROWS_AS(Expr::parse("frobnicate(u)", "u"), UnknownIdentifier);
}

TEST_CASE("constants pi and e") {
    CHECK(Expr::parse("pi", "u").value(0.0) == std::numbers::pi);
    CHECK(Expr::parse("e", "u").value(0.0) == std::numbers::e);
    CHECK(Expr::parse("cos(pi)", "u").value(3.0) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("every advertised function evaluates") {
    const char* fns[] = {"sin", "cos", "tan", "sinh", "cosh", "tanh", "exp", "log", "sqrt", "abs"};
    for (const char* f : fns) {
        Expr e = Expr::parse(std::string(f) + "(u)", "u");
        CHECK(std::isfinite(e.value(0.5)));
    }
}

TEST_CASE("jet of the identity") {
    Jet3 j = Expr::parse("u", "u").jet(2.0);
    CHECK(j.v == 2.0);
    CHECK(j.d1 == 1.0);
    CHECK(j.d2 == 0.0);
    CHECK(j.d3 == 0.0);
}

TEST_CASE("jet of sinh against the closed-form derivative cycle") {
    Jet3 j = Expr::parse("sinh(u)", "u").jet(1.0);
    CHECK(j.v == doctest::Approx(1.1752011936438014).epsilon(1e-15));
    CHECK(j.d1 == doctest::Approx(1.5430806348152437).epsilon(1e-15));
    CHECK(j.d2 == doctest::Approx(j.v).epsilon(1e-15));
    CHECK(j.d3 == doctest::Approx(j.d1).epsilon(1e-15));
}

TEST_CASE("jet of u^2 at 3") {
    Jet3 j = Expr::parse("u^2", "u").jet(3.0);
    CHECK(j.v == 9.0);
    CHECK(j.d1 == 6.0);
    CHECK(j.d2 == 2.0);
    CHECK(j.d3 == 0.0);
}

TEST_CASE("jet derivatives match finite differences on a grammar sample") {
    // Oracle: central differences of the plain value evaluation.
    const char* exprs[] = {
        "sin(u)*cosh(u) + u^3",
        "exp(u/2) - tanh(u)",
        "1/(2 + cos(u))",
        "sqrt(u^2 + 1)",
        "log(2 + sin(u))*u",
        "u^-2 + tan(u/4)",
    };
    const double xs[] = {0.3, 0.9, 1.7, -0.6};
    for (const char* src : exprs) {
        Expr e = Expr::parse(src, "u");
        for (double x : xs) {
            Jet3 j = e.jet(x);
            double h = 1e-4;
            double fm2 = e.value(x - 2 * h), fm1 = e.value(x - h);
            double fp1 = e.value(x + h), fp2 = e.value(x + 2 * h);
            double f0 = e.value(x);
            double d1 = (fp1 - fm1) / (2 * h);
            double d2 = (fp1 - 2 * f0 + fm1) / (h * h);
            double d3 = (fp2 - 2 * fp1 + 2 * fm1 - fm2) / (2 * h * h * h);
            CHECK(j.v == doctest::Approx(f0).epsilon(1e-12));
            CHECK(j.d1 == doctest::Approx(d1).epsilon(1e-6).scale(1.0));
            CHECK(j.d2 == doctest::Approx(d2).epsilon(1e-5).scale(1.0));
            CHECK(j.d3 == doctest::Approx(d3).epsilon(1e-3).scale(1.0));
        }
    }
}

TEST_CASE("parse-unparse-parse is structurally the identity") {
    const char* exprs[] = {
        "sinh(u)",
        "u^2 + 3*u",
        "-(u - 2)*(u + 2)/(1 + u^2)",
        "sin(cos(u)) + sqrt(abs(u) + 1)",
        "2.5e-3*u^-3 + pi",
    };
    for (const char* src : exprs) {
        Expr once = Expr::parse(src, "u");
        Expr twice = Expr::parse(once.unparse(), "u");
        CHECK(same_tree(once, twice));
        CHECK(once.unparse() == twice.unparse());
    }
}

TEST_CASE("domain violations raise errors instead of propagating NaN") {
    CHECK_THROWS_AS(Expr::parse("log(u)", "u").value(-1.0), DomainError);
    CHECK_THROWS_AS(Expr::parse("sqrt(u)", "u").value(-4.0), DomainError);
    CHECK_THROWS_AS(Expr::parse("1/u", "u").value(0.0), DomainError);
    CHECK_THROWS_AS(Expr::parse("u^0.5", "u").value(-2.0), DomainError);
}

TEST_CASE("domain errors name the offending subexpression") {
    try {
        Expr::parse("sqrt(1 + log(u - 2))", "u").value(1.0);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        std::string w = e.what();
        CHECK(w.find("log") != std::string::npos);
        CHECK(w.find("in subexpression") != std::string::npos);
        // the annotation points at the log call, not the enclosing sqrt
        CHECK(w.find("sqrt") == std::string::npos);
    }
}

TEST_CASE("power rules: integer exponents allow negative bases") {
    CHECK(Expr::parse("u^3", "u").value(-2.0) == -8.0);
    CHECK(Expr::parse("u^-2", "u").value(-2.0) == doctest::Approx(0.25));
    Jet3 j = Expr::parse("u^-1", "u").jet(2.0);
    CHECK(j.v == doctest::Approx(0.5));
    CHECK(j.d1 == doctest::Approx(-0.25));
}

TEST_CASE("whitespace is insignificant") {
    Expr a = Expr::parse("  sinh( u ) + 2 * u ", "u");
    Expr b = Expr::parse("sinh(u)+2*u", "u");
    CHECK(a.value(0.7) == b.value(0.7));
}

} // TEST_SUITE
