#pragma once

// Tiny expression language for metric coefficients: one free variable,
// arithmetic, powers with constant exponent, and the elementary functions
// from jet.hpp. Parsed once into an AST, evaluated at double or at any of
// the jet types (that is how derivatives of a(u), b(v) are obtained).

#include <memory>
#include <string>
#include <type_traits>

#include "geoweb/errors.hpp"
#include "geoweb/jet.hpp"

namespace geoweb {

enum class Fn { sin, cos, tan, sinh, cosh, tanh, exp, log, sqrt, abs, atan };

const char* fn_name(Fn f);

struct ExprNode {
    enum Kind { Num, Var, Neg, Add, Sub, Mul, Div, Pow, Call } kind;
    double num = 0;       // Num: literal value; Pow: exponent
    Fn fn = Fn::sin;      // Call only
    std::unique_ptr<ExprNode> a, b;
};

// Canonical fully parenthesized rendering of a subtree.
std::string render(const ExprNode& n, const std::string& var);

namespace detail {

template <class T> T make_const(double c) { return T::con(c); }
template <> inline double make_const<double>(double c) { return c; }

template <class T>
T apply_fn(Fn f, const T& a) {
    switch (f) {
        case Fn::sin:  return sin(a);
        case Fn::cos:  return cos(a);
        case Fn::tan:  return tan(a);
        case Fn::sinh: return sinh(a);
        case Fn::cosh: return cosh(a);
        case Fn::tanh: return tanh(a);
        case Fn::exp:  return exp(a);
        case Fn::log:  return log(a);
        case Fn::sqrt: return sqrt(a);
        case Fn::abs:  return abs(a);
        case Fn::atan: return atan(a);
    }
    throw Error("InternalError", "corrupt expression tree");
}

// Re-throws a domain failure once, tagged with the innermost subtree that
// caused it; outer frames pass the tagged message through unchanged.
[[noreturn]] inline void rethrow_domain(const DomainError& e, const ExprNode& n,
                                        const std::string& var) {
    std::string w = e.what();
    if (w.find(" in subexpression ") == std::string::npos)
        w += " in subexpression '" + render(n, var) + "'";
    throw DomainError(w);
}

template <class T>
T eval_node(const ExprNode& n, const T& x, const std::string& var) {
    switch (n.kind) {
        case ExprNode::Num: return make_const<T>(n.num);
        case ExprNode::Var: return x;
        case ExprNode::Neg: return -eval_node(*n.a, x, var);
        case ExprNode::Add: return eval_node(*n.a, x, var) + eval_node(*n.b, x, var);
        case ExprNode::Sub: return eval_node(*n.a, x, var) - eval_node(*n.b, x, var);
        case ExprNode::Mul: return eval_node(*n.a, x, var) * eval_node(*n.b, x, var);
        case ExprNode::Div: {
            T num = eval_node(*n.a, x, var);
            T den = eval_node(*n.b, x, var);
            try {
                if constexpr (std::is_same_v<T, double>) {
                    if (den == 0) throw DomainError("division by zero");
                }
                return num / den;
            } catch (const DomainError& e) {
                rethrow_domain(e, n, var);
            }
        }
        case ExprNode::Pow:
            try {
                return pow(eval_node(*n.a, x, var), n.num);
            } catch (const DomainError& e) {
                rethrow_domain(e, n, var);
            }
        case ExprNode::Call: {
            T arg = eval_node(*n.a, x, var);
            try {
                return apply_fn(n.fn, arg);
            } catch (const DomainError& e) {
                rethrow_domain(e, n, var);
            }
        }
    }
    throw Error("InternalError", "corrupt expression tree");
}

} // namespace detail

class Expr {
  public:
    Expr() = default;

    // Parses `src` with `var` as the single allowed identifier.
    static Expr parse(const std::string& src, const std::string& var);

    bool empty() const { return !root_; }
    const ExprNode* root() const { return root_.get(); }
    const std::string& source() const { return src_; }
    const std::string& variable() const { return var_; }

    // Canonical fully parenthesized rendering; parses back to an
    // equivalent tree.
    std::string unparse() const;

    template <class T>
    T operator()(const T& x) const {
        if (!root_) throw Error("InternalError", "evaluating empty expression");
        return detail::eval_node(*root_, x, var_);
    }

    double value(double x) const { return (*this)(x); }
    Jet3 jet(double x) const { return (*this)(Jet3::var(x)); }

  private:
    std::shared_ptr<const ExprNode> root_;
    std::string src_, var_;
};

} // namespace geoweb
