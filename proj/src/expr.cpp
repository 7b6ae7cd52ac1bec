#include "geoweb/expr.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <utility>

namespace geoweb {

const char* fn_name(Fn f) {
    switch (f) {
        case Fn::sin: return "sin";
        case Fn::cos: return "cos";
        case Fn::tan: return "tan";
        case Fn::sinh: return "sinh";
        case Fn::cosh: return "cosh";
        case Fn::tanh: return "tanh";
        case Fn::exp: return "exp";
        case Fn::log: return "log";
        case Fn::sqrt: return "sqrt";
        case Fn::abs: return "abs";
        case Fn::atan: return "atan";
    }
    return "?";
}

namespace {

using NodePtr = std::unique_ptr<ExprNode>;

NodePtr make(ExprNode::Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_unique<ExprNode>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

struct Parser {
    const std::string& s;
    const std::string& var;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) { ++pos; return true; }
        return false;
    }

    void expect(char c) {
        if (!accept(c))
            throw SyntaxError(std::string("expected '") + c + "'", pos);
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            if (accept('+')) lhs = make(ExprNode::Add, std::move(lhs), parse_term());
            else if (accept('-')) lhs = make(ExprNode::Sub, std::move(lhs), parse_term());
            else return lhs;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (accept('*')) lhs = make(ExprNode::Mul, std::move(lhs), parse_unary());
            else if (accept('/')) lhs = make(ExprNode::Div, std::move(lhs), parse_unary());
            else return lhs;
        }
    }

    NodePtr parse_unary() {
        if (accept('-')) return make(ExprNode::Neg, parse_unary());
        accept('+');
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (accept('^')) {
            // Exponent is restricted to a (possibly signed) numeric
            // literal; jets cannot be raised to a varying power.
            bool negate = false;
            if (accept('-')) negate = true;
            else accept('+');
            double e = parse_number_literal();
            auto n = make(ExprNode::Pow, std::move(base));
            n->num = negate ? -e : e;
            return n;
        }
        return base;
    }

    double parse_number_literal() {
        skip_ws();
        if (pos >= s.size() || !(std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.'))
            throw SyntaxError("expected numeric literal", pos);
        const char* begin = s.c_str() + pos;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) throw SyntaxError("malformed number", pos);
        pos += static_cast<std::size_t>(end - begin);
        return v;
    }

    NodePtr parse_atom() {
        char c = peek();
        if (c == '(') {
            ++pos;
            NodePtr e = parse_expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            auto n = make(ExprNode::Num);
            n->num = parse_number_literal();
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t at = pos;
            std::string name;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                name += s[pos++];
            if (peek() == '(') {
                static constexpr std::array<Fn, 11> fns = {
                    Fn::sin, Fn::cos, Fn::tan, Fn::sinh, Fn::cosh, Fn::tanh,
                    Fn::exp, Fn::log, Fn::sqrt, Fn::abs, Fn::atan};
                for (Fn f : fns) {
                    if (name == fn_name(f)) {
                        ++pos;
                        NodePtr arg = parse_expr();
                        expect(')');
                        auto n = make(ExprNode::Call, std::move(arg));
                        n->fn = f;
                        return n;
                    }
                }
                throw UnknownIdentifier(name, at);
            }
            if (name == var) return make(ExprNode::Var);
            if (name == "pi") {
                auto n = make(ExprNode::Num);
                n->num = std::numbers::pi;
                return n;
            }
            if (name == "e") {
                auto n = make(ExprNode::Num);
                n->num = std::numbers::e;
                return n;
            }
            throw UnknownIdentifier(name, at);
        }
        if (c == '\0') throw SyntaxError("unexpected end of expression", pos);
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos);
    }
};

} // namespace

std::string render(const ExprNode& n, const std::string& var) {
    char buf[64];
    switch (n.kind) {
        case ExprNode::Num:
            std::snprintf(buf, sizeof buf, "%.17g", n.num);
            return buf;
        case ExprNode::Var: return var;
        case ExprNode::Neg: return "(-" + render(*n.a, var) + ")";
        case ExprNode::Add: return "(" + render(*n.a, var) + "+" + render(*n.b, var) + ")";
        case ExprNode::Sub: return "(" + render(*n.a, var) + "-" + render(*n.b, var) + ")";
        case ExprNode::Mul: return "(" + render(*n.a, var) + "*" + render(*n.b, var) + ")";
        case ExprNode::Div: return "(" + render(*n.a, var) + "/" + render(*n.b, var) + ")";
        case ExprNode::Pow:
            // the grammar takes a signed literal after '^', so "-2" is fine
            std::snprintf(buf, sizeof buf, "%.17g", n.num);
            return "(" + render(*n.a, var) + "^" + buf + ")";
        case ExprNode::Call: return std::string(fn_name(n.fn)) + "(" + render(*n.a, var) + ")";
    }
    return "?";
}

Expr Expr::parse(const std::string& src, const std::string& var) {
    Parser p{src, var};
    NodePtr root = p.parse_expr();
    if (p.peek() != '\0')
        throw SyntaxError("trailing input after expression", p.pos);
    Expr e;
    e.root_ = std::shared_ptr<const ExprNode>(root.release());
    e.src_ = src;
    e.var_ = var;
    return e;
}

std::string Expr::unparse() const {
    if (!root_) return "";
    return render(*root_, var_);
}

} // namespace geoweb
