#pragma once

// Scalar expressions in the two hodograph variables u and v.
//
// Grammar accepted by Expression::parse (whitespace is ignored):
//
//   expr     = term { ("+" | "-") term } ;
//   term     = unary { ("*" | "/") unary } ;
//   unary    = ("-" | "+") unary | power ;
//   power    = primary [ "^" unary ] ;            (* right-associative *)
//   primary  = number | "u" | "v" | "pi"
//            | func "(" expr ")" | "(" expr ")" ;
//   func     = "exp" | "log" | "sqrt" | "sin" | "cos" ;
//   number   = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ] ;
//
// The operand of "^" must fold to a rational constant (e.g. 2, -1, (3/2),
// 0.5); it is stored exactly as numerator/denominator.

#include "mixotype/error.hpp"
#include "mixotype/types.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mixotype {

/// Exact rational number with a positive denominator in lowest terms.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    constexpr Rational() = default;
    Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
        if (d == 0) throw DomainError("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool is_integer() const { return den == 1; }

    friend Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
    friend Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
    friend Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
    friend Rational operator/(Rational a, Rational b) {
        if (b.num == 0) throw DomainError("rational division by zero");
        return {a.num * b.den, a.den * b.num};
    }
    friend Rational operator-(Rational a) { return {-a.num, a.den}; }
    friend bool operator==(const Rational&, const Rational&) = default;

    std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }

    /// Exact conversion of a double that is a "short" rational (denominator
    /// up to 1e9), e.g. 0.5 -> 1/2, 0.1 -> 1/10.
    static std::optional<Rational> from_double(double x) {
        if (!std::isfinite(x)) return std::nullopt;
        if (x == std::trunc(x) && std::fabs(x) < 9.0e15) return Rational(static_cast<std::int64_t>(x));
        // Continued-fraction convergents.
        double rest = x;
        std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
        for (int i = 0; i < 64; ++i) {
            const double a = std::floor(rest);
            if (std::fabs(a) > 1.0e12) break;
            const auto ai = static_cast<std::int64_t>(a);
            const std::int64_t p2 = ai * p1 + p0;
            const std::int64_t q2 = ai * q1 + q0;
            if (q2 > 1000000000) break;
            p0 = p1; q0 = q1; p1 = p2; q1 = q2;
            if (std::fabs(static_cast<double>(p1) / static_cast<double>(q1) - x) <= 4.0e-16 * std::fabs(x))
                return Rational(p1, q1);
            const double frac = rest - a;
            if (frac == 0.0) break;
            rest = 1.0 / frac;
        }
        return std::nullopt;
    }
};

enum class Var : std::uint8_t { u, v };

namespace expr {

enum class Op : std::uint8_t { constant, variable, add, sub, mul, div, neg, pow, exp, log, sqrt, sin, cos };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Op op = Op::constant;
    double value = 0.0;
    Var var = Var::u;
    Rational exponent;
    NodePtr a;
    NodePtr b;
};

inline bool is_const(const NodePtr& n) { return n->op == Op::constant; }
inline bool is_const(const NodePtr& n, double c) { return n->op == Op::constant && n->value == c; }

inline NodePtr make_const(double c) {
    auto n = std::make_shared<Node>();
    n->op = Op::constant;
    n->value = c;
    return n;
}

inline NodePtr make_var(Var x) {
    auto n = std::make_shared<Node>();
    n->op = Op::variable;
    n->var = x;
    return n;
}

inline NodePtr make_node(Op op, NodePtr a, NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

// Smart constructors: constant folding plus the x*0, x*1, x+0 rules.

inline NodePtr neg(NodePtr a) {
    if (is_const(a)) return make_const(-a->value);
    if (a->op == Op::neg) return a->a;
    return make_node(Op::neg, std::move(a));
}

inline NodePtr add(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) return make_const(a->value + b->value);
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    if (b->op == Op::neg) return make_node(Op::sub, std::move(a), b->a);
    return make_node(Op::add, std::move(a), std::move(b));
}

inline NodePtr sub(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) return make_const(a->value - b->value);
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return neg(std::move(b));
    if (b->op == Op::neg) return make_node(Op::add, std::move(a), b->a);
    return make_node(Op::sub, std::move(a), std::move(b));
}

inline NodePtr mul(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) return make_const(a->value * b->value);
    if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    if (is_const(a, -1.0)) return neg(std::move(b));
    if (is_const(b, -1.0)) return neg(std::move(a));
    if (is_const(b)) std::swap(a, b);
    // c1 * (c2 * x) -> (c1 c2) * x keeps repeated derivatives shallow.
    if (is_const(a) && b->op == Op::mul && is_const(b->a)) return mul(make_const(a->value * b->a->value), b->b);
    return make_node(Op::mul, std::move(a), std::move(b));
}

inline NodePtr div(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b) && b->value != 0.0) return make_const(a->value / b->value);
    if (is_const(a, 0.0)) return make_const(0.0);
    if (is_const(b, 1.0)) return a;
    return make_node(Op::div, std::move(a), std::move(b));
}

inline NodePtr pow(NodePtr base, Rational r) {
    if (r.num == 0) return make_const(1.0);
    if (r == Rational(1)) return base;
    if (is_const(base)) {
        const double c = base->value;
        const bool defined = !(c == 0.0 && r.num < 0) && !(c < 0.0 && r.den % 2 == 0);
        if (defined) {
            const double mag = std::pow(std::fabs(c), r.value());
            return make_const(c < 0.0 && (r.num % 2 != 0) ? -mag : mag);
        }
    }
    auto n = std::make_shared<Node>();
    n->op = Op::pow;
    n->a = std::move(base);
    n->exponent = r;
    return n;
}

inline NodePtr fn(Op op, NodePtr a) {
    if (is_const(a)) {
        const double c = a->value;
        switch (op) {
            case Op::exp: return make_const(std::exp(c));
            case Op::log: if (c > 0.0) return make_const(std::log(c)); break;
            case Op::sqrt: if (c >= 0.0) return make_const(std::sqrt(c)); break;
            case Op::sin: return make_const(std::sin(c));
            case Op::cos: return make_const(std::cos(c));
            default: break;
        }
    }
    return make_node(op, std::move(a));
}

inline NodePtr derivative(const NodePtr& n, Var x) {
    switch (n->op) {
        case Op::constant: return make_const(0.0);
        case Op::variable: return make_const(n->var == x ? 1.0 : 0.0);
        case Op::add: return add(derivative(n->a, x), derivative(n->b, x));
        case Op::sub: return sub(derivative(n->a, x), derivative(n->b, x));
        case Op::neg: return neg(derivative(n->a, x));
        case Op::mul:
            return add(mul(derivative(n->a, x), n->b), mul(n->a, derivative(n->b, x)));
        case Op::div: {
            auto da = derivative(n->a, x);
            auto db = derivative(n->b, x);
            if (is_const(db, 0.0)) return div(da, n->b);
            return div(sub(mul(da, n->b), mul(n->a, db)), pow(n->b, Rational(2)));
        }
        case Op::pow: {
            auto da = derivative(n->a, x);
            if (is_const(da, 0.0)) return make_const(0.0);
            const Rational r = n->exponent;
            return mul(mul(make_const(r.value()), pow(n->a, r - Rational(1))), da);
        }
        case Op::exp: return mul(n, derivative(n->a, x));
        case Op::log: return div(derivative(n->a, x), n->a);
        case Op::sqrt: return div(derivative(n->a, x), mul(make_const(2.0), n));
        case Op::sin: return mul(fn(Op::cos, n->a), derivative(n->a, x));
        case Op::cos: return neg(mul(fn(Op::sin, n->a), derivative(n->a, x)));
    }
    return make_const(0.0);
}

inline NodePtr swap_uv(const NodePtr& n) {
    switch (n->op) {
        case Op::constant: return n;
        case Op::variable: return make_var(n->var == Var::u ? Var::v : Var::u);
        case Op::pow: return pow(swap_uv(n->a), n->exponent);
        case Op::neg: return neg(swap_uv(n->a));
        case Op::exp: case Op::log: case Op::sqrt: case Op::sin: case Op::cos:
            return fn(n->op, swap_uv(n->a));
        case Op::add: return add(swap_uv(n->a), swap_uv(n->b));
        case Op::sub: return sub(swap_uv(n->a), swap_uv(n->b));
        case Op::mul: return mul(swap_uv(n->a), swap_uv(n->b));
        case Op::div: return div(swap_uv(n->a), swap_uv(n->b));
    }
    return n;
}

inline std::string format_double(double x) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

inline int precedence(const Node& n) {
    switch (n.op) {
        case Op::add: case Op::sub: return 1;
        case Op::mul: case Op::div: return 2;
        case Op::neg: return 3;
        case Op::pow: return 4;
        case Op::constant: return n.value < 0.0 ? 3 : 5;
        default: return 5;
    }
}

inline void print(const Node& n, std::string& out);

inline void print_child(const Node& child, int min_prec, std::string& out) {
    if (precedence(child) < min_prec) {
        out += '(';
        print(child, out);
        out += ')';
    } else {
        print(child, out);
    }
}

inline void print(const Node& n, std::string& out) {
    switch (n.op) {
        case Op::constant: out += format_double(n.value); return;
        case Op::variable: out += n.var == Var::u ? 'u' : 'v'; return;
        case Op::add: print_child(*n.a, 1, out); out += " + "; print_child(*n.b, 2, out); return;
        case Op::sub: print_child(*n.a, 1, out); out += " - "; print_child(*n.b, 2, out); return;
        case Op::mul: print_child(*n.a, 2, out); out += "*"; print_child(*n.b, 3, out); return;
        case Op::div: print_child(*n.a, 2, out); out += "/"; print_child(*n.b, 3, out); return;
        case Op::neg: out += '-'; print_child(*n.a, 3, out); return;
        case Op::pow:
            print_child(*n.a, 5, out);
            out += '^';
            if (n.exponent.is_integer() && n.exponent.num >= 0) out += n.exponent.str();
            else out += "(" + n.exponent.str() + ")";
            return;
        case Op::exp: out += "exp("; print(*n.a, out); out += ')'; return;
        case Op::log: out += "log("; print(*n.a, out); out += ')'; return;
        case Op::sqrt: out += "sqrt("; print(*n.a, out); out += ')'; return;
        case Op::sin: out += "sin("; print(*n.a, out); out += ')'; return;
        case Op::cos: out += "cos("; print(*n.a, out); out += ')'; return;
    }
}

inline std::string to_string(const Node& n) {
    std::string s;
    print(n, s);
    return s;
}

inline std::size_t count_nodes(const Node& n) {
    std::size_t c = 1;
    if (n.a) c += count_nodes(*n.a);
    if (n.b) c += count_nodes(*n.b);
    return c;
}

// Postfix program evaluated on a small value stack.
struct Instr {
    Op op;
    double value;
    Var var;
    std::int64_t num;
    std::int64_t den;
    const Node* src;
};

struct Program {
    std::vector<Instr> code;
    std::size_t max_depth = 0;
};

inline void emit(const NodePtr& n, Program& prog, std::size_t depth) {
    if (n->a) emit(n->a, prog, depth);
    if (n->b) emit(n->b, prog, depth + 1);
    const std::size_t here = depth + 1 + (n->b ? 1 : 0);
    prog.max_depth = std::max(prog.max_depth, here);
    prog.code.push_back({n->op, n->value, n->var, n->exponent.num, n->exponent.den, n.get()});
}

[[noreturn]] inline void domain_fail(const char* what, const Node* src, Point p) {
    throw DomainError(std::string(what) + " in '" + to_string(*src) + "' at (u,v)=(" + format_double(p.u) + "," +
                      format_double(p.v) + ")");
}

inline double real_pow(double base, std::int64_t num, std::int64_t den, const Node* src, Point p) {
    if (base == 0.0) {
        if (num < 0) domain_fail("division by zero", src, p);
        return 0.0;
    }
    if (den == 1) return std::pow(base, static_cast<double>(num));
    if (base < 0.0) {
        // Odd roots stay on the real branch.
        if (den % 2 == 0) domain_fail("fractional power of a negative base", src, p);
        const double mag = std::pow(-base, static_cast<double>(num) / static_cast<double>(den));
        return (num % 2 != 0) ? -mag : mag;
    }
    return std::pow(base, static_cast<double>(num) / static_cast<double>(den));
}

inline double run(const Program& prog, Point p) {
    constexpr std::size_t kInline = 48;
    std::array<double, kInline> inline_stack{};
    std::vector<double> heap_stack;
    double* st = inline_stack.data();
    if (prog.max_depth > kInline) {
        heap_stack.resize(prog.max_depth);
        st = heap_stack.data();
    }
    std::size_t sp = 0;
    for (const Instr& in : prog.code) {
        double r = 0.0;
        switch (in.op) {
            case Op::constant: st[sp++] = in.value; continue;
            case Op::variable: st[sp++] = in.var == Var::u ? p.u : p.v; continue;
            case Op::add: --sp; r = st[sp - 1] + st[sp]; break;
            case Op::sub: --sp; r = st[sp - 1] - st[sp]; break;
            case Op::mul: --sp; r = st[sp - 1] * st[sp]; break;
            case Op::div:
                --sp;
                if (st[sp] == 0.0) domain_fail("division by zero", in.src, p);
                r = st[sp - 1] / st[sp];
                break;
            case Op::neg: r = -st[sp - 1]; break;
            case Op::pow: r = real_pow(st[sp - 1], in.num, in.den, in.src, p); break;
            case Op::exp: r = std::exp(st[sp - 1]); break;
            case Op::log:
                if (!(st[sp - 1] > 0.0)) domain_fail("log of a non-positive value", in.src, p);
                r = std::log(st[sp - 1]);
                break;
            case Op::sqrt:
                if (st[sp - 1] < 0.0) domain_fail("sqrt of a negative value", in.src, p);
                r = std::sqrt(st[sp - 1]);
                break;
            case Op::sin: r = std::sin(st[sp - 1]); break;
            case Op::cos: r = std::cos(st[sp - 1]); break;
        }
        if (!std::isfinite(r)) domain_fail("non-finite result", in.src, p);
        st[sp - 1] = r;
    }
    if (!std::isfinite(st[0])) throw DomainError("non-finite input value");
    return st[0];
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("empty expression", pos_);
        NodePtr n = parse_expr();
        skip_ws();
        if (pos_ < src_.size()) throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
        return n;
    }

private:
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            if (accept('+')) lhs = add(lhs, parse_term());
            else if (accept('-')) lhs = sub(lhs, parse_term());
            else return lhs;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (accept('*')) lhs = mul(lhs, parse_unary());
            else if (accept('/')) lhs = div(lhs, parse_unary());
            else return lhs;
        }
    }

    NodePtr parse_unary() {
        if (accept('-')) return neg(parse_unary());
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (accept('^')) {
            skip_ws();
            const std::size_t at = pos_;
            NodePtr e = parse_unary();
            auto r = fold_rational(*e);
            if (!r) throw ParseError("malformed exponent (must be a rational constant)", at);
            return pow(base, *r);
        }
        return base;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("unexpected end of expression", pos_);
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (c == '(') {
            ++pos_;
            NodePtr inner = parse_expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            const std::string_view id = src_.substr(start, pos_ - start);
            if (id == "u") return make_var(Var::u);
            if (id == "v") return make_var(Var::v);
            if (id == "pi") return make_const(3.14159265358979323846);
            Op op;
            if (id == "exp") op = Op::exp;
            else if (id == "log") op = Op::log;
            else if (id == "sqrt") op = Op::sqrt;
            else if (id == "sin") op = Op::sin;
            else if (id == "cos") op = Op::cos;
            else throw ParseError("unknown identifier '" + std::string(id) + "'", start);
            if (!accept('(')) throw ParseError("expected '(' after " + std::string(id), pos_);
            NodePtr arg = parse_expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return fn(op, arg);
        }
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
            ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t q = pos_ + 1;
            if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
            if (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q]))) {
                pos_ = q;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            }
        }
        double value = 0.0;
        auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (res.ec != std::errc() || res.ptr != src_.data() + pos_)
            throw ParseError("malformed number", start);
        return make_const(value);
    }

    static std::optional<Rational> fold_rational(const Node& n) {
        switch (n.op) {
            case Op::constant: return Rational::from_double(n.value);
            case Op::neg: {
                auto a = fold_rational(*n.a);
                if (!a) return std::nullopt;
                return -*a;
            }
            case Op::add: case Op::sub: case Op::mul: case Op::div: {
                auto a = fold_rational(*n.a);
                auto b = fold_rational(*n.b);
                if (!a || !b) return std::nullopt;
                if (n.op == Op::add) return *a + *b;
                if (n.op == Op::sub) return *a - *b;
                if (n.op == Op::mul) return *a * *b;
                if (b->num == 0) return std::nullopt;
                return *a / *b;
            }
            case Op::pow: {
                auto a = fold_rational(*n.a);
                if (!a || !n.exponent.is_integer() || std::llabs(n.exponent.num) > 16) return std::nullopt;
                Rational r(1);
                for (std::int64_t i = 0; i < std::llabs(n.exponent.num); ++i) r = r * *a;
                if (n.exponent.num < 0) {
                    if (r.num == 0) return std::nullopt;
                    r = Rational(1) / r;
                }
                return r;
            }
            default: return std::nullopt;
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

}  // namespace expr

/// Immutable scalar field f(u, v). Copies share the tree and the compiled
/// program, and evaluation is safe from several threads at once.
class Expression {
public:
    Expression() : Expression(expr::make_const(0.0)) {}
    explicit Expression(expr::NodePtr root) : root_(std::move(root)) {
        auto prog = std::make_shared<expr::Program>();
        expr::emit(root_, *prog, 0);
        prog_ = std::move(prog);
    }

    static Expression parse(std::string_view source) { return Expression(expr::Parser(source).parse()); }
    static Expression constant(double c) { return Expression(expr::make_const(c)); }
    static Expression variable(Var x) { return Expression(expr::make_var(x)); }

    /// Throws DomainError naming the offending subexpression; never returns
    /// a non-finite value.
    double evaluate(Point p) const { return expr::run(*prog_, p); }
    double operator()(Point p) const { return evaluate(p); }
    double operator()(double u, double v) const { return evaluate({u, v}); }

    Expression derivative(Var x) const { return Expression(expr::derivative(root_, x)); }
    Expression du() const { return derivative(Var::u); }
    Expression dv() const { return derivative(Var::v); }

    /// The same field with the roles of u and v exchanged.
    Expression swapped() const { return Expression(expr::swap_uv(root_)); }

    std::string str() const { return expr::to_string(*root_); }
    bool is_constant() const { return root_->op == expr::Op::constant; }
    std::optional<double> constant_value() const {
        if (is_constant()) return root_->value;
        return std::nullopt;
    }
    std::size_t size() const { return expr::count_nodes(*root_); }
    const expr::NodePtr& node() const { return root_; }

    friend Expression operator+(const Expression& a, const Expression& b) { return Expression(expr::add(a.root_, b.root_)); }
    friend Expression operator-(const Expression& a, const Expression& b) { return Expression(expr::sub(a.root_, b.root_)); }
    friend Expression operator*(const Expression& a, const Expression& b) { return Expression(expr::mul(a.root_, b.root_)); }
    friend Expression operator/(const Expression& a, const Expression& b) { return Expression(expr::div(a.root_, b.root_)); }
    friend Expression operator-(const Expression& a) { return Expression(expr::neg(a.root_)); }
    friend Expression operator*(double c, const Expression& a) { return Expression(expr::mul(expr::make_const(c), a.root_)); }
    friend Expression operator+(const Expression& a, double c) { return Expression(expr::add(a.root_, expr::make_const(c))); }

    friend Expression pow(const Expression& a, Rational r) { return Expression(expr::pow(a.root_, r)); }
    friend Expression exp(const Expression& a) { return Expression(expr::fn(expr::Op::exp, a.root_)); }
    friend Expression log(const Expression& a) { return Expression(expr::fn(expr::Op::log, a.root_)); }
    friend Expression sqrt(const Expression& a) { return Expression(expr::fn(expr::Op::sqrt, a.root_)); }
    friend Expression sin(const Expression& a) { return Expression(expr::fn(expr::Op::sin, a.root_)); }
    friend Expression cos(const Expression& a) { return Expression(expr::fn(expr::Op::cos, a.root_)); }

private:
    expr::NodePtr root_;
    std::shared_ptr<const expr::Program> prog_;
};

}  // namespace mixotype
