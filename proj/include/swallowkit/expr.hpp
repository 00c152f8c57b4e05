#pragma once

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "jet.hpp"
#include "vec3.hpp"

namespace swallowkit {

enum class Op { Const, VarU, VarV, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Sinh, Cosh, Exp, Sqrt };

enum class Var { U, V };

struct ExprNode {
    Op op;
    double value = 0.0;  // Const
    int exponent = 0;    // Pow
    std::shared_ptr<const ExprNode> a, b;
};

/// Immutable expression tree over the variables u and v.
///
/// Construction folds constants (both operands constant, x+0, x*1, x^0, ...)
/// and nothing else.
class Expr {
public:
    Expr() : Expr(constant(0.0)) {}
    Expr(double c) : Expr(constant(c)) {}  // NOLINT(google-explicit-constructor)

    static Expr constant(double c) { return Expr(std::make_shared<const ExprNode>(ExprNode{Op::Const, c, 0, nullptr, nullptr})); }
    static Expr u() { return Expr(std::make_shared<const ExprNode>(ExprNode{Op::VarU, 0.0, 0, nullptr, nullptr})); }
    static Expr v() { return Expr(std::make_shared<const ExprNode>(ExprNode{Op::VarV, 0.0, 0, nullptr, nullptr})); }

    Op op() const noexcept { return n_->op; }
    const ExprNode& node() const noexcept { return *n_; }
    bool is_constant() const noexcept { return n_->op == Op::Const; }
    bool is_constant(double c) const noexcept { return is_constant() && n_->value == c; }
    double constant_value() const noexcept { return n_->value; }
    int exponent() const noexcept { return n_->exponent; }
    Expr lhs() const { return Expr(n_->a); }
    Expr rhs() const { return Expr(n_->b); }

    friend Expr operator+(const Expr& a, const Expr& b) {
        if (a.is_constant() && b.is_constant()) return constant(a.n_->value + b.n_->value);
        if (a.is_constant(0.0)) return b;
        if (b.is_constant(0.0)) return a;
        return binary(Op::Add, a, b);
    }
    friend Expr operator-(const Expr& a, const Expr& b) {
        if (a.is_constant() && b.is_constant()) return constant(a.n_->value - b.n_->value);
        if (b.is_constant(0.0)) return a;
        if (a.is_constant(0.0)) return -b;
        return binary(Op::Sub, a, b);
    }
    friend Expr operator*(const Expr& a, const Expr& b) {
        if (a.is_constant() && b.is_constant()) return constant(a.n_->value * b.n_->value);
        if (a.is_constant(0.0) || b.is_constant(0.0)) return constant(0.0);
        if (a.is_constant(1.0)) return b;
        if (b.is_constant(1.0)) return a;
        return binary(Op::Mul, a, b);
    }
    friend Expr operator/(const Expr& a, const Expr& b) {
        if (a.is_constant() && b.is_constant() && b.n_->value != 0.0) return constant(a.n_->value / b.n_->value);
        if (b.is_constant(1.0)) return a;
        if (a.is_constant(0.0) && !b.is_constant(0.0)) return constant(0.0);
        return binary(Op::Div, a, b);
    }
    friend Expr operator-(const Expr& a) {
        if (a.is_constant()) return constant(-a.n_->value);
        if (a.op() == Op::Neg) return a.lhs();
        return unary(Op::Neg, a);
    }
    friend Expr pow(const Expr& a, int n) {
        if (n == 0) return constant(1.0);
        if (n == 1) return a;
        if (a.is_constant() && (a.n_->value != 0.0 || n > 0)) return constant(std::pow(a.n_->value, n));
        return Expr(std::make_shared<const ExprNode>(ExprNode{Op::Pow, 0.0, n, a.n_, nullptr}));
    }
    friend Expr sin(const Expr& a) { return a.is_constant() ? constant(std::sin(a.n_->value)) : unary(Op::Sin, a); }
    friend Expr cos(const Expr& a) { return a.is_constant() ? constant(std::cos(a.n_->value)) : unary(Op::Cos, a); }
    friend Expr sinh(const Expr& a) { return a.is_constant() ? constant(std::sinh(a.n_->value)) : unary(Op::Sinh, a); }
    friend Expr cosh(const Expr& a) { return a.is_constant() ? constant(std::cosh(a.n_->value)) : unary(Op::Cosh, a); }
    friend Expr exp(const Expr& a) { return a.is_constant() ? constant(std::exp(a.n_->value)) : unary(Op::Exp, a); }
    friend Expr sqrt(const Expr& a) {
        if (a.is_constant() && a.n_->value >= 0.0) return constant(std::sqrt(a.n_->value));
        return unary(Op::Sqrt, a);
    }

    /// Structural equality of trees.
    friend bool operator==(const Expr& a, const Expr& b) { return same(a.n_.get(), b.n_.get()); }

    Expr& operator+=(const Expr& o) { return *this = *this + o; }
    Expr& operator*=(const Expr& o) { return *this = *this * o; }

private:
    explicit Expr(std::shared_ptr<const ExprNode> n) : n_(std::move(n)) {}

    static Expr binary(Op op, const Expr& a, const Expr& b) {
        return Expr(std::make_shared<const ExprNode>(ExprNode{op, 0.0, 0, a.n_, b.n_}));
    }
    static Expr unary(Op op, const Expr& a) {
        return Expr(std::make_shared<const ExprNode>(ExprNode{op, 0.0, 0, a.n_, nullptr}));
    }
    static bool same(const ExprNode* a, const ExprNode* b) {
        if (a == b) return true;
        if (!a || !b) return false;
        if (a->op != b->op) return false;
        if (a->op == Op::Const) return a->value == b->value;
        if (a->op == Op::Pow && a->exponent != b->exponent) return false;
        return same(a->a.get(), b->a.get()) && same(a->b.get(), b->b.get());
    }

    std::shared_ptr<const ExprNode> n_;
};

using Vec3Expr = Vec3<Expr>;

/// Numeric values substituted for extra identifiers (for example a homotopy
/// parameter t) while parsing.
using Bindings = std::map<std::string, double, std::less<>>;

namespace detail {

class Parser {
public:
    Parser(std::string_view src, const Bindings& bindings) : s_(src), bindings_(bindings) {}

    Expr parse() {
        Expr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError("syntax error: " + msg, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr expr() {
        Expr e = term();
        for (;;) {
            if (accept('+')) e = e + term();
            else if (accept('-')) e = e - term();
            else return e;
        }
    }
    Expr term() {
        Expr e = factor();
        for (;;) {
            if (accept('*')) e = e * factor();
            else if (accept('/')) e = e / factor();
            else return e;
        }
    }
    Expr factor() {
        // Unary minus is accepted as an extension of the grammar.
        if (accept('-')) return -factor();
        if (accept('+')) return factor();
        Expr b = base();
        if (accept('^')) {
            skip_ws();
            bool neg = false;
            if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
                neg = s_[pos_] == '-';
                ++pos_;
            }
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("expected integer exponent");
            int n = 0;
            auto res = std::from_chars(s_.data() + start, s_.data() + pos_, n);
            if (res.ec != std::errc()) {
                pos_ = start;
                fail("exponent out of range");
            }
            return pow(b, neg ? -n : n);
        }
        return b;
    }
    Expr base() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string_view id = s_.substr(start, pos_ - start);
            if (id == "u") return Expr::u();
            if (id == "v") return Expr::v();
            static const std::pair<std::string_view, Expr (*)(const Expr&)> funcs[] = {
                {"sin", [](const Expr& a) { return sin(a); }},   {"cos", [](const Expr& a) { return cos(a); }},
                {"sinh", [](const Expr& a) { return sinh(a); }}, {"cosh", [](const Expr& a) { return cosh(a); }},
                {"exp", [](const Expr& a) { return exp(a); }},   {"sqrt", [](const Expr& a) { return sqrt(a); }},
            };
            for (const auto& [name, fn] : funcs) {
                if (id == name) {
                    if (!accept('(')) fail("expected '(' after " + std::string(name));
                    Expr arg = expr();
                    if (!accept(')')) fail("expected ')'");
                    return fn(arg);
                }
            }
            if (auto it = bindings_.find(id); it != bindings_.end()) return Expr::constant(it->second);
            throw ParseError("unknown identifier '" + std::string(id) + "'", start);
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }
    Expr number() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
            if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
                pos_ = p;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            }
        }
        double x = 0.0;
        auto res = std::from_chars(s_.data() + start, s_.data() + pos_, x);
        if (res.ec != std::errc() || res.ptr != s_.data() + pos_) {
            pos_ = start;
            fail("malformed number");
        }
        return Expr::constant(x);
    }

    std::string_view s_;
    const Bindings& bindings_;
    std::size_t pos_ = 0;
};

inline int precedence(const Expr& e) {
    switch (e.op()) {
        case Op::Add:
        case Op::Sub: return 1;
        case Op::Mul:
        case Op::Div: return 2;
        case Op::Neg: return 3;
        case Op::Pow: return 4;
        case Op::Const: return e.constant_value() < 0 || std::signbit(e.constant_value()) ? 3 : 5;
        default: return 5;
    }
}

inline std::string format_number(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline void print_to(std::string& out, const Expr& e, int min_prec) {
    const int p = precedence(e);
    const bool paren = p < min_prec;
    if (paren) out += '(';
    switch (e.op()) {
        case Op::Const: out += format_number(e.constant_value()); break;
        case Op::VarU: out += 'u'; break;
        case Op::VarV: out += 'v'; break;
        case Op::Add:
        case Op::Sub:
            print_to(out, e.lhs(), 1);
            out += e.op() == Op::Add ? " + " : " - ";
            print_to(out, e.rhs(), 2);
            break;
        case Op::Mul:
        case Op::Div:
            print_to(out, e.lhs(), 2);
            out += e.op() == Op::Mul ? "*" : "/";
            print_to(out, e.rhs(), 3);
            break;
        case Op::Neg:
            out += '-';
            print_to(out, e.lhs(), 3);
            break;
        case Op::Pow:
            print_to(out, e.lhs(), 5);
            out += '^';
            out += std::to_string(e.exponent());
            break;
        default: {
            static const std::map<Op, const char*> names{{Op::Sin, "sin"},   {Op::Cos, "cos"}, {Op::Sinh, "sinh"},
                                                         {Op::Cosh, "cosh"}, {Op::Exp, "exp"}, {Op::Sqrt, "sqrt"}};
            out += names.at(e.op());
            out += '(';
            print_to(out, e.lhs(), 0);
            out += ')';
        }
    }
    if (paren) out += ')';
}

}  // namespace detail

/// Parse the expression grammar: sums of products of powers of u, v, numbers,
/// parenthesised expressions and sin/cos/sinh/cosh/exp/sqrt calls.
inline Expr parse(std::string_view source, const Bindings& bindings = {}) {
    return detail::Parser(source, bindings).parse();
}

inline std::string to_string(const Expr& e) {
    std::string s;
    detail::print_to(s, e, 0);
    return s;
}

inline Expr diff(const Expr& e, Var var) {
    switch (e.op()) {
        case Op::Const: return 0.0;
        case Op::VarU: return var == Var::U ? 1.0 : 0.0;
        case Op::VarV: return var == Var::V ? 1.0 : 0.0;
        case Op::Add: return diff(e.lhs(), var) + diff(e.rhs(), var);
        case Op::Sub: return diff(e.lhs(), var) - diff(e.rhs(), var);
        case Op::Mul: return diff(e.lhs(), var) * e.rhs() + e.lhs() * diff(e.rhs(), var);
        case Op::Div: {
            const Expr a = e.lhs(), b = e.rhs();
            return (diff(a, var) * b - a * diff(b, var)) / pow(b, 2);
        }
        case Op::Neg: return -diff(e.lhs(), var);
        case Op::Pow: {
            const int n = e.exponent();
            return Expr(static_cast<double>(n)) * pow(e.lhs(), n - 1) * diff(e.lhs(), var);
        }
        case Op::Sin: return cos(e.lhs()) * diff(e.lhs(), var);
        case Op::Cos: return -(sin(e.lhs()) * diff(e.lhs(), var));
        case Op::Sinh: return cosh(e.lhs()) * diff(e.lhs(), var);
        case Op::Cosh: return sinh(e.lhs()) * diff(e.lhs(), var);
        case Op::Exp: return e * diff(e.lhs(), var);
        case Op::Sqrt: return diff(e.lhs(), var) / (Expr(2.0) * e);
    }
    return 0.0;
}

inline double eval(const Expr& e, double u, double v) {
    switch (e.op()) {
        case Op::Const: return e.constant_value();
        case Op::VarU: return u;
        case Op::VarV: return v;
        case Op::Add: return eval(e.lhs(), u, v) + eval(e.rhs(), u, v);
        case Op::Sub: return eval(e.lhs(), u, v) - eval(e.rhs(), u, v);
        case Op::Mul: return eval(e.lhs(), u, v) * eval(e.rhs(), u, v);
        case Op::Div: {
            const double d = eval(e.rhs(), u, v);
            if (d == 0.0) throw DomainError("division by zero");
            return eval(e.lhs(), u, v) / d;
        }
        case Op::Neg: return -eval(e.lhs(), u, v);
        case Op::Pow: {
            const double b = eval(e.lhs(), u, v);
            if (b == 0.0 && e.exponent() < 0) throw DomainError("division by zero");
            return std::pow(b, e.exponent());
        }
        case Op::Sin: return std::sin(eval(e.lhs(), u, v));
        case Op::Cos: return std::cos(eval(e.lhs(), u, v));
        case Op::Sinh: return std::sinh(eval(e.lhs(), u, v));
        case Op::Cosh: return std::cosh(eval(e.lhs(), u, v));
        case Op::Exp: return std::exp(eval(e.lhs(), u, v));
        case Op::Sqrt: {
            const double x = eval(e.lhs(), u, v);
            if (x < 0.0) throw DomainError("sqrt of a negative value");
            return std::sqrt(x);
        }
    }
    return 0.0;
}

namespace detail {

using JetMemo = std::unordered_map<const ExprNode*, Jet2>;

inline Jet2 jet_eval_node(const ExprNode& n, double u0, double v0, int K, JetMemo& memo);

/// Subtrees referenced from more than one place are evaluated once.
inline Jet2 jet_eval_child(const std::shared_ptr<const ExprNode>& c, double u0, double v0, int K, JetMemo& memo) {
    if (c.use_count() <= 1 || c->op == Op::Const || c->op == Op::VarU || c->op == Op::VarV)
        return jet_eval_node(*c, u0, v0, K, memo);
    if (auto it = memo.find(c.get()); it != memo.end()) return it->second;
    Jet2 r = jet_eval_node(*c, u0, v0, K, memo);
    memo.emplace(c.get(), r);
    return r;
}

inline Jet2 jet_eval_node(const ExprNode& n, double u0, double v0, int K, JetMemo& memo) {
    auto a = [&] { return jet_eval_child(n.a, u0, v0, K, memo); };
    auto b = [&] { return jet_eval_child(n.b, u0, v0, K, memo); };
    switch (n.op) {
        case Op::Const: return Jet2(K, n.value);
        case Op::VarU: return Jet2::variable_u(K, u0);
        case Op::VarV: return Jet2::variable_v(K, v0);
        case Op::Add: return a() + b();
        case Op::Sub: return a() - b();
        case Op::Mul: return a() * b();
        case Op::Div: return a() / b();
        case Op::Neg: return -a();
        case Op::Pow: return pow(a(), n.exponent);
        case Op::Sin: return sin(a());
        case Op::Cos: return cos(a());
        case Op::Sinh: return sinh(a());
        case Op::Cosh: return cosh(a());
        case Op::Exp: return exp(a());
        case Op::Sqrt: return sqrt(a());
    }
    return Jet2(K, 0.0);
}

inline Jet2 jet_eval_memo(const Expr& e, double u0, double v0, int K, JetMemo& memo) {
    return jet_eval_node(e.node(), u0, v0, K, memo);
}

}  // namespace detail

/// Truncated Taylor expansion of e at (u0, v0) to total order K.
inline Jet2 jet_eval(const Expr& e, double u0, double v0, int K = kDefaultJetOrder) {
    std::unordered_map<const ExprNode*, Jet2> memo;
    return detail::jet_eval_memo(e, u0, v0, K, memo);
}

inline Vec3j jet_eval(const Vec3Expr& e, double u0, double v0, int K = kDefaultJetOrder) {
    std::unordered_map<const ExprNode*, Jet2> memo;
    return {detail::jet_eval_memo(e.x, u0, v0, K, memo), detail::jet_eval_memo(e.y, u0, v0, K, memo),
            detail::jet_eval_memo(e.z, u0, v0, K, memo)};
}

inline Vec3d eval(const Vec3Expr& e, double u, double v) { return {eval(e.x, u, v), eval(e.y, u, v), eval(e.z, u, v)}; }
inline Vec3Expr diff(const Vec3Expr& e, Var var) { return {diff(e.x, var), diff(e.y, var), diff(e.z, var)}; }

inline Vec3Expr parse_vec(const std::string& x, const std::string& y, const std::string& z, const Bindings& b = {}) {
    return {parse(x, b), parse(y, b), parse(z, b)};
}

/// Parse "(x, y, z)".  Error offsets refer to the whole tuple text.
inline Vec3Expr parse_vec(const std::string& tuple, const Bindings& b = {}) {
    const auto open = tuple.find_first_not_of(" \t");
    const auto close = tuple.find_last_not_of(" \t");
    if (open == std::string::npos || tuple[open] != '(') throw ParseError("expected '('", open == std::string::npos ? 0 : open);
    if (tuple[close] != ')') throw ParseError("expected ')'", close);
    std::vector<std::size_t> cuts{open};
    int depth = 0;
    for (std::size_t i = open + 1; i < close; ++i) {
        if (tuple[i] == '(') ++depth;
        if (tuple[i] == ')') --depth;
        if (tuple[i] == ',' && depth == 0) cuts.push_back(i);
    }
    if (cuts.size() != 3) throw ParseError("expected three components", close);
    cuts.push_back(close);
    std::array<Expr, 3> parts;
    for (std::size_t k = 0; k < 3; ++k) {
        // left-pad with blanks so that offsets stay absolute
        const std::size_t start = cuts[k] + 1;
        parts[k] = parse(std::string(start, ' ') + tuple.substr(start, cuts[k + 1] - start), b);
    }
    return {parts[0], parts[1], parts[2]};
}

inline Expr dot(const Vec3Expr& a, const Vec3Expr& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3Expr cross(const Vec3Expr& a, const Vec3Expr& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline Vec3Expr scale(const Expr& s, const Vec3Expr& a) { return {s * a.x, s * a.y, s * a.z}; }

/// Sparse polynomial in (u, v): (i, j) -> coefficient of u^i v^j.
using Polynomial = std::map<std::pair<int, int>, double>;

namespace detail {

inline Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) r[{ka.first + kb.first, ka.second + kb.second}] += ca * cb;
    return r;
}

}  // namespace detail

/// Expanded polynomial form of e, or nullopt if e is not a polynomial
/// (division by a non-constant, transcendental functions, negative powers).
inline std::optional<Polynomial> to_polynomial(const Expr& e) {
    switch (e.op()) {
        case Op::Const: return Polynomial{{{0, 0}, e.constant_value()}};
        case Op::VarU: return Polynomial{{{1, 0}, 1.0}};
        case Op::VarV: return Polynomial{{{0, 1}, 1.0}};
        case Op::Add:
        case Op::Sub: {
            auto a = to_polynomial(e.lhs()), b = to_polynomial(e.rhs());
            if (!a || !b) return std::nullopt;
            const double s = e.op() == Op::Add ? 1.0 : -1.0;
            for (const auto& [k, c] : *b) (*a)[k] += s * c;
            return a;
        }
        case Op::Mul: {
            auto a = to_polynomial(e.lhs()), b = to_polynomial(e.rhs());
            if (!a || !b) return std::nullopt;
            return detail::poly_mul(*a, *b);
        }
        case Op::Div: {
            auto a = to_polynomial(e.lhs()), b = to_polynomial(e.rhs());
            if (!a || !b) return std::nullopt;
            double d = 0.0;
            for (const auto& [k, c] : *b) {
                if (k == std::pair{0, 0}) d = c;
                else if (c != 0.0) return std::nullopt;
            }
            if (d == 0.0) return std::nullopt;
            for (auto& [k, c] : *a) c /= d;
            return a;
        }
        case Op::Neg: {
            auto a = to_polynomial(e.lhs());
            if (!a) return std::nullopt;
            for (auto& [k, c] : *a) c = -c;
            return a;
        }
        case Op::Pow: {
            if (e.exponent() < 0) return std::nullopt;
            auto a = to_polynomial(e.lhs());
            if (!a) return std::nullopt;
            Polynomial r{{{0, 0}, 1.0}};
            for (int k = 0; k < e.exponent(); ++k) r = detail::poly_mul(r, *a);
            return r;
        }
        default: return std::nullopt;
    }
}

/// Drop coefficients with |c| <= tol.
inline Polynomial pruned(Polynomial p, double tol = 0.0) {
    for (auto it = p.begin(); it != p.end();) {
        if (std::abs(it->second) <= tol) it = p.erase(it);
        else ++it;
    }
    return p;
}

/// Canonical expression of a polynomial: terms by increasing total degree.
inline Expr from_polynomial(const Polynomial& p) {
    std::vector<std::pair<std::pair<int, int>, double>> terms(p.begin(), p.end());
    std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        const int da = a.first.first + a.first.second, db = b.first.first + b.first.second;
        if (da != db) return da < db;
        return a.first.first > b.first.first;
    });
    Expr r = 0.0;
    for (const auto& [k, c] : terms) {
        if (c == 0.0) continue;
        Expr mono = pow(Expr::u(), k.first) * pow(Expr::v(), k.second);
        if (c < 0) r = r - Expr(-c) * mono;
        else r = r + Expr(c) * mono;
    }
    return r;
}

/// True when both expressions are polynomials with coefficients equal to tol.
inline bool polynomially_equal(const Expr& a, const Expr& b, double tol = 1e-12) {
    auto pa = to_polynomial(a), pb = to_polynomial(b);
    if (!pa || !pb) return false;
    for (const auto& [k, c] : *pb) (*pa)[k] -= c;
    for (const auto& [k, c] : *pa)
        if (std::abs(c) > tol) return false;
    return true;
}

inline bool polynomially_equal(const Vec3Expr& a, const Vec3Expr& b, double tol = 1e-12) {
    return polynomially_equal(a.x, b.x, tol) && polynomially_equal(a.y, b.y, tol) && polynomially_equal(a.z, b.z, tol);
}

/// Substitute u -> su, v -> sv (both expressions) in e.
inline Expr substitute(const Expr& e, const Expr& su, const Expr& sv) {
    switch (e.op()) {
        case Op::Const: return e;
        case Op::VarU: return su;
        case Op::VarV: return sv;
        case Op::Add: return substitute(e.lhs(), su, sv) + substitute(e.rhs(), su, sv);
        case Op::Sub: return substitute(e.lhs(), su, sv) - substitute(e.rhs(), su, sv);
        case Op::Mul: return substitute(e.lhs(), su, sv) * substitute(e.rhs(), su, sv);
        case Op::Div: return substitute(e.lhs(), su, sv) / substitute(e.rhs(), su, sv);
        case Op::Neg: return -substitute(e.lhs(), su, sv);
        case Op::Pow: return pow(substitute(e.lhs(), su, sv), e.exponent());
        case Op::Sin: return sin(substitute(e.lhs(), su, sv));
        case Op::Cos: return cos(substitute(e.lhs(), su, sv));
        case Op::Sinh: return sinh(substitute(e.lhs(), su, sv));
        case Op::Cosh: return cosh(substitute(e.lhs(), su, sv));
        case Op::Exp: return exp(substitute(e.lhs(), su, sv));
        case Op::Sqrt: return sqrt(substitute(e.lhs(), su, sv));
    }
    return e;
}

inline Vec3Expr substitute(const Vec3Expr& e, const Expr& su, const Expr& sv) {
    return {substitute(e.x, su, sv), substitute(e.y, su, sv), substitute(e.z, su, sv)};
}

inline bool depends_on(const Expr& e, Var var) {
    switch (e.op()) {
        case Op::Const: return false;
        case Op::VarU: return var == Var::U;
        case Op::VarV: return var == Var::V;
        default:
            if (depends_on(e.lhs(), var)) return true;
            return e.node().b && depends_on(e.rhs(), var);
    }
}

}  // namespace swallowkit
