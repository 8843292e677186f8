#pragma once

#include <cctype>
#include <cmath>
#include <limits>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "beltrami/errors.hpp"

namespace beltrami {

// Scalar expression AST over the variables {x, y, z, r, theta, t}, the usual
// arithmetic, and sin/cos/tan/exp/ln/sqrt/tanh/atan. `pi` folds to a literal.
// Trees are immutable after construction; differentiation is closed over the
// grammar.

enum class Var { x, y, z, r, theta, t };

inline const char* var_name(Var v) {
    switch (v) {
        case Var::x: return "x";
        case Var::y: return "y";
        case Var::z: return "z";
        case Var::r: return "r";
        case Var::theta: return "theta";
        case Var::t: return "t";
    }
    return "?";
}

enum class Func { sin, cos, tan, exp, ln, sqrt, tanh, atan };

inline const char* func_name(Func f) {
    switch (f) {
        case Func::sin: return "sin";
        case Func::cos: return "cos";
        case Func::tan: return "tan";
        case Func::exp: return "exp";
        case Func::ln: return "ln";
        case Func::sqrt: return "sqrt";
        case Func::tanh: return "tanh";
        case Func::atan: return "atan";
    }
    return "?";
}

enum class BinOp { add, sub, mul, div, pow };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum class Kind { number, variable, unary_neg, binary, call } kind;
    double number = 0.0;
    Var var = Var::x;
    BinOp op = BinOp::add;
    Func func = Func::sin;
    Expr a, b;
};

struct Bindings {
    std::map<Var, double> values;
    Bindings& set(Var v, double x) {
        values[v] = x;
        return *this;
    }
};

inline Expr make_num(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::number;
    n->number = v;
    return n;
}

inline Expr make_var(Var v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::variable;
    n->var = v;
    return n;
}

inline bool is_num(const Expr& e, double v) {
    return e->kind == ExprNode::Kind::number && e->number == v;
}

inline Expr make_neg(Expr a) {
    if (a->kind == ExprNode::Kind::number) return make_num(-a->number);
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::unary_neg;
    n->a = std::move(a);
    return n;
}

// Construction folds literal subtrees; no other simplification is done
// beyond dropping additive/multiplicative identities, which keeps
// derivatives readable without rewriting the tree.
inline Expr make_bin(BinOp op, Expr a, Expr b) {
    if (a->kind == ExprNode::Kind::number && b->kind == ExprNode::Kind::number) {
        double folded = std::numeric_limits<double>::quiet_NaN();
        switch (op) {
            case BinOp::add: folded = a->number + b->number; break;
            case BinOp::sub: folded = a->number - b->number; break;
            case BinOp::mul: folded = a->number * b->number; break;
            case BinOp::div:
                if (b->number != 0.0) folded = a->number / b->number;
                break;
            case BinOp::pow: folded = std::pow(a->number, b->number); break;
        }
        // A non-finite fold (0^-1, (-2)^0.5, overflow) stays a tree so the
        // printed form remains parseable and evaluate() reports the domain
        // error with context.
        if (std::isfinite(folded)) return make_num(folded);
    }
    if (op == BinOp::add) {
        if (is_num(a, 0.0)) return b;
        if (is_num(b, 0.0)) return a;
    }
    if (op == BinOp::sub && is_num(b, 0.0)) return a;
    if (op == BinOp::mul) {
        if (is_num(a, 0.0) || is_num(b, 0.0)) return make_num(0.0);
        if (is_num(a, 1.0)) return b;
        if (is_num(b, 1.0)) return a;
    }
    if (op == BinOp::div && is_num(a, 0.0)) return make_num(0.0);
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::binary;
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

inline Expr make_call(Func f, Expr a) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::call;
    n->func = f;
    n->a = std::move(a);
    return n;
}

// ----- evaluation ----------------------------------------------------------

inline double evaluate(const Expr& e, const Bindings& env) {
    switch (e->kind) {
        case ExprNode::Kind::number:
            return e->number;
        case ExprNode::Kind::variable: {
            auto it = env.values.find(e->var);
            if (it == env.values.end())
                throw UnboundVariable(std::string("unbound variable '") + var_name(e->var) + "'");
            return it->second;
        }
        case ExprNode::Kind::unary_neg:
            return -evaluate(e->a, env);
        case ExprNode::Kind::binary: {
            double a = evaluate(e->a, env);
            double b = evaluate(e->b, env);
            switch (e->op) {
                case BinOp::add: return a + b;
                case BinOp::sub: return a - b;
                case BinOp::mul: return a * b;
                case BinOp::div:
                    if (b == 0.0) throw DomainError("division by zero");
                    return a / b;
                case BinOp::pow: return std::pow(a, b);
            }
            return 0.0;
        }
        case ExprNode::Kind::call: {
            double a = evaluate(e->a, env);
            switch (e->func) {
                case Func::sin: return std::sin(a);
                case Func::cos: return std::cos(a);
                case Func::tan: return std::tan(a);
                case Func::exp: return std::exp(a);
                case Func::ln:
                    if (a <= 0.0) throw DomainError("ln of non-positive value");
                    return std::log(a);
                case Func::sqrt:
                    if (a < 0.0) throw DomainError("sqrt of negative value");
                    return std::sqrt(a);
                case Func::tanh: return std::tanh(a);
                case Func::atan: return std::atan(a);
            }
            return 0.0;
        }
    }
    return 0.0;
}

// ----- differentiation -----------------------------------------------------

inline Expr differentiate(const Expr& e, Var v) {
    using K = ExprNode::Kind;
    switch (e->kind) {
        case K::number:
            return make_num(0.0);
        case K::variable:
            return make_num(e->var == v ? 1.0 : 0.0);
        case K::unary_neg:
            return make_neg(differentiate(e->a, v));
        case K::binary: {
            Expr da = differentiate(e->a, v);
            Expr db = differentiate(e->b, v);
            switch (e->op) {
                case BinOp::add: return make_bin(BinOp::add, da, db);
                case BinOp::sub: return make_bin(BinOp::sub, da, db);
                case BinOp::mul:
                    return make_bin(BinOp::add, make_bin(BinOp::mul, da, e->b),
                                    make_bin(BinOp::mul, e->a, db));
                case BinOp::div:
                    // (a/b)' = a'/b - a b'/b^2
                    return make_bin(
                        BinOp::sub, make_bin(BinOp::div, da, e->b),
                        make_bin(BinOp::div, make_bin(BinOp::mul, e->a, db),
                                 make_bin(BinOp::pow, e->b, make_num(2.0))));
                case BinOp::pow: {
                    if (e->b->kind == K::number) {
                        // (a^c)' = c a^(c-1) a'
                        double c = e->b->number;
                        return make_bin(
                            BinOp::mul,
                            make_bin(BinOp::mul, make_num(c),
                                     make_bin(BinOp::pow, e->a, make_num(c - 1.0))),
                            da);
                    }
                    // a^b = exp(b ln a): (a^b)' = a^b (b' ln a + b a'/a)
                    Expr lhs = make_bin(BinOp::mul, db, make_call(Func::ln, e->a));
                    Expr rhs = make_bin(BinOp::div, make_bin(BinOp::mul, e->b, da), e->a);
                    return make_bin(BinOp::mul, e, make_bin(BinOp::add, lhs, rhs));
                }
            }
            return make_num(0.0);
        }
        case K::call: {
            Expr da = differentiate(e->a, v);
            Expr outer;
            switch (e->func) {
                case Func::sin: outer = make_call(Func::cos, e->a); break;
                case Func::cos: outer = make_neg(make_call(Func::sin, e->a)); break;
                case Func::tan:
                    // 1 + tan^2
                    outer = make_bin(BinOp::add, make_num(1.0),
                                     make_bin(BinOp::pow, make_call(Func::tan, e->a),
                                              make_num(2.0)));
                    break;
                case Func::exp: outer = make_call(Func::exp, e->a); break;
                case Func::ln: outer = make_bin(BinOp::div, make_num(1.0), e->a); break;
                case Func::sqrt:
                    outer = make_bin(BinOp::div, make_num(0.5), make_call(Func::sqrt, e->a));
                    break;
                case Func::tanh:
                    // 1 - tanh^2
                    outer = make_bin(BinOp::sub, make_num(1.0),
                                     make_bin(BinOp::pow, make_call(Func::tanh, e->a),
                                              make_num(2.0)));
                    break;
                case Func::atan:
                    outer = make_bin(BinOp::div, make_num(1.0),
                                     make_bin(BinOp::add, make_num(1.0),
                                              make_bin(BinOp::pow, e->a, make_num(2.0))));
                    break;
            }
            return make_bin(BinOp::mul, outer, da);
        }
    }
    return make_num(0.0);
}

// ----- printing ------------------------------------------------------------

namespace detail {

inline int precedence(const Expr& e) {
    switch (e->kind) {
        case ExprNode::Kind::binary:
            switch (e->op) {
                case BinOp::add:
                case BinOp::sub: return 1;
                case BinOp::mul:
                case BinOp::div: return 2;
                case BinOp::pow: return 4;
            }
            return 1;
        case ExprNode::Kind::unary_neg: return 3;
        default: return 5;
    }
}

inline void print_rec(std::string& out, const Expr& e, int parent_prec, bool right_side) {
    int prec = precedence(e);
    bool parens = prec < parent_prec || (prec == parent_prec && right_side);
    if (parens) out += '(';
    switch (e->kind) {
        case ExprNode::Kind::number: {
            char buf[40];
            double v = e->number;
            if (v < 0) {
                // Keep literals nonnegative in printed form so reparsing
                // reproduces the same tree shape.
                out += "(-";
                std::snprintf(buf, sizeof(buf), "%.17g", -v);
                out += buf;
                out += ')';
            } else {
                std::snprintf(buf, sizeof(buf), "%.17g", v);
                out += buf;
            }
            break;
        }
        case ExprNode::Kind::variable:
            out += var_name(e->var);
            break;
        case ExprNode::Kind::unary_neg:
            out += '-';
            print_rec(out, e->a, prec, true);
            break;
        case ExprNode::Kind::binary: {
            const char* ops[] = {"+", "-", "*", "/", "^"};
            // ^ is right associative; the others left.
            bool ra = e->op == BinOp::pow;
            print_rec(out, e->a, ra ? prec + 1 : prec, false);
            out += ops[static_cast<int>(e->op)];
            print_rec(out, e->b, ra ? prec : prec + 1, ra ? false : true);
            break;
        }
        case ExprNode::Kind::call:
            out += func_name(e->func);
            out += '(';
            print_rec(out, e->a, 0, false);
            out += ')';
            break;
    }
    if (parens) out += ')';
}

}  // namespace detail

inline std::string print(const Expr& e) {
    std::string out;
    detail::print_rec(out, e, 0, false);
    return out;
}

// ----- parsing -------------------------------------------------------------
// Pratt parser. Precedence: ^ (right-assoc) > unary - > * / > + -.

namespace detail {

struct Token {
    enum class Kind { number, ident, plus, minus, star, slash, caret, lparen, rparen, end } kind;
    double number = 0.0;
    std::string ident;
    std::size_t offset = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        tok_.offset = pos_;
        if (pos_ >= text_.size()) {
            tok_.kind = Token::Kind::end;
            return;
        }
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* start = text_.data() + pos_;
            char* end = nullptr;
            tok_.number = std::strtod(start, &end);
            if (end == start) throw ParseError("malformed number", pos_);
            pos_ += static_cast<std::size_t>(end - start);
            tok_.kind = Token::Kind::number;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            tok_.kind = Token::Kind::ident;
            tok_.ident = std::string(text_.substr(start, pos_ - start));
            return;
        }
        ++pos_;
        switch (c) {
            case '+': tok_.kind = Token::Kind::plus; return;
            case '-': tok_.kind = Token::Kind::minus; return;
            case '*': tok_.kind = Token::Kind::star; return;
            case '/': tok_.kind = Token::Kind::slash; return;
            case '^': tok_.kind = Token::Kind::caret; return;
            case '(': tok_.kind = Token::Kind::lparen; return;
            case ')': tok_.kind = Token::Kind::rparen; return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_ - 1);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    Token tok_;
};

inline std::optional<Var> lookup_var(const std::string& name) {
    for (Var v : {Var::x, Var::y, Var::z, Var::r, Var::theta, Var::t})
        if (name == var_name(v)) return v;
    return std::nullopt;
}

inline std::optional<Func> lookup_func(const std::string& name) {
    for (Func f : {Func::sin, Func::cos, Func::tan, Func::exp, Func::ln, Func::sqrt, Func::tanh,
                   Func::atan})
        if (name == func_name(f)) return f;
    return std::nullopt;
}

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) {}

    Expr parse() {
        Expr e = parse_expr(0);
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::end)
            throw ParseError("expected operator or end of input", t.offset);
        return e;
    }

private:
    // min_bp: minimum binding power for Pratt loop.
    Expr parse_expr(int min_bp) {
        Expr lhs = parse_prefix();
        for (;;) {
            const Token& t = lex_.peek();
            BinOp op;
            int lbp, rbp;  // left/right binding powers
            switch (t.kind) {
                case Token::Kind::plus: op = BinOp::add; lbp = 10; rbp = 11; break;
                case Token::Kind::minus: op = BinOp::sub; lbp = 10; rbp = 11; break;
                case Token::Kind::star: op = BinOp::mul; lbp = 20; rbp = 21; break;
                case Token::Kind::slash: op = BinOp::div; lbp = 20; rbp = 21; break;
                case Token::Kind::caret: op = BinOp::pow; lbp = 40; rbp = 39; break;
                default: return lhs;
            }
            if (lbp < min_bp) return lhs;
            lex_.take();
            Expr rhs = parse_expr(rbp);
            lhs = make_bin(op, std::move(lhs), std::move(rhs));
        }
    }

    Expr parse_prefix() {
        Token t = lex_.take();
        switch (t.kind) {
            case Token::Kind::number:
                return make_num(t.number);
            case Token::Kind::minus:
                // unary minus binds tighter than * / but looser than ^
                return make_neg(parse_expr(30));
            case Token::Kind::lparen: {
                Expr e = parse_expr(0);
                Token close = lex_.take();
                if (close.kind != Token::Kind::rparen)
                    throw ParseError("expected ')'", close.offset);
                return e;
            }
            case Token::Kind::ident: {
                if (t.ident == "pi") return make_num(std::numbers::pi);
                if (auto v = lookup_var(t.ident)) return make_var(*v);
                if (auto f = lookup_func(t.ident)) {
                    Token open = lex_.take();
                    if (open.kind != Token::Kind::lparen)
                        throw ParseError("expected '(' after function name", open.offset);
                    Expr arg = parse_expr(0);
                    Token close = lex_.take();
                    if (close.kind != Token::Kind::rparen)
                        throw ParseError("expected ')'", close.offset);
                    return make_call(*f, std::move(arg));
                }
                throw ParseError("unknown identifier '" + t.ident +
                                     "' (expected variable, function, or pi)",
                                 t.offset);
            }
            default:
                throw ParseError("expected number, variable, function, '-' or '('", t.offset);
        }
    }

    Lexer lex_;
};

}  // namespace detail

inline Expr parse(std::string_view text) { return detail::Parser(text).parse(); }

}  // namespace beltrami
