#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "beltrami/expr.hpp"

using namespace beltrami;

namespace {

Expr random_ast(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 5);
    std::uniform_real_distribution<double> num(-4.0, 4.0);
    switch (pick(rng)) {
        case 0:
            return make_num(std::round(num(rng) * 16.0) / 16.0);
        case 1: {
            static const Var vars[] = {Var::x, Var::y, Var::z, Var::r, Var::theta, Var::t};
            return make_var(vars[std::uniform_int_distribution<int>(0, 5)(rng)]);
        }
        case 2:
            return make_neg(random_ast(rng, depth - 1));
        case 3: {
            static const Func fns[] = {Func::sin, Func::cos,  Func::tan,  Func::exp,
                                       Func::ln,  Func::sqrt, Func::tanh, Func::atan};
            return make_call(fns[std::uniform_int_distribution<int>(0, 7)(rng)],
                             random_ast(rng, depth - 1));
        }
        default: {
            static const BinOp ops[] = {BinOp::add, BinOp::sub, BinOp::mul, BinOp::div,
                                        BinOp::pow};
            return make_bin(ops[std::uniform_int_distribution<int>(0, 4)(rng)],
                            random_ast(rng, depth - 1), random_ast(rng, depth - 1));
        }
    }
}

}  // namespace

TEST_CASE("parse handles precedence, powers, and unary minus") {
    Bindings env;
    env.set(Var::x, 1.0).set(Var::z, 2.0);
    CHECK(evaluate(parse("sin(x)*z + 2^3"), env) ==
          Catch::Approx(std::sin(1.0) * 2.0 + 8.0).epsilon(1e-15));
    CHECK(evaluate(parse("2+3*4^2"), env) == Catch::Approx(50.0));
    CHECK(evaluate(parse("-x^2"), env) == Catch::Approx(-1.0));
    CHECK(evaluate(parse("2^3^2"), env) == Catch::Approx(512.0));  // right-associative
    CHECK(evaluate(parse("(2+3)*4"), env) == Catch::Approx(20.0));
    CHECK(evaluate(parse("pi"), env) == Catch::Approx(std::acos(-1.0)).epsilon(1e-15));
}

TEST_CASE("parse and evaluate report precise errors") {
    CHECK_THROWS_AS(parse("sin(x"), ParseError);
    CHECK_THROWS_AS(parse("2 +* 3"), ParseError);
    CHECK_THROWS_AS(parse("bogus(x)"), ParseError);
    CHECK_THROWS_AS(evaluate(parse("x + y"), Bindings{}.set(Var::x, 1.0)), UnboundVariable);
    CHECK_THROWS_AS(evaluate(parse("1/ (x - x)"), Bindings{}.set(Var::x, 2.0)), DomainError);
    CHECK_THROWS_AS(evaluate(parse("ln(-1)"), Bindings{}), DomainError);
    CHECK_THROWS_AS(evaluate(parse("sqrt(0 - 2)"), Bindings{}), DomainError);
}

TEST_CASE("print/parse is a fixed point on 500 random trees") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> coord(0.2, 1.7);
    int checked_values = 0;
    for (int trial = 0; trial < 500; ++trial) {
        Expr e = random_ast(rng, 4);
        std::string s1 = print(e);
        Expr back = parse(s1);
        std::string s2 = print(back);
        REQUIRE(s1 == s2);

        Bindings env;
        env.set(Var::x, coord(rng))
            .set(Var::y, coord(rng))
            .set(Var::z, coord(rng))
            .set(Var::r, coord(rng))
            .set(Var::theta, coord(rng))
            .set(Var::t, coord(rng));
        try {
            double v1 = evaluate(e, env);
            double v2 = evaluate(back, env);
            if (std::isfinite(v1)) {
                REQUIRE(v2 == v1);
                ++checked_values;
            }
        } catch (const DomainError&) {
            // random trees may hit ln/sqrt/1/0 domain edges; parity of the
            // round-tripped tree is covered by the printed-form equality
        }
    }
    CHECK(checked_values > 100);
}

TEST_CASE("symbolic derivative matches finite differences for every function") {
    struct CaseSpec {
        Func fn;
        double lo, hi;  // argument offset range keeping the function smooth
    };
    const CaseSpec cases[] = {
        {Func::sin, -2.0, 2.0}, {Func::cos, -2.0, 2.0},  {Func::tan, -0.6, 0.6},
        {Func::exp, -2.0, 2.0}, {Func::ln, 0.5, 3.0},    {Func::sqrt, 0.5, 3.0},
        {Func::tanh, -2.0, 2.0}, {Func::atan, -2.0, 2.0},
    };
    std::mt19937 rng(11);
    for (const auto& c : cases) {
        // e = fn(a + b*t) exercises the chain rule through the grammar
        Expr arg = make_bin(BinOp::add, make_num(0.0), make_bin(BinOp::mul, make_num(0.7),
                                                                make_var(Var::t)));
        Expr e = make_call(c.fn, arg);
        Expr de = differentiate(e, Var::t);
        std::uniform_real_distribution<double> pt(c.lo / 0.7, c.hi / 0.7);
        for (int k = 0; k < 100; ++k) {
            double t = pt(rng);
            Bindings env;
            env.set(Var::t, t);
            double sym = evaluate(de, env);
            double h = 1e-5;
            double fd = (evaluate(e, Bindings{}.set(Var::t, t + h)) -
                         evaluate(e, Bindings{}.set(Var::t, t - h))) /
                        (2 * h);
            double denom = std::max(std::abs(sym), 1.0);
            REQUIRE(std::abs(sym - fd) / denom <= 1e-6);
        }
    }
}

TEST_CASE("derivatives of the binary operators") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> pt(0.3, 1.8);
    const char* exprs[] = {"t^3 + 2*t", "t*sin(t)", "sin(t)/t", "t^t", "2^t", "exp(-t^2)"};
    for (const char* text : exprs) {
        Expr e = parse(text);
        Expr de = differentiate(e, Var::t);
        for (int k = 0; k < 100; ++k) {
            double t = pt(rng);
            double sym = evaluate(de, Bindings{}.set(Var::t, t));
            double h = 1e-5;
            double fd = (evaluate(e, Bindings{}.set(Var::t, t + h)) -
                         evaluate(e, Bindings{}.set(Var::t, t - h))) /
                        (2 * h);
            REQUIRE(std::abs(sym - fd) / std::max(std::abs(sym), 1.0) <= 1e-6);
        }
    }
}

TEST_CASE("differentiation treats other variables as constants") {
    Expr e = parse("x*y + sin(z)");
    Expr dx = differentiate(e, Var::x);
    Bindings env;
    env.set(Var::x, 3.0).set(Var::y, 5.0).set(Var::z, 0.7);
    CHECK(evaluate(dx, env) == Catch::Approx(5.0));
}
