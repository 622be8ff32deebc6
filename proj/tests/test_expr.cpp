#include <doctest.h>

#include <cmath>
#include <random>

#include "itermean/expr.hpp"
#include "itermean/monotone.hpp"

using namespace itermean;

TEST_CASE("parse basic forms") {
    ExprPtr e = parse("x^2");
    REQUIRE(e->kind == ExprKind::Pow);
    CHECK(e->a->kind == ExprKind::Var);
    CHECK(e->b->kind == ExprKind::Const);
    CHECK(e->b->value == 2.0);

    // constant subexpressions fold at parse time
    e = parse("x^(1/0.5)");
    REQUIRE(e->kind == ExprKind::Pow);
    CHECK(e->b->value == 2.0);

    e = parse("exp(log(x)*2)");
    REQUIRE(e->kind == ExprKind::Exp);
    REQUIRE(e->a->kind == ExprKind::Mul);
    CHECK(e->a->a->kind == ExprKind::Log);
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("y+1"), ParseError);
    CHECK_THROWS_AS(parse("x^"), ParseError);
    CHECK_THROWS_AS(parse("sin(x)"), ParseError);
    CHECK_THROWS_AS(parse("(x"), ParseError);
    try {
        parse("x + $");
    } catch (const ParseError& pe) {
        CHECK(pe.position == 4);
    }
}

TEST_CASE("unparse canonical forms") {
    CHECK(unparse(parse("x^2")) == "x^2");
    CHECK(unparse(make_const(3.5)) == "3.5");
    // exp o log folds to the identity
    CHECK(unparse(parse("exp(log(x))")) == "x");
    CHECK(unparse(parse("sqrt(x)")) == "x^0.5");
    CHECK(unparse(parse("-x^2")) == "(-x)^2"); // grammar binds - tighter than ^
    CHECK(unparse(parse("x - (x - x)")) == "x-(x-x)");
}

TEST_CASE("eval matches direct arithmetic") {
    CHECK(eval_ast(parse("x^2"), 3.0) == 9.0);
    CHECK(eval_ast(parse("x"), 7.25) == 7.25);
    CHECK(eval_ast(parse("2*x+1"), 4.0) == 9.0);
    CHECK(eval_ast(parse("exp(log(x)*2)"), 5.0) == doctest::Approx(25.0).epsilon(1e-14));
}

namespace {

ExprPtr random_ast(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> kind_pick(0, depth <= 0 ? 1 : 9);
    std::uniform_real_distribution<double> const_pick(0.25, 4.0);
    switch (kind_pick(rng)) {
    case 0: return make_const(const_pick(rng));
    case 1: return make_var();
    case 2: return make_binary(ExprKind::Add, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    case 3: return make_binary(ExprKind::Sub, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    case 4: return make_binary(ExprKind::Mul, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    case 5: return make_binary(ExprKind::Div, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    case 6: return make_binary(ExprKind::Pow, random_ast(rng, depth - 1), make_const(const_pick(rng)));
    case 7: return make_unary(ExprKind::Exp, random_ast(rng, depth - 1));
    case 8: return make_unary(ExprKind::Log, random_ast(rng, depth - 1));
    default: return make_unary(ExprKind::Neg, random_ast(rng, depth - 1));
    }
}

bool all_consts_finite(const ExprPtr& e) {
    if (!e) return true;
    if (e->kind == ExprKind::Const) return std::isfinite(e->value);
    return all_consts_finite(e->a) && all_consts_finite(e->b);
}

} // namespace

TEST_CASE("round trip property over random ASTs") {
    std::mt19937 rng(20240817);
    int checked = 0;
    for (int i = 0; i < 300 && checked < 100; ++i) {
        ExprPtr a = random_ast(rng, 4);
        ExprPtr folded = fold(a);
        if (!all_consts_finite(folded)) continue; // folding hit log/0-division
        const std::string text = unparse(a);
        ExprPtr back = parse(text);
        INFO("text: ", text);
        CHECK(structurally_equal(back, folded));
        // idempotence of the canonical form
        CHECK(unparse(back) == text);
        ++checked;
    }
    CHECK(checked >= 100);
}

TEST_CASE("to_monotone evaluation agrees with AST evaluation") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> xs(1.0 + 1e-6, 50.0);
    for (const char* text : {"x^2", "x^0.5", "2*x+1", "exp(log(x)*1.5)", "x^3/2"}) {
        ExprPtr ast = parse(text);
        MonotoneFn f = MonotoneFn::from_expr(ast, Interval::one_inf());
        for (int i = 0; i < 50; ++i) {
            const double x = xs(rng);
            CHECK(f.eval(x) == eval_ast(ast, x));
        }
    }
}

TEST_CASE("to_monotone direction and symbolic inverse") {
    MonotoneFn sq = MonotoneFn::from_text("x^2", Interval::one_inf());
    CHECK(sq.direction() == Direction::Increasing);
    REQUIRE(sq.has_symbolic_inverse());
    CHECK(sq.invert(9.0) == doctest::Approx(3.0).epsilon(1e-14));

    MonotoneFn below = MonotoneFn::from_text("x^0.5", Interval::one_inf());
    CHECK(below.direction() == Direction::Increasing);
    CHECK(classify_generator(below) == GeneratorClass::Below);

    MonotoneFn recip = MonotoneFn::from_text("1/x", Interval::zero_inf());
    CHECK(recip.direction() == Direction::Decreasing);
    REQUIRE(recip.has_symbolic_inverse());
    CHECK(recip.invert(0.25) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("symbolic inverse round trip on codomain grid") {
    for (const char* text : {"x^2", "2*x+1", "exp(x)", "log(x)", "exp(2*x)", "(x+1)^3"}) {
        const Interval dom = std::string(text).find("log") != std::string::npos
                                 ? Interval::one_inf()
                                 : Interval(0.0, 10.0);
        MonotoneFn f = MonotoneFn::from_text(text, dom);
        REQUIRE(f.has_symbolic_inverse());
        for (double x : dom.sample_grid(33)) {
            const double y = f.eval(x);
            CHECK(f.eval(f.invert(y)) == doctest::Approx(y).epsilon(1e-12));
        }
    }
}

TEST_CASE("non-constant exponents are rejected at validation") {
    CHECK_THROWS_AS(MonotoneFn::from_text("x^x", Interval::one_inf()), DomainError);
    CHECK_THROWS_AS(MonotoneFn::from_text("2^x", Interval::one_inf()), DomainError);
}
