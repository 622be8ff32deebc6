// End-to-end acceptance suite: one pass/fail line per criterion, nonzero
// exit on any failure. Every expected value is a closed form evaluated
// independently of the library code.
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "itermean/dynamics.hpp"
#include "itermean/iterprod.hpp"
#include "itermean/verify.hpp"

using namespace itermean;

namespace {

int g_failures = 0;

void report(int n, const char* what, bool ok, const std::string& detail = "") {
    std::printf("%s  %2d  %s%s%s\n", ok ? "PASS" : "FAIL", n, what,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

const Interval kOneInf = Interval::one_inf();

MonotoneFn pw(double a) { return MonotoneFn::power_fn(a, kOneInf); }

std::vector<double> geometric(double lo, double hi, int n) {
    std::vector<double> pts;
    for (int i = 0; i < n; ++i)
        pts.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return pts;
}

std::vector<std::pair<double, double>> squared(const std::vector<double>& axis) {
    std::vector<std::pair<double, double>> pairs;
    for (double x : axis)
        for (double y : axis) pairs.emplace_back(x, y);
    return pairs;
}

/// C of the composed generators built from the nested products of h.
BivarOp composed_C(double w) {
    const MonotoneFn g = pw(1.0 / (1.0 - w));
    const MonotoneFn h = pw(1.0 / w);
    const MonotoneFn f = infinite_product(g);
    return make_C(compose(f, g), compose(g, h));
}

// 1: closed forms of the two iterative means and their composed C over a
// 20x20 geometric grid in (1, 100]^2.
void criterion1() {
    const auto grid = squared(geometric(1.0 + 1e-6, 100.0, 20));
    double worst = 0.0;
    for (double w : {0.25, 0.5, 0.75}) {
        const BivarOp cg = iterative_mean(pw(1.0 / (1.0 - w)));
        const BivarOp ch = iterative_mean(pw(1.0 / w));
        const BivarOp cc = composed_C(w);
        for (const auto& [x, y] : grid) {
            const double eg = std::pow(x, 1 - w) * std::pow(y, w);
            const double eh = std::pow(x, w) * std::pow(y, 1 - w);
            const double ec = std::pow(x * y, w * (1 - w));
            worst = std::max(worst, std::abs(cg(x, y) - eg) / eg);
            worst = std::max(worst, std::abs(ch(x, y) - eh) / eh);
            worst = std::max(worst, std::abs(cc(x, y) - ec) / ec);
        }
    }
    report(1, "iterative-mean closed forms, w in {0.25, 0.5, 0.75}", worst <= 1e-7,
           "max rel err " + std::to_string(worst));
}

// 2: the composed C is invariant under the iterative-mean pair yet is not a
// mean; witness value sqrt(6) at (4, 9).
void criterion2() {
    const double w = 0.5;
    const BivarOp cc = composed_C(w);
    const MeanPair pair{iterative_mean(pw(2.0)), iterative_mean(pw(2.0))};
    const auto grid = squared(geometric(1.5, 50.0, 9));
    const InvarianceReport inv = invariance_residual(cc, pair, grid);

    std::vector<std::pair<double, double>> witness_grid{{4.0, 9.0}};
    witness_grid.insert(witness_grid.end(), grid.begin(), grid.end());
    const MeanReport mr = check_mean(cc, witness_grid);

    bool ok = inv.invariant && inv.max_residual <= 1e-7 && !mr.internal &&
              mr.internality_witness.has_value();
    if (ok) {
        const auto& wit = *mr.internality_witness;
        ok = wit.x == 4.0 && wit.y == 9.0 &&
             std::abs(wit.value - std::sqrt(6.0)) <= 1e-6 && wit.value < 4.0;
    }
    report(2, "invariant composed C is not a mean (witness sqrt(6) at (4,9))", ok);
}

// 3: infinite product matches x^(1/w) within 1e-9, and the reported tail
// bound dominates the true truncation error.
void criterion3() {
    bool ok = true;
    std::string detail;
    for (double w : {0.25, 0.5, 0.75}) {
        const MonotoneFn g = pw(1.0 / (1.0 - w));
        const MonotoneFn f = infinite_product(g);
        IterProduct prod(g, 1e-9);
        for (double x : geometric(1.0 + 1e-6, 100.0, 20)) {
            const double truth = std::pow(x, 1.0 / w);
            if (std::abs(f.eval(x) - truth) / truth > 1e-9) ok = false;
            const ProductEval pe = prod.eval(x);
            // the truncated product is x^(sum_{k<n} (1-w)^k); its analytic
            // distance to x^(1/w) is the true truncation error
            const double s_n = (1.0 - std::pow(1.0 - w, pe.terms)) / w;
            if (std::abs(pe.value - std::pow(x, s_n)) / std::pow(x, s_n) > 1e-12)
                ok = false;
            const double true_err = std::abs(std::pow(x, s_n) - truth) / truth;
            if (true_err > pe.tail_bound + 1e-15) {
                ok = false;
                detail = "tail bound too small at x=" + std::to_string(x);
            }
        }
    }
    report(3, "infinite product convergence with honest tail bounds", ok, detail);
}

// 4: sub-identity generators admit no product limit.
void criterion4() {
    bool ok = true;
    for (double w : {0.3, 0.5, 0.7}) {
        try {
            infinite_product(MonotoneFn::power_fn(w, kOneInf), kProductTol, 60);
            ok = false;
        } catch (const DivergenceError&) {
        }
    }
    report(4, "below-identity generators raise DivergenceError", ok);
}

// 5: f(g(x)) = f(x)g(x) on a grid iff C_{f,g} is a strict mean; three
// matched pairs, three mismatched, zero disagreements.
void criterion5() {
    const auto axis = geometric(1.0 + 1e-6, 100.0, 21);
    const auto grid = squared(axis);
    struct Case {
        MonotoneFn f, g;
    };
    std::vector<Case> cases;
    for (double a : {1.5, 2.0, 3.0}) {
        MonotoneFn g = pw(a);
        cases.push_back({infinite_product(g), g});
    }
    cases.push_back({pw(3.0), pw(2.0)});
    cases.push_back({pw(2.0), pw(3.0)});
    cases.push_back({pw(4.0), pw(4.0)});

    bool ok = true;
    int matched = 0;
    for (const auto& c : cases) {
        const bool reflexive = check_reflexive_C(c.f, c.g, axis);
        const bool strict_mean = check_mean(make_C(c.f, c.g), grid).is_strict_mean();
        if (reflexive != strict_mean) ok = false;
        if (reflexive) ++matched;
    }
    report(5, "grid equivalence: product identity iff C is a strict mean",
           ok && matched == 3);
}

// 6: Gauss iteration of the ratio pair for f = x^3, g = x converges to the
// geometric mean, which its limit_mean reproduces.
void criterion6() {
    const MeanPair mn = ratio_pair(pw(3.0), pw(1.0));
    const IterationTrace tr = iterate_mapping(mn, 2.0, 8.0, 1e-10, 60);
    bool ok = tr.converged && tr.iterations <= 60 && tr.limit &&
              std::abs(tr.limit->first - 4.0) <= 1e-6 &&
              std::abs(tr.limit->second - 4.0) <= 1e-6;

    const BivarOp lim = limit_mean(mn);
    const BivarOp gf = quasi_geometric(pw(3.0));
    for (const auto& [x, y] : squared(geometric(1.5, 50.0, 10)))
        if (std::abs(lim(x, y) - gf(x, y)) / gf(x, y) > 1e-6) ok = false;
    report(6, "Gauss limit of the ratio pair equals the quasi-geometric mean", ok);
}

// 7: the difference pair of f = 2x, g = x is the arithmetic mean twice over;
// one iteration step reaches the diagonal and A_f stays invariant.
void criterion7() {
    const MonotoneFn f = MonotoneFn::from_text("2*x", kOneInf);
    const MeanPair mn = difference_pair(f, pw(1.0));
    bool ok = true;
    for (const auto& [x, y] : squared(geometric(1.5, 50.0, 8))) {
        const double expect = 0.5 * (x + y);
        if (std::abs(mn.first(x, y) - expect) > 1e-10 * expect) ok = false;
        if (std::abs(mn.second(x, y) - expect) > 1e-10 * expect) ok = false;
    }
    const IterationTrace tr = iterate_mapping(mn, 2.0, 8.0);
    ok = ok && tr.converged && tr.iterations <= 1 + 1 &&
         std::abs(tr.points.back().first - 5.0) <= 1e-9;
    const InvarianceReport inv = invariance_residual(
        quasi_arithmetic(f), mn, squared(geometric(1.5, 50.0, 8)), 1e-10);
    ok = ok && inv.invariant && inv.max_residual <= 1e-10;
    report(7, "difference pair of (2x, x) is the arithmetic mean; A_f invariant", ok);
}

// 8: the composite product equation fails across the whole power family,
// with the measured exponents matching 1/(w - w^2) and 1/(1 - w + w^2).
void criterion8() {
    bool ok = true;
    std::string detail;
    const std::vector<double> grid{1.5, 2.0, 3.0, 5.0};
    for (int i = 1; i <= 9; ++i) {
        const double w = 0.1 * i;
        const CompositeEqReport rep =
            composite_equation_residual(pw(1.0 / w), grid);
        if (rep.satisfied) ok = false;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double lx = std::log(grid[k]);
            const double lhs_exp = std::log(rep.lhs_values[k]) / lx;
            const double rhs_exp = std::log(rep.rhs_values[k]) / lx;
            if (std::abs(lhs_exp - 1.0 / (w - w * w)) > 1e-6 ||
                std::abs(rhs_exp - 1.0 / (1.0 - w + w * w)) > 1e-6) {
                ok = false;
                detail = "exponent mismatch at w=" + std::to_string(w);
            }
        }
    }
    report(8, "composite equation falsified across the power family", ok, detail);
}

// 9: the three-equation derivative system has no solution with a,b,c >= 1.
void criterion9() {
    const double min_norm = derivative_system_min_norm(1.0, 10.0, 100);
    report(9, "derivative system infeasible over [1,10]^3", min_norm > 0.1,
           "min residual norm " + std::to_string(min_norm));
}

// 10: equality deciders recover planted parameters and reject mismatches.
void criterion10() {
    const auto grid = squared(geometric(1.0 + 1e-6, 100.0, 9));
    bool ok = true;

    MonotoneFn f2 = MonotoneFn::from_text("2*x^2", kOneInf);
    EqualityReport c_pos = equality_C(f2, pw(3.0), pw(2.0), pw(3.0), grid);
    ok = ok && c_pos.equal && std::abs(c_pos.fitted_params.at("a") - 2.0) <= 1e-6;
    EqualityReport c_neg = equality_C(f2, pw(3.0), pw(2.0), pw(2.0), grid);
    ok = ok && !c_neg.equal && c_neg.max_residual > 1e-3;

    MonotoneFn shifted = MonotoneFn::from_text("x^2+5", kOneInf);
    EqualityReport d_pos = equality_D(shifted, pw(1.0), pw(2.0), pw(1.0), grid);
    ok = ok && d_pos.equal && std::abs(d_pos.fitted_params.at("a") - 5.0) <= 1e-6;
    EqualityReport d_neg = equality_D(shifted, pw(1.0), pw(2.0), pw(2.0), grid);
    ok = ok && !d_neg.equal && d_neg.max_residual > 1e-3;

    MonotoneFn fbar = MonotoneFn::from_text("4*x^2", kOneInf);
    MonotoneFn gbar = MonotoneFn::from_text("9*x^4", kOneInf);
    EqualityReport g_pos = equality_G(pw(1.0), pw(2.0), fbar, gbar, grid);
    ok = ok && g_pos.equal && std::abs(g_pos.fitted_params.at("a") - 2.0) <= 1e-6 &&
         std::abs(g_pos.fitted_params.at("b") - 4.0) <= 1e-6 &&
         std::abs(g_pos.fitted_params.at("c") - 9.0) <= 1e-6;
    EqualityReport g_neg =
        equality_G(pw(1.0), pw(2.0), fbar, MonotoneFn::from_text("9*x^6", kOneInf), grid);
    ok = ok && !g_neg.equal && g_neg.max_residual > 1e-3;

    MonotoneFn Phi = MonotoneFn::from_text("3*x+1", kOneInf);
    MonotoneFn Psi = MonotoneFn::from_text("6*x+2", kOneInf);
    EqualityReport a_pos =
        equality_A(pw(1.0), MonotoneFn::from_text("2*x", kOneInf), Phi, Psi, grid);
    ok = ok && a_pos.equal && std::abs(a_pos.fitted_params.at("alpha") - 3.0) <= 1e-6 &&
         std::abs(a_pos.fitted_params.at("beta") - 1.0) <= 1e-6 &&
         std::abs(a_pos.fitted_params.at("gamma") - 2.0) <= 1e-6;
    EqualityReport a_neg =
        equality_A(pw(1.0), MonotoneFn::from_text("2*x", kOneInf), Phi,
                   MonotoneFn::from_text("4*x", kOneInf), grid);
    ok = ok && !a_neg.equal && a_neg.max_residual > 1e-3;

    report(10, "equality deciders: planted parameters in, mismatches out", ok);
}

// 11: the invariant function Phi(x,y) = xy factors through the limit mean as
// phi(t) = t^2.
void criterion11() {
    const MeanPair pair{iterative_mean(pw(2.0)), iterative_mean(pw(2.0))};
    const BivarOp K = limit_mean(pair, 1e-12);
    BivarOp Phi{kOneInf, [](double x, double y) { return x * y; }, "xy", ""};
    const auto grid = squared(geometric(1.5, 50.0, 10));
    bool ok = check_invariant_function(Phi, pair, grid).invariant;
    const auto phi = [](double t) { return t * t; };
    for (const auto& [x, y] : grid)
        if (std::abs(Phi(x, y) - phi(K(x, y))) > 1e-6 * std::max(1.0, x * y)) ok = false;
    report(11, "invariant function xy factors through the limit mean", ok);
}

// 12: expression round-trips and evaluation agreement at machine precision.
void criterion12() {
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> xs(1.0 + 1e-6, 50.0);
    bool ok = true;
    const std::vector<std::string> family{"x^2",  "x^0.5",          "2*x+1",
                                          "x^3/2", "exp(log(x)*1.5)", "(x+1)^2"};
    for (const auto& text : family) {
        ExprPtr ast = parse(text);
        if (!structurally_equal(parse(unparse(ast)), ast)) ok = false;
        MonotoneFn fn = MonotoneFn::from_expr(ast, kOneInf);
        for (int i = 0; i < 25; ++i) {
            const double x = xs(rng);
            if (fn.eval(x) != eval_ast(ast, x)) ok = false;
        }
    }
    int round_trips = 0;
    for (int i = 0; i < 200 && round_trips < 100; ++i) {
        // random power chains stay within the DSL's invertible fragment
        std::uniform_real_distribution<double> cs(0.3, 3.0);
        ExprPtr e = make_var();
        for (int d = 0; d < 1 + i % 3; ++d)
            e = make_binary(ExprKind::Pow, e, make_const(cs(rng)));
        const std::string text = unparse(e);
        if (!structurally_equal(parse(text), fold(e))) ok = false;
        ++round_trips;
    }
    report(12, "expression round trip and evaluation agreement", ok && round_trips >= 100);
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    criterion11();
    criterion12();
    if (g_failures) std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
