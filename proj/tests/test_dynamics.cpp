#include <doctest.h>

#include <cmath>

#include "itermean/dynamics.hpp"
#include "itermean/iterprod.hpp"
#include "itermean/verify.hpp"

using namespace itermean;

namespace {

const Interval kOneInf = Interval::one_inf();

MonotoneFn pw(double a) { return MonotoneFn::power_fn(a, kOneInf); }

const std::vector<std::pair<double, double>> kPairGrid = square_grid(kOneInf, 7);

} // namespace

TEST_CASE("iterate_mapping reaches the diagonal") {
    MeanPair mn = ratio_pair(pw(3.0), pw(1.0));
    IterationTrace tr = iterate_mapping(mn, 2.0, 8.0);
    CHECK(tr.converged);
    REQUIRE(tr.limit);
    // the invariant of this pair is the geometric mean: limit sqrt(2*8) = 4
    CHECK(tr.limit->first == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(tr.points.size() == static_cast<size_t>(tr.iterations) + 1);
    CHECK(tr.gap_history.front() == doctest::Approx(6.0));
    CHECK(tr.gap_history.back() <= kIterationTol * 4.0 * 1.1);
    // gaps shrink monotonically for this contraction
    for (size_t i = 1; i < tr.gap_history.size(); ++i)
        CHECK(tr.gap_history[i] <= tr.gap_history[i - 1]);
}

TEST_CASE("iterate_mapping respects the step budget") {
    // a pair that never contracts: the projections
    BivarOp px{kOneInf, [](double x, double) { return x; }, "px", ""};
    BivarOp py{kOneInf, [](double, double y) { return y; }, "py", ""};
    IterationTrace tr = iterate_mapping({px, py}, 2.0, 8.0, 1e-10, 25);
    CHECK_FALSE(tr.converged);
    CHECK(tr.iterations == 25);
}

TEST_CASE("invariance_residual") {
    MeanPair mn = ratio_pair(pw(3.0), pw(1.0));
    InvarianceReport geo = invariance_residual(geometric_mean(kOneInf), mn, kPairGrid);
    CHECK(geo.invariant);
    CHECK(geo.max_residual <= 1e-9);

    InvarianceReport ari = invariance_residual(arithmetic_mean(kOneInf), mn, kPairGrid);
    CHECK_FALSE(ari.invariant);
    CHECK(ari.max_residual > 1e-3);
}

TEST_CASE("difference pair leaves the quasi-arithmetic mean invariant") {
    MeanPair mn = difference_pair(pw(3.0), pw(1.0));
    InvarianceReport rep = invariance_residual(quasi_arithmetic(pw(3.0)), mn, kPairGrid);
    CHECK(rep.invariant);

    // this pair contracts slowly (factor ~0.98), so give it room
    IterationTrace tr = iterate_mapping(mn, 2.0, 8.0, 1e-8, 2000);
    REQUIRE(tr.limit);
    CHECK(tr.limit->first == doctest::Approx(std::cbrt(260.0)).epsilon(1e-7));
}

TEST_CASE("limit_mean equals the invariant mean") {
    MeanPair mn = ratio_pair(pw(3.0), pw(1.0));
    BivarOp lim = limit_mean(mn);
    CHECK(lim(2.0, 8.0) == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(lim(3.0, 3.0) == doctest::Approx(3.0).epsilon(1e-8));
    // memoized second call agrees exactly
    CHECK(lim(2.0, 8.0) == lim(2.0, 8.0));

    MeanReport mr = check_mean(lim, square_grid(kOneInf, 5), 1e-7);
    CHECK(mr.is_mean());
}

TEST_CASE("mirrored iterative means compose to the geometric mean") {
    // the means x^(1-w) y^w and x^w y^(1-w) multiply to xy, so sqrt(xy)
    // is their invariant mean
    const double w = 1.0 / 3.0;
    MeanPair pair{iterative_mean(pw(1.0 / (1.0 - w))), iterative_mean(pw(1.0 / w))};
    InvarianceReport rep = invariance_residual(geometric_mean(kOneInf), pair, kPairGrid);
    CHECK(rep.invariant);

    IterationTrace tr = iterate_mapping(pair, 2.0, 8.0);
    REQUIRE(tr.limit);
    CHECK(tr.limit->first == doctest::Approx(4.0).epsilon(1e-7));
}

TEST_CASE("invariant_function") {
    MeanPair mn = ratio_pair(pw(3.0), pw(1.0));
    // phi(t) = t^2 with K = geometric mean gives Phi(x, y) = x y
    BivarOp Phi = invariant_function([](double t) { return t * t; },
                                     geometric_mean(kOneInf));
    CHECK(Phi(2.0, 8.0) == doctest::Approx(16.0).epsilon(1e-10));
    InvarianceReport rep = check_invariant_function(Phi, mn, kPairGrid);
    CHECK(rep.invariant);

    // a non-invariant two-variable function fails the check
    BivarOp sum{kOneInf, [](double x, double y) { return x + y; }, "sum", ""};
    CHECK_FALSE(check_invariant_function(sum, mn, kPairGrid).invariant);
}
