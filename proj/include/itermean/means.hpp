#ifndef ITERMEAN_MEANS_HPP
#define ITERMEAN_MEANS_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "itermean/monotone.hpp"

namespace itermean {

/// A two-variable operation on a square domain. Whether it is actually a
/// mean is decided by the checkers, not asserted here.
struct BivarOp {
    Interval domain;
    std::function<double(double, double)> evaluator;
    std::string label;
    std::string provenance;

    double operator()(double x, double y) const { return evaluator(x, y); }
};

/// A mean-type mapping (M, N) acting coordinatewise on domain^2.
struct MeanPair {
    BivarOp first;
    BivarOp second;
};

/// n x n grid of (x, y) pairs over the square of the interval.
std::vector<std::pair<double, double>> square_grid(const Interval& domain, int n);

/// (x, y) -> (f o g)^{-1}(f(x) * g(y)). No mean property is asserted.
BivarOp make_C(const MonotoneFn& f, const MonotoneFn& g);

/// Additive analogue (x, y) -> (f o g)^{-1}(f(x) + g(y)).
BivarOp make_D(const MonotoneFn& f, const MonotoneFn& g);

/// Generalized weighted quasi-geometric mean (f*g)^{-1}(f(x) g(y)). The
/// generators must be positive-valued with matching directions; the result
/// is a strict mean.
BivarOp make_G(const MonotoneFn& f, const MonotoneFn& g);

/// Generalized strict weighted quasi-arithmetic mean (phi+psi)^{-1}(phi(x)+psi(y)).
BivarOp make_A(const MonotoneFn& phi, const MonotoneFn& psi);

/// (log o f, log o g); the quasi-arithmetic mean of these generators equals
/// the quasi-geometric mean of (f, g) pointwise.
std::pair<MonotoneFn, MonotoneFn> conjugate_G_to_A(const MonotoneFn& f,
                                                   const MonotoneFn& g);

/// G_f(x, y) = f^{-1}(sqrt(f(x) f(y))).
BivarOp quasi_geometric(const MonotoneFn& f);

/// A_f(x, y) = f^{-1}((f(x) + f(y)) / 2).
BivarOp quasi_arithmetic(const MonotoneFn& f);

/// The pair M(x,y) = f^{-1}((g(y)/g(x)) f(x)), N(x,y) = f^{-1}((g(x)/g(y)) f(y)).
/// Requires f/g strictly increasing (grid-validated); these coincide with
/// the quasi-geometric means of generators (f/g, g) and (g, f/g).
MeanPair ratio_pair(const MonotoneFn& f, const MonotoneFn& g);

/// Additive mirror: M(x,y) = f^{-1}(g(y) - g(x) + f(x)) and the symmetric N.
/// Requires f - g strictly increasing.
MeanPair difference_pair(const MonotoneFn& f, const MonotoneFn& g);

/// The geometric mean sqrt(xy) on the given domain.
BivarOp geometric_mean(const Interval& domain);

/// The arithmetic mean (x+y)/2 on the given domain.
BivarOp arithmetic_mean(const Interval& domain);

} // namespace itermean

#endif
