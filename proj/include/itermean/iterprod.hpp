#ifndef ITERMEAN_ITERPROD_HPP
#define ITERMEAN_ITERPROD_HPP

#include <memory>
#include <optional>
#include <vector>

#include "itermean/means.hpp"
#include "itermean/monotone.hpp"

namespace itermean {

inline constexpr double kProductTol = 1e-12;
inline constexpr int kProductMaxTerms = 10000;

/// One truncated evaluation of the infinite product of inverse iterates.
struct ProductEval {
    double value = 0.0;
    int terms = 0;         ///< factors actually multiplied (k = 0 .. terms-1)
    double tail_bound = 0.0; ///< estimated relative truncation error
};

/// The infinite product P(x) = c * prod_{k>=0} g^{-k}(x) for a generator g
/// with g(x) > x on (1, inf), evaluated by truncation.
///
/// Stopping rule: stop at the smallest n with |g^{-n}(x) - 1| <= tol and
/// estimated tail <= tol. The tail models the remaining factors as geometric
/// in g^{-k}(x) - 1 with the observed ratio, inflated to cover the ratio's
/// upward creep toward its limit.
///
/// Divergence (the sub-identity-generator pathology) is detected when the
/// factor offsets stop shrinking, or when the term/iteration budget runs
/// out, and raises DivergenceError.
class IterProduct {
public:
    explicit IterProduct(MonotoneFn generator, double tol = kProductTol,
                         int max_terms = kProductMaxTerms, double scale = 1.0);

    ProductEval eval(double x) const;

    const MonotoneFn& generator() const { return g_; }
    double tol() const { return tol_; }
    int max_terms() const { return max_terms_; }
    double scale() const { return scale_; }

private:
    MonotoneFn g_;
    MonotoneFn ginv_;
    double tol_;
    int max_terms_;
    double scale_;
};

/// prod_{k=0}^{n} g^{-k}(x). GeneratorClassError unless g(x) > x on (1, inf).
double product_partial(const MonotoneFn& g, int n, double x);

/// The limit function of the truncated product as a first-class MonotoneFn.
/// Convergence is probed on a small grid at construction; DivergenceError if
/// any probe fails. For a recognized power generator x^a the symbolic
/// inverse y^{(a-1)/a} is attached (only when scale = 1).
MonotoneFn infinite_product(const MonotoneFn& g, double tol = kProductTol,
                            int max_terms = kProductMaxTerms, double scale = 1.0);

struct ConvergenceReport {
    bool converged = true;
    std::vector<double> grid;
    std::vector<int> terms_used;
    double max_tail_bound = 0.0;
    std::optional<double> divergence_witness;
};

/// Evaluates the product at every grid point; divergence is reported, not
/// thrown. Vacuously converged on an empty grid.
ConvergenceReport convergence_report(const MonotoneFn& g,
                                     const std::vector<double>& grid,
                                     double tol);

/// The iterative-type mean (x, y) -> (f o g)^{-1}(f(x) g(y)) with f the
/// infinite product of inverse iterates of g. Requires g strictly
/// increasing with g(x) > x; the result is a strict mean.
BivarOp iterative_mean(const MonotoneFn& g, double tol = kProductTol);

/// The product iterative mean of a generator r with 1 < r(x) < x, i.e. the
/// iterative mean of g = r^{-1}. GeneratorClassError unless r is of that
/// class.
BivarOp product_iterative_mean(const MonotoneFn& r, double tol = kProductTol);

} // namespace itermean

#endif
