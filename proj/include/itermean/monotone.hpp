#ifndef ITERMEAN_MONOTONE_HPP
#define ITERMEAN_MONOTONE_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "itermean/expr.hpp"
#include "itermean/interval.hpp"

namespace itermean {

enum class Direction { Increasing, Decreasing };

inline Direction operator*(Direction a, Direction b) {
    return a == b ? Direction::Increasing : Direction::Decreasing;
}

enum class GeneratorClass { Above, Below, Mixed, HasInteriorFixpoint };

/// Relative tolerance and iteration cap for the numeric bisection inverse.
inline constexpr double kInvertTol = 1e-12;
inline constexpr int kInvertMaxIter = 200;

/// Points in the monotonicity validation grid.
inline constexpr int kValidationGridSize = 257;

/// A continuous strictly monotone bijection between real intervals.
///
/// Immutable after construction; all operations are pure. Strict
/// monotonicity is validated on a geometric grid at construction and a
/// violation is a hard MonotonicityError. A symbolic inverse is attached
/// when the defining expression admits one; otherwise inversion is done by
/// bracketed bisection.
class MonotoneFn {
public:
    /// Builds from a parsed expression; direction is determined by sampling.
    static MonotoneFn from_expr(const ExprPtr& body, const Interval& domain);
    static MonotoneFn from_text(const std::string& text, const Interval& domain);

    /// Builds from opaque callables. `inverse` may be empty.
    static MonotoneFn from_callable(Interval domain, Interval codomain,
                                    Direction dir,
                                    std::function<double(double)> fwd,
                                    std::function<double(double)> inverse = {},
                                    std::optional<double> power = std::nullopt);

    static MonotoneFn identity(const Interval& domain);
    static MonotoneFn power_fn(double exponent, const Interval& domain);
    static MonotoneFn log_fn(const Interval& domain);
    static MonotoneFn exp_fn(const Interval& domain);

    const Interval& domain() const { return domain_; }
    const Interval& codomain() const { return codomain_; }
    Direction direction() const { return dir_; }
    const ExprPtr& body() const { return body_; }
    const ExprPtr& inverse_body() const { return inverse_body_; }
    bool has_symbolic_inverse() const { return static_cast<bool>(inv_); }

    /// Exponent a when this function is known to be x^a.
    std::optional<double> power() const { return power_; }

    double operator()(double x) const { return eval(x); }

    /// Evaluates f(x). DomainError if x is outside the domain.
    double eval(double x) const;

    /// Solves f(x) = y to |f(x)-y| <= tol*max(1,|y|). Uses the symbolic
    /// inverse when present, otherwise bisection after geometric bracket
    /// expansion. RangeError if y is outside the codomain, NoConvergence if
    /// no bracket is found within the iteration budget.
    double invert(double y, double tol = kInvertTol) const;

    /// The inverse as a first-class function (domain and codomain swapped).
    MonotoneFn inverse() const;

private:
    MonotoneFn() = default;
    void validate() const;

    Interval domain_, codomain_;
    Direction dir_ = Direction::Increasing;
    std::function<double(double)> fwd_;
    std::function<double(double)> inv_;
    ExprPtr body_, inverse_body_;
    std::optional<double> power_;
};

/// f o g; DomainError unless the codomain of g fits the domain of f.
MonotoneFn compose(const MonotoneFn& f, const MonotoneFn& g);

/// x -> f(x)*g(x). Both must share the domain, map into (0,inf) and have the
/// same direction so the product stays strictly monotone.
MonotoneFn pointwise_product(const MonotoneFn& f, const MonotoneFn& g);

/// x -> f(x)+g(x); same domain and direction.
MonotoneFn pointwise_sum(const MonotoneFn& f, const MonotoneFn& g);

/// x -> f(x)/g(x); the quotient is grid-validated for strict monotonicity.
MonotoneFn pointwise_quotient(const MonotoneFn& f, const MonotoneFn& g);

/// x -> f(x)-g(x); the difference is grid-validated for strict monotonicity.
MonotoneFn pointwise_difference(const MonotoneFn& f, const MonotoneFn& g);

/// n-fold composition of g with itself; negative n iterates the inverse,
/// n = 0 is the identity. Requires domain = codomain.
MonotoneFn iterate(const MonotoneFn& g, int n);

/// Compares g(x) with x at every grid point (Above: g(x) > x everywhere,
/// Below: 1 < g(x) < x everywhere); sign changes of g(x)-x yield
/// HasInteriorFixpoint.
GeneratorClass classify_generator(const MonotoneFn& g,
                                  const std::vector<double>& grid);
GeneratorClass classify_generator(const MonotoneFn& g);

/// Approximate interior fixpoints of g: sign changes of g(x)-x across the
/// grid, refined by bisection; grid points that are (near-)exact roots are
/// reported directly.
std::vector<double> fixpoint_scan(const MonotoneFn& g,
                                  const std::vector<double>& grid);

} // namespace itermean

#endif
