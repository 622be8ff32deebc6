#ifndef ITERMEAN_VERIFY_HPP
#define ITERMEAN_VERIFY_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "itermean/iterprod.hpp"
#include "itermean/means.hpp"

namespace itermean {

inline constexpr double kEqualityTol = 1e-8;

struct InternalityWitness {
    double x, y, value;
};

struct MeanReport {
    bool reflexive = false;
    bool internal = false;
    bool strict = false;
    bool symmetric = false;
    double max_reflexivity_residual = 0.0;
    std::optional<InternalityWitness> internality_witness;
    int grid_size = 0;

    bool is_mean() const { return reflexive && internal; }
    bool is_strict_mean() const { return is_mean() && strict; }
};

struct SymmetryReport {
    bool symmetric = false;
    double max_asymmetry = 0.0;
    std::optional<double> ratio_constant;    ///< c with g ~= c*f, when symmetric
    bool ratio_is_constant = false;
    bool generator_is_square = false;        ///< g(x) ~= x^2 on the grid
};

struct EqualityReport {
    bool equal = false;
    std::map<std::string, double> fitted_params;
    double max_residual = 0.0;
    bool structural_ok = false;  ///< fitted structural form reproduces the inputs
    /// Numerical equality on a grid cannot certify functional identity.
    std::string certification = "grid-certified only";
};

struct CompositeEqReport {
    std::vector<double> grid;
    std::vector<double> lhs_values;
    std::vector<double> rhs_values;
    double max_relative_gap = 0.0;
    bool satisfied = true;
};

/// Evaluates reflexivity, internality, strictness and symmetry of an
/// operation over the given pairs. Strictness is only judged at pairs with
/// x != y.
MeanReport check_mean(const BivarOp& op,
                      const std::vector<std::pair<double, double>>& grid,
                      double tol = 1e-9);

/// True iff f(g(x)) = f(x) g(x) within relative tol on the grid. This is
/// the reflexivity of the composition operation checked without inversion
/// error.
bool check_reflexive_C(const MonotoneFn& f, const MonotoneFn& g,
                       const std::vector<double>& grid, double tol = 1e-8);

/// Symmetry of the composition operation plus the structural consequences:
/// a fitted ratio constant c with g = c f and whether g is the squaring map
/// (the only symmetric mean case).
SymmetryReport symmetry_analysis(const MonotoneFn& f, const MonotoneFn& g,
                                 const std::vector<double>& grid,
                                 double tol = 1e-8);

/// The nested-product construction: g is the infinite product of inverse
/// iterates of h and f the infinite product of inverse iterates of g.
std::pair<MonotoneFn, MonotoneFn> nested_product_pair(const MonotoneFn& h,
                                                      double tol = kProductTol);

/// Residual of the composite functional equation tying the nested products
/// together: compares (f o g)(x) against the infinite product of inverse
/// iterates of g o h over the grid.
CompositeEqReport composite_equation_residual(const MonotoneFn& h,
                                              const std::vector<double>& grid,
                                              double tol = 1e-8);

/// Residuals of the derivative system (ab - a - b, bc - b - c,
/// ab^2c - ab - bc).
std::array<double, 3> derivative_system_residual(double a, double b, double c);

/// Minimum Euclidean norm of the derivative-system residual over
/// [lo, hi]^3 with a, b, c >= 1: grid search at the given per-axis
/// resolution followed by coordinate-descent refinement.
double derivative_system_min_norm(double lo, double hi, int resolution);

/// Equality of two composition operations; when equal fits a with f = a*phi
/// and verifies g = psi.
EqualityReport equality_C(const MonotoneFn& f, const MonotoneFn& g,
                          const MonotoneFn& phi, const MonotoneFn& psi,
                          const std::vector<std::pair<double, double>>& grid,
                          double tol = kEqualityTol);

/// Equality of two additive operations; fits a with f = fbar + a and
/// verifies g = gbar.
EqualityReport equality_D(const MonotoneFn& f, const MonotoneFn& g,
                          const MonotoneFn& fbar, const MonotoneFn& gbar,
                          const std::vector<std::pair<double, double>>& grid,
                          double tol = kEqualityTol);

/// Equality of two quasi-geometric means; fits (a, b, c) with
/// fbar = b f^a, gbar = c g^a by log-linear regression with a common slope.
EqualityReport equality_G(const MonotoneFn& f, const MonotoneFn& g,
                          const MonotoneFn& fbar, const MonotoneFn& gbar,
                          const std::vector<std::pair<double, double>>& grid,
                          double tol = kEqualityTol);

/// Equality of two quasi-arithmetic means; fits (alpha, beta, gamma) with
/// Phi = alpha phi + beta, Psi = alpha psi + gamma.
EqualityReport equality_A(const MonotoneFn& phi, const MonotoneFn& psi,
                          const MonotoneFn& Phi, const MonotoneFn& Psi,
                          const std::vector<std::pair<double, double>>& grid,
                          double tol = kEqualityTol);

} // namespace itermean

#endif
