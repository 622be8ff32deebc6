#ifndef ITERMEAN_DYNAMICS_HPP
#define ITERMEAN_DYNAMICS_HPP

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "itermean/means.hpp"

namespace itermean {

inline constexpr double kIterationTol = 1e-10;
inline constexpr int kIterationMaxSteps = 200;

/// Orbit of a point under repeated application of a mean-type mapping.
struct IterationTrace {
    std::vector<std::pair<double, double>> points; ///< (x_0, y_0), (x_1, y_1), ...
    std::vector<double> gap_history;               ///< |x_n - y_n|
    bool converged = false;
    int iterations = 0;
    std::optional<std::pair<double, double>> limit;
};

struct InvarianceReport {
    std::vector<std::pair<double, double>> grid;
    double max_residual = 0.0;
    bool invariant = false;
};

/// Iterates (x, y) <- (M(x, y), N(x, y)) until |x - y| <= tol*max(1, |x|) or
/// max_n steps. The limit is the midpoint of the final pair.
IterationTrace iterate_mapping(const MeanPair& pair, double x0, double y0,
                               double tol = kIterationTol,
                               int max_n = kIterationMaxSteps);

/// Max over the grid of |K(M(x,y), N(x,y)) - K(x,y)| relative; invariant iff
/// within tol.
InvarianceReport invariance_residual(const BivarOp& K, const MeanPair& pair,
                                     const std::vector<std::pair<double, double>>& grid,
                                     double tol = 1e-7);

/// The empirical Gauss-composition limit of the pair as an operation:
/// evaluating it iterates the mapping from (x, y) on demand. Results are
/// memoized per rounded input pair; NoConvergence at points that exceed
/// max_n.
BivarOp limit_mean(const MeanPair& pair, double tol = kIterationTol,
                   int max_n = kIterationMaxSteps);

/// Phi = phi o K for a single-variable function phi; invariant under any
/// pair whose invariant mean is K.
BivarOp invariant_function(const std::function<double(double)>& phi,
                           const BivarOp& K);

/// Residual grid check of Phi(M(x,y), N(x,y)) = Phi(x,y) for an arbitrary
/// two-variable function.
InvarianceReport check_invariant_function(const BivarOp& Phi, const MeanPair& pair,
                                          const std::vector<std::pair<double, double>>& grid,
                                          double tol = 1e-7);

} // namespace itermean

#endif
