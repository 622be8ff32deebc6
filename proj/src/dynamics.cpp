#include "itermean/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "itermean/errors.hpp"

namespace itermean {

IterationTrace iterate_mapping(const MeanPair& pair, double x0, double y0,
                               double tol, int max_n) {
    IterationTrace trace;
    double x = x0, y = y0;
    trace.points.emplace_back(x, y);
    trace.gap_history.push_back(std::abs(x - y));
    for (int n = 0; n < max_n; ++n) {
        if (std::abs(x - y) <= tol * std::max(1.0, std::abs(x))) {
            trace.converged = true;
            trace.limit = {0.5 * (x + y), 0.5 * (x + y)};
            return trace;
        }
        const double nx = pair.first(x, y);
        const double ny = pair.second(x, y);
        x = nx;
        y = ny;
        trace.points.emplace_back(x, y);
        trace.gap_history.push_back(std::abs(x - y));
        trace.iterations = n + 1;
    }
    if (std::abs(x - y) <= tol * std::max(1.0, std::abs(x))) {
        trace.converged = true;
        trace.limit = {0.5 * (x + y), 0.5 * (x + y)};
    }
    return trace;
}

InvarianceReport invariance_residual(const BivarOp& K, const MeanPair& pair,
                                     const std::vector<std::pair<double, double>>& grid,
                                     double tol) {
    InvarianceReport report;
    report.grid = grid;
    for (const auto& [x, y] : grid) {
        const double before = K(x, y);
        const double after = K(pair.first(x, y), pair.second(x, y));
        report.max_residual =
            std::max(report.max_residual,
                     std::abs(after - before) / std::max(1.0, std::abs(before)));
    }
    report.invariant = report.max_residual <= tol;
    return report;
}

namespace {

// Memoization key: inputs rounded to 12 significant digits.
std::string round_key(double x, double y) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g|%.12g", x, y);
    return buf;
}

} // namespace

BivarOp limit_mean(const MeanPair& pair, double tol, int max_n) {
    auto cache = std::make_shared<std::map<std::string, double>>();
    auto mutex = std::make_shared<std::mutex>();
    const MeanPair pc = pair;
    return BivarOp{
        pair.first.domain,
        [pc, tol, max_n, cache, mutex](double x, double y) {
            const std::string key = round_key(x, y);
            {
                std::lock_guard<std::mutex> lock(*mutex);
                if (auto it = cache->find(key); it != cache->end())
                    return it->second;
            }
            const IterationTrace trace = iterate_mapping(pc, x, y, tol, max_n);
            if (!trace.converged)
                throw NoConvergence("mean-type iteration did not converge");
            const double v = trace.limit->first;
            std::lock_guard<std::mutex> lock(*mutex);
            cache->emplace(key, v);
            return v;
        },
        "limit", "limit_mean"};
}

BivarOp invariant_function(const std::function<double(double)>& phi,
                           const BivarOp& K) {
    const BivarOp Kc = K;
    const std::function<double(double)> pc = phi;
    return BivarOp{K.domain,
                   [pc, Kc](double x, double y) {
                       const double v = pc(Kc(x, y));
                       if (!std::isfinite(v))
                           throw DomainError("invariant function undefined at mean value");
                       return v;
                   },
                   "Phi", "invariant_function"};
}

InvarianceReport check_invariant_function(const BivarOp& Phi, const MeanPair& pair,
                                          const std::vector<std::pair<double, double>>& grid,
                                          double tol) {
    InvarianceReport report;
    report.grid = grid;
    for (const auto& [x, y] : grid) {
        const double before = Phi(x, y);
        const double after = Phi(pair.first(x, y), pair.second(x, y));
        report.max_residual =
            std::max(report.max_residual,
                     std::abs(after - before) / std::max(1.0, std::abs(before)));
    }
    report.invariant = report.max_residual <= tol;
    return report;
}

} // namespace itermean
