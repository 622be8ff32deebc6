#ifndef ITERMEAN_INTERVAL_HPP
#define ITERMEAN_INTERVAL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "itermean/errors.hpp"

namespace itermean {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Default guard band around open endpoints; evaluation never touches the
/// boundary itself.
inline constexpr double kEndpointGuard = 1e-9;

/// A real interval, possibly unbounded above. lo < hi is required.
struct Interval {
    double lo = 1.0;
    double hi = kInf;
    bool lo_open = true;
    bool hi_open = true;

    Interval() = default;
    Interval(double lo, double hi, bool lo_open = true, bool hi_open = true)
        : lo(lo), hi(hi), lo_open(lo_open), hi_open(hi_open) {
        if (!(lo < hi)) throw DomainError("interval requires lo < hi");
    }

    static Interval one_inf() { return Interval(1.0, kInf); }
    static Interval zero_inf() { return Interval(0.0, kInf); }
    static Interval window(double w) { return Interval(-w, w, false, false); }

    bool bounded_above() const { return std::isfinite(hi); }

    bool contains(double x, double tol = 0.0) const {
        const double slack = tol * std::max(1.0, std::abs(x));
        if (lo_open ? !(x > lo - slack) : !(x >= lo - slack)) return false;
        if (!bounded_above()) return true;
        return hi_open ? (x < hi + slack) : (x <= hi + slack);
    }

    bool subset_of(const Interval& other, double tol = 1e-9) const {
        const double lo_slack = tol * std::max(1.0, std::abs(lo));
        if (lo < other.lo - lo_slack) return false;
        if (!other.bounded_above()) return true;
        if (!bounded_above()) return false;
        return hi <= other.hi + tol * std::max(1.0, std::abs(hi));
    }

    /// Inner endpoints for sampling: open ends are pulled in by the guard
    /// band, an unbounded upper end is capped at 1e6.
    double sample_lo() const {
        if (!lo_open) return lo;
        if (lo > 0.0) return lo + kEndpointGuard * std::max(1.0, lo);
        if (lo == 0.0) return 1e-6;
        return lo + kEndpointGuard * std::max(1.0, std::abs(lo));
    }
    double sample_hi() const {
        double h = bounded_above() ? hi : 1e6;
        if (hi_open || !bounded_above())
            h -= kEndpointGuard * std::max(1.0, std::abs(h));
        return h;
    }

    /// n-point validation grid: geometric when the interval is strictly
    /// positive, linear otherwise.
    std::vector<double> sample_grid(int n) const {
        const double a = sample_lo();
        const double b = sample_hi();
        std::vector<double> pts;
        pts.reserve(static_cast<std::size_t>(std::max(n, 1)));
        if (n <= 1) {
            pts.push_back(0.5 * (a + b));
            return pts;
        }
        const bool geometric = a > 0.0;
        for (int i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / (n - 1);
            pts.push_back(geometric ? a * std::pow(b / a, t) : a + t * (b - a));
        }
        return pts;
    }
};

} // namespace itermean

#endif
