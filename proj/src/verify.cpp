#include "itermean/verify.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace itermean {

namespace {

double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        std::nth_element(v.begin(), v.begin() + mid - 1, v.end());
        m = 0.5 * (m + v[mid - 1]);
    }
    return m;
}

std::vector<double> axis_points(const std::vector<std::pair<double, double>>& grid) {
    std::set<double> s;
    for (const auto& [x, y] : grid) {
        s.insert(x);
        s.insert(y);
    }
    return {s.begin(), s.end()};
}

} // namespace

MeanReport check_mean(const BivarOp& op,
                      const std::vector<std::pair<double, double>>& grid,
                      double tol) {
    MeanReport report;
    report.grid_size = static_cast<int>(grid.size());
    report.reflexive = true;
    report.internal = true;
    report.strict = true;
    report.symmetric = true;

    for (double x : axis_points(grid)) {
        const double r = rel_diff(op(x, x), x);
        report.max_reflexivity_residual = std::max(report.max_reflexivity_residual, r);
        if (r > tol) report.reflexive = false;
    }

    for (const auto& [x, y] : grid) {
        const double v = op(x, y);
        const double lo = std::min(x, y);
        const double hi = std::max(x, y);
        const double slack = tol * std::max(1.0, hi);
        if (v < lo - slack || v > hi + slack) {
            report.internal = false;
            report.strict = false;
            if (!report.internality_witness)
                report.internality_witness = InternalityWitness{x, y, v};
            continue;
        }
        if (hi - lo > slack) {
            if (!(v > lo + slack && v < hi - slack)) report.strict = false;
        }
        if (report.symmetric && rel_diff(v, op(y, x)) > tol)
            report.symmetric = false;
    }
    return report;
}

bool check_reflexive_C(const MonotoneFn& f, const MonotoneFn& g,
                       const std::vector<double>& grid, double tol) {
    for (double x : grid) {
        const double lhs = f.eval(g.eval(x));
        const double rhs = f.eval(x) * g.eval(x);
        if (std::abs(lhs - rhs) > tol * std::abs(lhs)) return false;
    }
    return true;
}

SymmetryReport symmetry_analysis(const MonotoneFn& f, const MonotoneFn& g,
                                 const std::vector<double>& grid, double tol) {
    SymmetryReport report;
    const BivarOp op = make_C(f, g);
    report.symmetric = true;
    for (double x : grid)
        for (double y : grid) {
            if (x >= y) continue;
            const double d = rel_diff(op(x, y), op(y, x));
            report.max_asymmetry = std::max(report.max_asymmetry, d);
            if (d > tol) report.symmetric = false;
        }
    if (!report.symmetric) return report;

    std::vector<double> ratios;
    ratios.reserve(grid.size());
    for (double x : grid) ratios.push_back(g.eval(x) / f.eval(x));
    const double c = median(ratios);
    report.ratio_constant = c;
    report.ratio_is_constant = true;
    report.generator_is_square = true;
    for (double x : grid) {
        if (rel_diff(g.eval(x), c * f.eval(x)) > 1e-6) report.ratio_is_constant = false;
        if (rel_diff(g.eval(x), x * x) > 1e-6) report.generator_is_square = false;
    }
    return report;
}

std::pair<MonotoneFn, MonotoneFn> nested_product_pair(const MonotoneFn& h,
                                                      double tol) {
    MonotoneFn g = infinite_product(h, tol);
    MonotoneFn f = infinite_product(g, tol);
    return {std::move(f), std::move(g)};
}

CompositeEqReport composite_equation_residual(const MonotoneFn& h,
                                              const std::vector<double>& grid,
                                              double tol) {
    auto [f, g] = nested_product_pair(h);
    const MonotoneFn lhs = compose(f, g);
    const MonotoneFn rhs = infinite_product(compose(g, h));

    CompositeEqReport report;
    report.grid = grid;
    for (double x : grid) {
        const double l = lhs.eval(x);
        const double r = rhs.eval(x);
        report.lhs_values.push_back(l);
        report.rhs_values.push_back(r);
        report.max_relative_gap =
            std::max(report.max_relative_gap, std::abs(l - r) / std::abs(l));
    }
    report.satisfied = report.max_relative_gap <= tol;
    return report;
}

std::array<double, 3> derivative_system_residual(double a, double b, double c) {
    return {a * b - a - b, b * c - b - c, a * b * b * c - a * b - b * c};
}

namespace {

double residual_norm(double a, double b, double c) {
    const auto r = derivative_system_residual(a, b, c);
    return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
}

} // namespace

double derivative_system_min_norm(double lo, double hi, int resolution) {
    if (!(1.0 <= lo && lo <= hi)) throw DomainError("search box must satisfy 1 <= lo <= hi");
    const int n = std::max(resolution, 1);
    const double step0 = (hi - lo) / n;

    double best[3] = {lo, lo, lo};
    double best_norm = residual_norm(lo, lo, lo);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            for (int k = 0; k <= n; ++k) {
                const double a = lo + i * step0;
                const double b = lo + j * step0;
                const double c = lo + k * step0;
                const double norm = residual_norm(a, b, c);
                if (norm < best_norm) {
                    best_norm = norm;
                    best[0] = a;
                    best[1] = b;
                    best[2] = c;
                }
            }

    double step = std::max(step0, 1e-6);
    for (int it = 0; it < 100; ++it) {
        bool improved = false;
        for (int dim = 0; dim < 3; ++dim)
            for (double dir : {-1.0, 1.0}) {
                double cand[3] = {best[0], best[1], best[2]};
                cand[dim] = std::clamp(cand[dim] + dir * step, std::max(lo, 1.0), hi);
                const double norm = residual_norm(cand[0], cand[1], cand[2]);
                if (norm < best_norm) {
                    best_norm = norm;
                    best[0] = cand[0];
                    best[1] = cand[1];
                    best[2] = cand[2];
                    improved = true;
                }
            }
        if (!improved) step *= 0.5;
    }
    return best_norm;
}

namespace {

double max_op_residual(const BivarOp& a, const BivarOp& b,
                       const std::vector<std::pair<double, double>>& grid) {
    double worst = 0.0;
    for (const auto& [x, y] : grid)
        worst = std::max(worst, rel_diff(a(x, y), b(x, y)));
    return worst;
}

} // namespace

EqualityReport equality_C(const MonotoneFn& f, const MonotoneFn& g,
                          const MonotoneFn& phi, const MonotoneFn& psi,
                          const std::vector<std::pair<double, double>>& grid,
                          double tol) {
    EqualityReport report;
    report.max_residual = max_op_residual(make_C(f, g), make_C(phi, psi), grid);
    report.equal = report.max_residual <= tol;

    const auto xs = axis_points(grid);
    std::vector<double> ratios;
    for (double x : xs) ratios.push_back(f.eval(x) / phi.eval(x));
    const double a = median(ratios);
    report.fitted_params["a"] = a;

    report.structural_ok = true;
    for (double x : xs) {
        if (rel_diff(g.eval(x), psi.eval(x)) > tol) report.structural_ok = false;
        if (rel_diff(f.eval(x), a * phi.eval(x)) > tol) report.structural_ok = false;
    }
    return report;
}

EqualityReport equality_D(const MonotoneFn& f, const MonotoneFn& g,
                          const MonotoneFn& fbar, const MonotoneFn& gbar,
                          const std::vector<std::pair<double, double>>& grid,
                          double tol) {
    EqualityReport report;
    report.max_residual = max_op_residual(make_D(f, g), make_D(fbar, gbar), grid);
    report.equal = report.max_residual <= tol;

    const auto xs = axis_points(grid);
    std::vector<double> shifts;
    for (double x : xs) shifts.push_back(f.eval(x) - fbar.eval(x));
    const double a = median(shifts);
    report.fitted_params["a"] = a;

    report.structural_ok = true;
    for (double x : xs) {
        if (rel_diff(g.eval(x), gbar.eval(x)) > tol) report.structural_ok = false;
        if (rel_diff(f.eval(x), fbar.eval(x) + a) > tol) report.structural_ok = false;
    }
    return report;
}

namespace {

// Two linear regressions sharing one slope: v ~ a*u + beta, q ~ a*p + gamma.
struct CommonSlopeFit {
    double slope, intercept1, intercept2;
};

CommonSlopeFit fit_common_slope(const std::vector<double>& u,
                                const std::vector<double>& v,
                                const std::vector<double>& p,
                                const std::vector<double>& q) {
    auto mean_of = [](const std::vector<double>& w) {
        double s = 0.0;
        for (double t : w) s += t;
        return s / static_cast<double>(w.size());
    };
    const double um = mean_of(u), vm = mean_of(v), pm = mean_of(p), qm = mean_of(q);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        sxy += (u[i] - um) * (v[i] - vm);
        sxx += (u[i] - um) * (u[i] - um);
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        sxy += (p[i] - pm) * (q[i] - qm);
        sxx += (p[i] - pm) * (p[i] - pm);
    }
    const double a = sxx > 0.0 ? sxy / sxx : 1.0;
    return {a, vm - a * um, qm - a * pm};
}

} // namespace

EqualityReport equality_G(const MonotoneFn& f, const MonotoneFn& g,
                          const MonotoneFn& fbar, const MonotoneFn& gbar,
                          const std::vector<std::pair<double, double>>& grid,
                          double tol) {
    EqualityReport report;
    report.max_residual =
        max_op_residual(make_G(f, g), make_G(fbar, gbar), grid);
    report.equal = report.max_residual <= tol;

    const auto xs = axis_points(grid);
    std::vector<double> u, v, p, q;
    for (double x : xs) {
        u.push_back(std::log(f.eval(x)));
        v.push_back(std::log(fbar.eval(x)));
        p.push_back(std::log(g.eval(x)));
        q.push_back(std::log(gbar.eval(x)));
    }
    const CommonSlopeFit fit = fit_common_slope(u, v, p, q);
    const double a = fit.slope;
    const double b = std::exp(fit.intercept1);
    const double c = std::exp(fit.intercept2);
    report.fitted_params["a"] = a;
    report.fitted_params["b"] = b;
    report.fitted_params["c"] = c;

    report.structural_ok = true;
    for (double x : xs) {
        if (rel_diff(fbar.eval(x), b * std::pow(f.eval(x), a)) > 1e-6)
            report.structural_ok = false;
        if (rel_diff(gbar.eval(x), c * std::pow(g.eval(x), a)) > 1e-6)
            report.structural_ok = false;
    }
    return report;
}

EqualityReport equality_A(const MonotoneFn& phi, const MonotoneFn& psi,
                          const MonotoneFn& Phi, const MonotoneFn& Psi,
                          const std::vector<std::pair<double, double>>& grid,
                          double tol) {
    EqualityReport report;
    report.max_residual =
        max_op_residual(make_A(phi, psi), make_A(Phi, Psi), grid);
    report.equal = report.max_residual <= tol;

    const auto xs = axis_points(grid);
    std::vector<double> u, v, p, q;
    for (double x : xs) {
        u.push_back(phi.eval(x));
        v.push_back(Phi.eval(x));
        p.push_back(psi.eval(x));
        q.push_back(Psi.eval(x));
    }
    const CommonSlopeFit fit = fit_common_slope(u, v, p, q);
    report.fitted_params["alpha"] = fit.slope;
    report.fitted_params["beta"] = fit.intercept1;
    report.fitted_params["gamma"] = fit.intercept2;

    report.structural_ok = true;
    for (double x : xs) {
        if (rel_diff(Phi.eval(x), fit.slope * phi.eval(x) + fit.intercept1) > 1e-6)
            report.structural_ok = false;
        if (rel_diff(Psi.eval(x), fit.slope * psi.eval(x) + fit.intercept2) > 1e-6)
            report.structural_ok = false;
    }
    return report;
}

} // namespace itermean
