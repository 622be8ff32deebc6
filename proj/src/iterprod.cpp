#include "itermean/iterprod.hpp"

#include <algorithm>
#include <cmath>

namespace itermean {

IterProduct::IterProduct(MonotoneFn generator, double tol, int max_terms,
                         double scale)
    : g_(std::move(generator)), ginv_(g_.inverse()), tol_(tol),
      max_terms_(max_terms), scale_(scale) {
    if (tol_ <= 0.0) throw DomainError("truncation tolerance must be positive");
    if (g_.direction() != Direction::Increasing)
        throw MonotonicityError("product generator must be strictly increasing");
}

ProductEval IterProduct::eval(double x) const {
    if (!g_.domain().contains(x, 1e-12))
        throw DomainError("product evaluation point outside generator domain");

    double value = x; // k = 0 factor
    double t = x;
    double prev_offset = x - 1.0;
    int rising = 0;
    for (int k = 1; k <= max_terms_; ++k) {
        t = ginv_.eval(t);
        if (!std::isfinite(t) || t <= 0.0)
            throw DivergenceError("inverse iterate left (0, inf)");
        value *= t;
        if (!std::isfinite(value))
            throw DivergenceError("partial product overflowed");

        const double offset = t - 1.0;
        if (offset < 0.0)
            throw DivergenceError("inverse iterate dropped below 1");

        if (offset >= prev_offset && offset > 1e3 * tol_) {
            if (++rising >= 3)
                throw DivergenceError("factor offsets are not shrinking");
        } else {
            rising = 0;
        }

        if (offset <= tol_ && prev_offset > 0.0) {
            const double ratio = offset / prev_offset;
            if (ratio < 1.0) {
                // Inflate the observed ratio; it creeps up toward its limit
                // as the iterates approach 1, so the raw value would
                // understate the tail.
                const double safe = std::min(ratio / (1.0 - offset) + 1e-6, 0.999999);
                const double tail =
                    std::expm1(offset * safe / (1.0 - safe));
                if (tail <= tol_)
                    return {value * scale_, k + 1, tail};
            }
        }
        prev_offset = offset;
    }
    throw DivergenceError("truncation rule not met within max_terms");
}

double product_partial(const MonotoneFn& g, int n, double x) {
    if (classify_generator(g) != GeneratorClass::Above)
        throw GeneratorClassError("partial product requires g(x) > x on the domain");
    if (n < 0) throw DomainError("partial product requires n >= 0");
    const MonotoneFn ginv = g.inverse();
    double value = x;
    double t = x;
    for (int k = 1; k <= n; ++k) {
        t = ginv.eval(t);
        value *= t;
    }
    return value;
}

MonotoneFn infinite_product(const MonotoneFn& g, double tol, int max_terms,
                            double scale) {
    auto ip = std::make_shared<IterProduct>(g, tol, max_terms, scale);

    // Probe convergence now so a diverging generator fails loudly at
    // construction instead of on first use.
    for (double x : {1.5, 2.0, 10.0, 100.0})
        if (g.domain().contains(x)) ip->eval(x);

    std::function<double(double)> fwd = [ip](double x) { return ip->eval(x).value; };
    std::function<double(double)> inv;
    std::optional<double> power;
    if (g.power() && scale == 1.0) {
        const double a = *g.power();
        if (a > 1.0) {
            power = a / (a - 1.0);
            const double inv_exp = (a - 1.0) / a;
            inv = [inv_exp](double y) { return std::pow(y, inv_exp); };
        }
    }

    // the product lives on (1, inf) even when g's domain carries a guard pad
    // below 1 (the iterates of g^{-1} stay above 1 only from there)
    Interval domain = g.domain();
    if (domain.lo < 1.0 && (!domain.bounded_above() || domain.hi > 1.0))
        domain = Interval(1.0, domain.hi, true, domain.hi_open);
    const double vhi = fwd(domain.sample_hi());
    Interval codomain(1.0 - 1e-6, std::isfinite(vhi) && std::abs(vhi) < 1e4
                                      ? vhi * (1.0 + 1e-6)
                                      : kInf);
    return MonotoneFn::from_callable(domain, codomain, Direction::Increasing,
                                     std::move(fwd), std::move(inv), power);
}

ConvergenceReport convergence_report(const MonotoneFn& g,
                                     const std::vector<double>& grid,
                                     double tol) {
    ConvergenceReport report;
    report.grid = grid;
    IterProduct ip(g, tol);
    for (double x : grid) {
        try {
            const ProductEval pe = ip.eval(x);
            report.terms_used.push_back(pe.terms);
            report.max_tail_bound = std::max(report.max_tail_bound, pe.tail_bound);
        } catch (const DivergenceError&) {
            report.converged = false;
            report.terms_used.push_back(-1);
            if (!report.divergence_witness) report.divergence_witness = x;
        }
    }
    return report;
}

BivarOp iterative_mean(const MonotoneFn& g, double tol) {
    if (g.direction() != Direction::Increasing)
        throw MonotonicityError("iterative mean requires an increasing generator");
    if (classify_generator(g) != GeneratorClass::Above)
        throw GeneratorClassError("iterative mean requires g(x) > x on the domain");
    const MonotoneFn f = infinite_product(g, tol);
    BivarOp op = make_C(f, g);
    op.label = "Cg";
    op.provenance = "iterative_mean";
    return op;
}

BivarOp product_iterative_mean(const MonotoneFn& r, double tol) {
    if (r.direction() != Direction::Increasing)
        throw MonotonicityError("product iterative mean requires an increasing generator");
    if (classify_generator(r) != GeneratorClass::Below)
        throw GeneratorClassError(
            "product iterative mean requires 1 < r(x) < x on the domain");
    // r^{-1} inherits r's guard-padded codomain as its domain; clip it back
    // to the (1, inf) window the iterative construction lives on
    const MonotoneFn gfull = r.inverse();
    Interval dom = gfull.domain();
    if (dom.lo < 1.0 && (!dom.bounded_above() || dom.hi > 1.0))
        dom = Interval(1.0, dom.hi, true, dom.hi_open);
    const MonotoneFn g = MonotoneFn::from_callable(
        dom, r.domain(), gfull.direction(),
        [gfull](double x) { return gfull.eval(x); },
        [r](double y) { return r.eval(y); }, gfull.power());
    BivarOp op = iterative_mean(g, tol);
    op.label = "Cr";
    op.provenance = "product_iterative_mean";
    return op;
}

} // namespace itermean
