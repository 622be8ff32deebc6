#include "itermean/means.hpp"

#include <cmath>

namespace itermean {

namespace {

void require_common_domain(const MonotoneFn& f, const MonotoneFn& g) {
    if (!f.domain().subset_of(g.domain(), 1e-6) ||
        !g.domain().subset_of(f.domain(), 1e-6))
        throw DomainError("generators must share a domain");
}

void require_same_direction(const MonotoneFn& f, const MonotoneFn& g) {
    if (f.direction() != g.direction())
        throw MonotonicityError("generators must have the same direction");
}

} // namespace

std::vector<std::pair<double, double>> square_grid(const Interval& domain, int n) {
    const auto axis = domain.sample_grid(n);
    std::vector<std::pair<double, double>> pts;
    pts.reserve(axis.size() * axis.size());
    for (double x : axis)
        for (double y : axis) pts.emplace_back(x, y);
    return pts;
}

BivarOp make_C(const MonotoneFn& f, const MonotoneFn& g) {
    require_common_domain(f, g);
    const MonotoneFn fg = compose(f, g);
    const MonotoneFn fc = f, gc = g;
    return BivarOp{
        f.domain(),
        [fg, fc, gc](double x, double y) {
            return fg.invert(fc.eval(x) * gc.eval(y));
        },
        "C", "make_C"};
}

BivarOp make_D(const MonotoneFn& f, const MonotoneFn& g) {
    require_common_domain(f, g);
    const MonotoneFn fg = compose(f, g);
    const MonotoneFn fc = f, gc = g;
    return BivarOp{
        f.domain(),
        [fg, fc, gc](double x, double y) {
            return fg.invert(fc.eval(x) + gc.eval(y));
        },
        "D", "make_D"};
}

BivarOp make_G(const MonotoneFn& f, const MonotoneFn& g) {
    require_common_domain(f, g);
    require_same_direction(f, g);
    const MonotoneFn prod = pointwise_product(f, g);
    const MonotoneFn fc = f, gc = g;
    return BivarOp{
        f.domain(),
        [prod, fc, gc](double x, double y) {
            return prod.invert(fc.eval(x) * gc.eval(y));
        },
        "G", "make_G"};
}

BivarOp make_A(const MonotoneFn& phi, const MonotoneFn& psi) {
    require_common_domain(phi, psi);
    require_same_direction(phi, psi);
    const MonotoneFn sum = pointwise_sum(phi, psi);
    const MonotoneFn pc = phi, qc = psi;
    return BivarOp{
        phi.domain(),
        [sum, pc, qc](double x, double y) {
            return sum.invert(pc.eval(x) + qc.eval(y));
        },
        "A", "make_A"};
}

std::pair<MonotoneFn, MonotoneFn> conjugate_G_to_A(const MonotoneFn& f,
                                                   const MonotoneFn& g) {
    if (f.codomain().lo < -1e-12 || g.codomain().lo < -1e-12)
        throw DomainError("conjugation requires positive-valued generators");
    return {compose(MonotoneFn::log_fn(f.codomain()), f),
            compose(MonotoneFn::log_fn(g.codomain()), g)};
}

BivarOp quasi_geometric(const MonotoneFn& f) {
    const MonotoneFn fc = f;
    return BivarOp{
        f.domain(),
        [fc](double x, double y) {
            return fc.invert(std::sqrt(fc.eval(x) * fc.eval(y)));
        },
        "Gf", "quasi_geometric"};
}

BivarOp quasi_arithmetic(const MonotoneFn& f) {
    const MonotoneFn fc = f;
    return BivarOp{
        f.domain(),
        [fc](double x, double y) {
            return fc.invert(0.5 * (fc.eval(x) + fc.eval(y)));
        },
        "Af", "quasi_arithmetic"};
}

MeanPair ratio_pair(const MonotoneFn& f, const MonotoneFn& g) {
    require_common_domain(f, g);
    const MonotoneFn ratio = pointwise_quotient(f, g); // throws if not monotone
    if (ratio.direction() != Direction::Increasing)
        throw MonotonicityError("f/g must be strictly increasing");
    const MonotoneFn fc = f, gc = g;
    BivarOp M{f.domain(),
              [fc, gc](double x, double y) {
                  return fc.invert(gc.eval(y) / gc.eval(x) * fc.eval(x));
              },
              "M", "ratio_pair"};
    BivarOp N{f.domain(),
              [fc, gc](double x, double y) {
                  return fc.invert(gc.eval(x) / gc.eval(y) * fc.eval(y));
              },
              "N", "ratio_pair"};
    return {M, N};
}

MeanPair difference_pair(const MonotoneFn& f, const MonotoneFn& g) {
    require_common_domain(f, g);
    const MonotoneFn diff = pointwise_difference(f, g);
    if (diff.direction() != Direction::Increasing)
        throw MonotonicityError("f - g must be strictly increasing");
    const MonotoneFn fc = f, gc = g;
    BivarOp M{f.domain(),
              [fc, gc](double x, double y) {
                  return fc.invert(gc.eval(y) - gc.eval(x) + fc.eval(x));
              },
              "M", "difference_pair"};
    BivarOp N{f.domain(),
              [fc, gc](double x, double y) {
                  return fc.invert(gc.eval(x) - gc.eval(y) + fc.eval(y));
              },
              "N", "difference_pair"};
    return {M, N};
}

BivarOp geometric_mean(const Interval& domain) {
    return BivarOp{domain, [](double x, double y) { return std::sqrt(x * y); },
                   "geometric", "geometric_mean"};
}

BivarOp arithmetic_mean(const Interval& domain) {
    return BivarOp{domain, [](double x, double y) { return 0.5 * (x + y); },
                   "arithmetic", "arithmetic_mean"};
}

} // namespace itermean
