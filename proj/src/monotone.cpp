#include "itermean/monotone.hpp"

#include <algorithm>
#include <cmath>

namespace itermean {

namespace {

bool nearly_equal(double a, double b, double tol = 1e-9) {
    if (a == b) return true;
    if (std::isinf(a) || std::isinf(b)) return false;
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

bool same_interval(const Interval& a, const Interval& b) {
    const bool hi_match = (!a.bounded_above() && !b.bounded_above()) ||
                          (a.bounded_above() && b.bounded_above() &&
                           nearly_equal(a.hi, b.hi, 1e-6));
    return nearly_equal(a.lo, b.lo, 1e-6) && hi_match;
}

// Rejects Pow nodes whose exponent contains the variable; keeps symbolic
// inversion tractable and monotonicity analysis honest.
void check_constant_exponents(const ExprPtr& e) {
    if (!e) return;
    if (e->kind == ExprKind::Pow && var_count(e->b) > 0)
        throw DomainError("power with non-constant exponent is not supported");
    check_constant_exponents(e->a);
    check_constant_exponents(e->b);
}

Direction detect_direction(const std::function<double(double)>& fwd,
                           const std::vector<double>& grid) {
    double prev = fwd(grid.front());
    if (!std::isfinite(prev)) throw DomainError("function not finite on domain");
    int sign = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double v = fwd(grid[i]);
        if (!std::isfinite(v)) throw DomainError("function not finite on domain");
        const int s = v > prev ? 1 : v < prev ? -1 : 0;
        if (s == 0) throw MonotonicityError("function not strictly monotone on grid");
        if (sign == 0) sign = s;
        else if (s != sign)
            throw MonotonicityError("function not strictly monotone on grid");
        prev = v;
    }
    return sign >= 0 ? Direction::Increasing : Direction::Decreasing;
}

// Codomain from the images of the sampling edges. A side produced by an
// unbounded domain end is itself treated as unbounded when the sampled value
// has grown large; finite bounds are padded slightly so membership checks do
// not reject limit values.
Interval infer_codomain(const std::function<double(double)>& fwd,
                        const Interval& domain, Direction dir) {
    const double vlo = fwd(domain.sample_lo());
    const double vhi = fwd(domain.sample_hi());
    double clo = std::min(vlo, vhi);
    double chi = std::max(vlo, vhi);
    const bool hi_from_unbounded =
        !domain.bounded_above() &&
        ((dir == Direction::Increasing && chi == vhi) ||
         (dir == Direction::Decreasing && chi == vlo));
    if (hi_from_unbounded) {
        // distinguish a finite asymptote from unbounded growth by how the
        // increments behave over geometrically spaced far-field samples
        const double b = domain.sample_hi();
        const double v1 = fwd(b / 4.0), v2 = fwd(b / 2.0), v3 = fwd(b);
        const double inner = std::abs(v2 - v1), outer = std::abs(v3 - v2);
        if (outer > 0.9 * inner || std::abs(chi) >= 1e8) chi = kInf;
    }
    clo -= 1e-6 * std::max(1.0, std::abs(clo));
    if (std::isfinite(chi)) chi += 1e-6 * std::max(1.0, std::abs(chi));
    return Interval(clo, chi);
}

} // namespace

void MonotoneFn::validate() const {
    const auto grid = domain_.sample_grid(kValidationGridSize);
    if (detect_direction(fwd_, grid) != dir_)
        throw MonotonicityError("declared direction contradicts sampled values");
}

MonotoneFn MonotoneFn::from_expr(const ExprPtr& raw, const Interval& domain) {
    ExprPtr body = fold(raw);
    check_constant_exponents(body);

    MonotoneFn f;
    f.domain_ = domain;
    f.body_ = body;
    f.fwd_ = [body](double x) { return eval_ast(body, x); };
    const auto grid = domain.sample_grid(kValidationGridSize);
    f.dir_ = detect_direction(f.fwd_, grid);
    f.codomain_ = infer_codomain(f.fwd_, domain, f.dir_);
    f.power_ = power_exponent(body);
    if (auto inv = invert_ast(body)) {
        f.inverse_body_ = *inv;
        ExprPtr ib = *inv;
        f.inv_ = [ib](double y) { return eval_ast(ib, y); };
    }
    return f;
}

MonotoneFn MonotoneFn::from_text(const std::string& text, const Interval& domain) {
    return from_expr(parse(text), domain);
}

MonotoneFn MonotoneFn::from_callable(Interval domain, Interval codomain,
                                     Direction dir,
                                     std::function<double(double)> fwd,
                                     std::function<double(double)> inverse,
                                     std::optional<double> power) {
    MonotoneFn f;
    f.domain_ = domain;
    f.codomain_ = codomain;
    f.dir_ = dir;
    f.fwd_ = std::move(fwd);
    f.inv_ = std::move(inverse);
    f.power_ = power;
    f.validate();
    return f;
}

MonotoneFn MonotoneFn::identity(const Interval& domain) {
    return from_expr(make_var(), domain);
}

MonotoneFn MonotoneFn::power_fn(double exponent, const Interval& domain) {
    return from_expr(make_binary(ExprKind::Pow, make_var(), make_const(exponent)),
                     domain);
}

MonotoneFn MonotoneFn::log_fn(const Interval& domain) {
    return from_expr(make_unary(ExprKind::Log, make_var()), domain);
}

MonotoneFn MonotoneFn::exp_fn(const Interval& domain) {
    return from_expr(make_unary(ExprKind::Exp, make_var()), domain);
}

double MonotoneFn::eval(double x) const {
    if (!domain_.contains(x, 1e-12))
        throw DomainError("evaluation point outside domain");
    return fwd_(x);
}

double MonotoneFn::invert(double y, double tol) const {
    if (!codomain_.contains(y, 1e-9))
        throw RangeError("target value outside codomain");
    if (inv_) return inv_(y);

    // Orient the comparison so increasing/decreasing share one code path.
    const double sign = dir_ == Direction::Increasing ? 1.0 : -1.0;
    auto below = [&](double x) { return sign * (fwd_(x) - y) < 0.0; };

    // Bracket by geometric step doubling from the lower sampling edge.
    double a = domain_.sample_lo();
    double b = a;
    const double hi_cap = domain_.bounded_above() ? domain_.sample_hi() : kInf;
    double step = std::max(1.0, std::abs(a)) * 1e-6;
    bool bracketed = false;
    // the lower edge may already be past the target (decreasing functions)
    if (!below(a)) {
        if (std::abs(fwd_(a) - y) <= tol * std::max(1.0, std::abs(y))) return a;
    }
    for (int i = 0; i < kInvertMaxIter; ++i) {
        b = std::min(a + step, hi_cap);
        if (!below(b)) { bracketed = true; break; }
        if (b >= hi_cap) break;
        step *= 2.0;
    }
    if (!bracketed) {
        if (std::abs(fwd_(b) - y) <= 1e-6 * std::max(1.0, std::abs(y))) return b;
        throw NoConvergence("could not bracket inverse target");
    }

    double lo = a, hi = b;
    for (int i = 0; i < kInvertMaxIter; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double v = fwd_(mid);
        if (std::abs(v - y) <= tol * std::max(1.0, std::abs(y))) return mid;
        if (sign * (v - y) < 0.0) lo = mid;
        else hi = mid;
        if (hi - lo <= tol * std::max(1.0, std::abs(lo))) return 0.5 * (lo + hi);
    }
    return 0.5 * (lo + hi);
}

MonotoneFn MonotoneFn::inverse() const {
    MonotoneFn g;
    g.domain_ = codomain_;
    g.codomain_ = domain_;
    g.dir_ = dir_;
    const MonotoneFn self = *this;
    g.fwd_ = inv_ ? inv_ : [self](double y) { return self.invert(y); };
    g.inv_ = fwd_;
    g.body_ = inverse_body_;
    g.inverse_body_ = body_;
    if (power_ && *power_ != 0.0) g.power_ = 1.0 / *power_;
    return g;
}

MonotoneFn compose(const MonotoneFn& f, const MonotoneFn& g) {
    if (!g.codomain().subset_of(f.domain(), 1e-6))
        throw DomainError("codomain of inner function exceeds domain of outer");

    if (f.body() && g.body())
        return MonotoneFn::from_expr(substitute(f.body(), g.body()), g.domain());

    const MonotoneFn fc = f, gc = g;
    std::function<double(double)> fwd = [fc, gc](double x) { return fc.eval(gc.eval(x)); };
    std::function<double(double)> inv;
    if (f.has_symbolic_inverse() && g.has_symbolic_inverse())
        inv = [fc, gc](double y) { return gc.invert(fc.invert(y)); };
    const Direction dir = f.direction() * g.direction();
    std::optional<double> power;
    if (f.power() && g.power()) power = *f.power() * *g.power();

    const Interval codomain = infer_codomain(fwd, g.domain(), dir);
    return MonotoneFn::from_callable(g.domain(), codomain, dir, std::move(fwd),
                                     std::move(inv), power);
}

namespace {

// Shared scaffold for derived pointwise combinations: validates strict
// monotonicity by sampling and infers direction and codomain.
MonotoneFn derived_fn(const Interval& domain, std::function<double(double)> fwd,
                      ExprPtr body = nullptr) {
    if (body) return MonotoneFn::from_expr(body, domain);
    const auto grid = domain.sample_grid(kValidationGridSize);
    const Direction dir = detect_direction(fwd, grid);
    const Interval codomain = infer_codomain(fwd, domain, dir);
    return MonotoneFn::from_callable(domain, codomain, dir, std::move(fwd));
}

void require_same_domain(const MonotoneFn& f, const MonotoneFn& g) {
    if (!same_interval(f.domain(), g.domain()))
        throw DomainError("operands must share a domain");
}

} // namespace

MonotoneFn pointwise_product(const MonotoneFn& f, const MonotoneFn& g) {
    require_same_domain(f, g);
    if (f.codomain().lo < -1e-9 || g.codomain().lo < -1e-9)
        throw DomainError("pointwise product requires positive-valued factors");
    if (f.direction() != g.direction())
        throw MonotonicityError("pointwise product requires matching directions");
    if (f.power() && g.power())
        return MonotoneFn::power_fn(*f.power() + *g.power(), f.domain());
    if (f.body() && g.body())
        return MonotoneFn::from_expr(make_binary(ExprKind::Mul, f.body(), g.body()),
                                     f.domain());
    const MonotoneFn fc = f, gc = g;
    return derived_fn(f.domain(), [fc, gc](double x) { return fc.eval(x) * gc.eval(x); });
}

MonotoneFn pointwise_sum(const MonotoneFn& f, const MonotoneFn& g) {
    require_same_domain(f, g);
    if (f.direction() != g.direction())
        throw MonotonicityError("pointwise sum requires matching directions");
    if (f.body() && g.body())
        return MonotoneFn::from_expr(make_binary(ExprKind::Add, f.body(), g.body()),
                                     f.domain());
    const MonotoneFn fc = f, gc = g;
    return derived_fn(f.domain(), [fc, gc](double x) { return fc.eval(x) + gc.eval(x); });
}

MonotoneFn pointwise_quotient(const MonotoneFn& f, const MonotoneFn& g) {
    require_same_domain(f, g);
    if (f.body() && g.body())
        return MonotoneFn::from_expr(make_binary(ExprKind::Div, f.body(), g.body()),
                                     f.domain());
    const MonotoneFn fc = f, gc = g;
    return derived_fn(f.domain(), [fc, gc](double x) { return fc.eval(x) / gc.eval(x); });
}

MonotoneFn pointwise_difference(const MonotoneFn& f, const MonotoneFn& g) {
    require_same_domain(f, g);
    if (f.body() && g.body())
        return MonotoneFn::from_expr(make_binary(ExprKind::Sub, f.body(), g.body()),
                                     f.domain());
    const MonotoneFn fc = f, gc = g;
    return derived_fn(f.domain(), [fc, gc](double x) { return fc.eval(x) - gc.eval(x); });
}

MonotoneFn iterate(const MonotoneFn& g, int n) {
    if (!same_interval(g.domain(), g.codomain()))
        throw DomainError("iteration requires domain = codomain");
    if (n == 0) return MonotoneFn::identity(g.domain());
    const MonotoneFn step = n > 0 ? g : g.inverse();
    MonotoneFn acc = step;
    for (int k = 1; k < std::abs(n); ++k) acc = compose(step, acc);
    return acc;
}

GeneratorClass classify_generator(const MonotoneFn& g,
                                  const std::vector<double>& grid) {
    bool above = true, below = true;
    int prev_sign = 0;
    for (double x : grid) {
        const double d = g.eval(x) - x;
        const double tol = 1e-12 * std::max(1.0, std::abs(x));
        if (std::abs(d) <= tol) return GeneratorClass::HasInteriorFixpoint;
        const int s = d > 0 ? 1 : -1;
        if (prev_sign != 0 && s != prev_sign)
            return GeneratorClass::HasInteriorFixpoint;
        prev_sign = s;
        if (d <= tol) above = false;
        if (!(d < -tol && g.eval(x) > 1.0)) below = false;
    }
    if (above) return GeneratorClass::Above;
    if (below) return GeneratorClass::Below;
    return GeneratorClass::Mixed;
}

GeneratorClass classify_generator(const MonotoneFn& g) {
    // the Above/Below dichotomy lives on (1, inf); clip domains that reach
    // below 1 (e.g. guard-padded codomains) to that window
    Interval window = g.domain();
    if (window.lo < 1.0 && (!window.bounded_above() || window.hi > 1.0))
        window = Interval(1.0, window.hi, true, window.hi_open);
    return classify_generator(g, window.sample_grid(kValidationGridSize));
}

std::vector<double> fixpoint_scan(const MonotoneFn& g,
                                  const std::vector<double>& grid) {
    std::vector<double> roots;
    auto diff = [&](double x) { return g.eval(x) - x; };
    double px = grid.empty() ? 0.0 : grid.front();
    double pd = grid.empty() ? 0.0 : diff(px);
    auto push_root = [&](double r) {
        for (double existing : roots)
            if (nearly_equal(existing, r, 1e-6)) return;
        roots.push_back(r);
    };
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        const double d = i == 0 ? pd : diff(x);
        const double tol = 1e-9 * std::max(1.0, std::abs(x));
        const Interval& dom = g.domain();
        const bool interior =
            (!dom.lo_open || x > dom.lo + 1e-6 * std::max(1.0, std::abs(dom.lo))) &&
            (!dom.bounded_above() || !dom.hi_open ||
             x < dom.hi - 1e-6 * std::max(1.0, std::abs(dom.hi)));
        if (std::abs(d) <= tol) {
            if (interior) push_root(x);
        } else if (i > 0 && pd * d < 0.0) {
            double lo = px, hi = x, dlo = pd;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double dm = diff(mid);
                if (dlo * dm <= 0.0) hi = mid;
                else { lo = mid; dlo = dm; }
                if (hi - lo <= 1e-12 * std::max(1.0, std::abs(lo))) break;
            }
            push_root(0.5 * (lo + hi));
        }
        px = x;
        pd = d;
    }
    return roots;
}

} // namespace itermean
