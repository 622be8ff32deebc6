#include "itermean/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace itermean {

ExprPtr make_const(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Const;
    e->value = v;
    return e;
}

ExprPtr make_var() {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Var;
    return e;
}

ExprPtr make_unary(ExprKind k, ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->a = std::move(a);
    return e;
}

ExprPtr make_binary(ExprKind k, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}

int var_count(const ExprPtr& e) {
    if (!e) return 0;
    if (e->kind == ExprKind::Var) return 1;
    return var_count(e->a) + var_count(e->b);
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    if (a->kind == ExprKind::Const) return a->value == b->value;
    return structurally_equal(a->a, b->a) && structurally_equal(a->b, b->b);
}

double eval_ast(const ExprPtr& e, double x) {
    switch (e->kind) {
    case ExprKind::Const: return e->value;
    case ExprKind::Var: return x;
    case ExprKind::Add: return eval_ast(e->a, x) + eval_ast(e->b, x);
    case ExprKind::Sub: return eval_ast(e->a, x) - eval_ast(e->b, x);
    case ExprKind::Mul: return eval_ast(e->a, x) * eval_ast(e->b, x);
    case ExprKind::Div: return eval_ast(e->a, x) / eval_ast(e->b, x);
    case ExprKind::Pow: return std::pow(eval_ast(e->a, x), eval_ast(e->b, x));
    case ExprKind::Neg: return -eval_ast(e->a, x);
    case ExprKind::Exp: return std::exp(eval_ast(e->a, x));
    case ExprKind::Log: return std::log(eval_ast(e->a, x));
    case ExprKind::Sqrt: return std::sqrt(eval_ast(e->a, x));
    }
    return 0.0;
}

namespace {

bool is_const(const ExprPtr& e, double v) {
    return e && e->kind == ExprKind::Const && e->value == v;
}

} // namespace

ExprPtr fold(const ExprPtr& e) {
    if (!e) return e;
    if (e->kind == ExprKind::Const || e->kind == ExprKind::Var) return e;

    ExprPtr a = fold(e->a);
    ExprPtr b = fold(e->b);

    // sqrt(u) -> u^(1/2) before the remaining rules so Pow rules see it.
    if (e->kind == ExprKind::Sqrt)
        return fold(make_binary(ExprKind::Pow, a, make_const(0.5)));

    const bool ca = a && a->kind == ExprKind::Const;
    const bool cb = b && b->kind == ExprKind::Const;

    if (ca && (!e->b || cb)) {
        const double av = a->value;
        const double bv = cb ? b->value : 0.0;
        switch (e->kind) {
        case ExprKind::Add: return make_const(av + bv);
        case ExprKind::Sub: return make_const(av - bv);
        case ExprKind::Mul: return make_const(av * bv);
        case ExprKind::Div: return make_const(av / bv);
        case ExprKind::Pow: return make_const(std::pow(av, bv));
        case ExprKind::Neg: return make_const(-av);
        case ExprKind::Exp: return make_const(std::exp(av));
        case ExprKind::Log: return make_const(std::log(av));
        default: break;
        }
    }

    switch (e->kind) {
    case ExprKind::Pow:
        if (is_const(b, 1.0)) return a;
        // (u^p)^q -> u^(p*q) for constant p, q
        if (cb && a->kind == ExprKind::Pow && a->b->kind == ExprKind::Const)
            return fold(make_binary(ExprKind::Pow, a->a,
                                    make_const(a->b->value * b->value)));
        break;
    case ExprKind::Mul:
        if (is_const(a, 1.0)) return b;
        if (is_const(b, 1.0)) return a;
        break;
    case ExprKind::Div:
        if (is_const(b, 1.0)) return a;
        break;
    case ExprKind::Add:
        if (is_const(a, 0.0)) return b;
        if (is_const(b, 0.0)) return a;
        break;
    case ExprKind::Sub:
        if (is_const(b, 0.0)) return a;
        break;
    case ExprKind::Exp:
        if (a->kind == ExprKind::Log) return a->a;
        break;
    case ExprKind::Log:
        if (a->kind == ExprKind::Exp) return a->a;
        break;
    case ExprKind::Neg:
        if (a->kind == ExprKind::Neg) return a->a;
        break;
    default: break;
    }

    if (a == e->a && b == e->b) return e;
    return e->b ? make_binary(e->kind, a, b) : make_unary(e->kind, a);
}

ExprPtr substitute(const ExprPtr& outer, const ExprPtr& inner) {
    if (!outer) return outer;
    if (outer->kind == ExprKind::Var) return inner;
    if (outer->kind == ExprKind::Const) return outer;
    ExprPtr a = substitute(outer->a, inner);
    ExprPtr b = outer->b ? substitute(outer->b, inner) : nullptr;
    return fold(b ? make_binary(outer->kind, a, b) : make_unary(outer->kind, a));
}

namespace {

// Unwinds node(expr) = y one level at a time; `acc` is the expression for y.
std::optional<ExprPtr> invert_onto(const ExprPtr& e, ExprPtr acc) {
    switch (e->kind) {
    case ExprKind::Var:
        return acc;
    case ExprKind::Const:
        return std::nullopt;
    case ExprKind::Neg:
        return invert_onto(e->a, make_unary(ExprKind::Neg, acc));
    case ExprKind::Exp:
        return invert_onto(e->a, make_unary(ExprKind::Log, acc));
    case ExprKind::Log:
        return invert_onto(e->a, make_unary(ExprKind::Exp, acc));
    case ExprKind::Sqrt:
        return invert_onto(e->a, make_binary(ExprKind::Pow, acc, make_const(2.0)));
    case ExprKind::Add:
        if (e->b->kind == ExprKind::Const)
            return invert_onto(e->a, make_binary(ExprKind::Sub, acc, e->b));
        if (e->a->kind == ExprKind::Const)
            return invert_onto(e->b, make_binary(ExprKind::Sub, acc, e->a));
        return std::nullopt;
    case ExprKind::Sub:
        if (e->b->kind == ExprKind::Const)
            return invert_onto(e->a, make_binary(ExprKind::Add, acc, e->b));
        if (e->a->kind == ExprKind::Const)
            return invert_onto(e->b, make_binary(ExprKind::Sub, e->a, acc));
        return std::nullopt;
    case ExprKind::Mul:
        if (e->b->kind == ExprKind::Const && e->b->value != 0.0)
            return invert_onto(e->a, make_binary(ExprKind::Div, acc, e->b));
        if (e->a->kind == ExprKind::Const && e->a->value != 0.0)
            return invert_onto(e->b, make_binary(ExprKind::Div, acc, e->a));
        return std::nullopt;
    case ExprKind::Div:
        if (e->b->kind == ExprKind::Const && e->b->value != 0.0)
            return invert_onto(e->a, make_binary(ExprKind::Mul, acc, e->b));
        if (e->a->kind == ExprKind::Const)
            return invert_onto(e->b, make_binary(ExprKind::Div, e->a, acc));
        return std::nullopt;
    case ExprKind::Pow:
        if (e->b->kind == ExprKind::Const && e->b->value != 0.0)
            return invert_onto(
                e->a, make_binary(ExprKind::Pow, acc, make_const(1.0 / e->b->value)));
        return std::nullopt;
    }
    return std::nullopt;
}

} // namespace

std::optional<ExprPtr> invert_ast(const ExprPtr& e) {
    ExprPtr f = fold(e);
    if (var_count(f) != 1) return std::nullopt;
    auto inv = invert_onto(f, make_var());
    if (!inv) return std::nullopt;
    return fold(*inv);
}

std::optional<double> power_exponent(const ExprPtr& e) {
    ExprPtr f = fold(e);
    if (f->kind == ExprKind::Var) return 1.0;
    if (f->kind == ExprKind::Pow && f->a->kind == ExprKind::Var &&
        f->b->kind == ExprKind::Const)
        return f->b->value;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    ExprPtr run() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError(pos_, "empty input", "expression");
        ExprPtr e = expr();
        skip_ws();
        if (pos_ < s_.size())
            throw ParseError(pos_, "unexpected trailing input", "end of input");
        return fold(e);
    }

private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool peek_char(char c) {
        skip_ws();
        return pos_ < s_.size() && s_[pos_] == c;
    }

    bool accept_char(char c) {
        if (!peek_char(c)) return false;
        ++pos_;
        return true;
    }

    void expect_char(char c) {
        if (!accept_char(c))
            throw ParseError(pos_, std::string("expected '") + c + "'",
                             std::string(1, c));
    }

    ExprPtr expr() {
        ExprPtr e = term();
        for (;;) {
            if (accept_char('+')) e = make_binary(ExprKind::Add, e, term());
            else if (accept_char('-')) e = make_binary(ExprKind::Sub, e, term());
            else return e;
        }
    }

    ExprPtr term() {
        ExprPtr e = factor();
        for (;;) {
            if (accept_char('*')) e = make_binary(ExprKind::Mul, e, factor());
            else if (accept_char('/')) e = make_binary(ExprKind::Div, e, factor());
            else return e;
        }
    }

    // right-associative
    ExprPtr factor() {
        ExprPtr e = base();
        if (accept_char('^')) return make_binary(ExprKind::Pow, e, factor());
        return e;
    }

    ExprPtr base() {
        skip_ws();
        if (pos_ >= s_.size())
            throw ParseError(pos_, "unexpected end of input", "number, x, (, -, func");
        const char c = s_[pos_];
        if (c == '-') {
            ++pos_;
            return make_unary(ExprKind::Neg, base());
        }
        if (c == '(') {
            ++pos_;
            ExprPtr e = expr();
            expect_char(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return ident();
        throw ParseError(pos_, "unexpected character", "number, x, (, -, func");
    }

    ExprPtr number() {
        const char* start = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(start, &end);
        if (end == start) throw ParseError(pos_, "malformed number", "number");
        // reject exponent-less garbage like "1.2.3" by stopping where strtod did
        pos_ += static_cast<std::size_t>(end - start);
        return make_const(v);
    }

    ExprPtr ident() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() &&
               std::isalpha(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        const std::string name = s_.substr(start, pos_ - start);
        if (name == "x") return make_var();
        ExprKind k;
        if (name == "exp") k = ExprKind::Exp;
        else if (name == "log") k = ExprKind::Log;
        else if (name == "sqrt") k = ExprKind::Sqrt;
        else throw ParseError(start, "unknown identifier '" + name + "'",
                              "x, exp, log, sqrt");
        expect_char('(');
        ExprPtr arg = expr();
        expect_char(')');
        return make_unary(k, arg);
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

int precedence(ExprKind k) {
    switch (k) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::Pow: return 4;
    default: return 5; // atoms and function calls
    }
}

std::string render_const(double v) {
    char buf[40];
    // shortest form that round-trips through strtod
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

void render(const ExprPtr& e, int parent_prec, bool rhs, std::string& out) {
    const int p = precedence(e->kind);
    // Pow is right-associative; -/÷ are left-associative, so a right child at
    // equal precedence still needs parentheses.
    bool need_parens = p < parent_prec || (p == parent_prec && rhs && p != 4 && p != 5);
    if (e->kind == ExprKind::Const && e->value < 0.0) need_parens = parent_prec > 1;

    if (need_parens) out += '(';
    switch (e->kind) {
    case ExprKind::Const: out += render_const(e->value); break;
    case ExprKind::Var: out += 'x'; break;
    case ExprKind::Neg:
        // the grammar's unary-minus operand is a `base`, so anything that is
        // not an atom must be parenthesized
        out += '-';
        render(e->a, 5, true, out);
        break;
    case ExprKind::Exp:
    case ExprKind::Log:
    case ExprKind::Sqrt:
        out += (e->kind == ExprKind::Exp ? "exp" : e->kind == ExprKind::Log ? "log" : "sqrt");
        out += '(';
        render(e->a, 0, false, out);
        out += ')';
        break;
    default: {
        const char op = e->kind == ExprKind::Add ? '+'
                      : e->kind == ExprKind::Sub ? '-'
                      : e->kind == ExprKind::Mul ? '*'
                      : e->kind == ExprKind::Div ? '/'
                                                 : '^';
        // the left operand of ^ is a `base` in the grammar: atoms only
        render(e->a, e->kind == ExprKind::Pow ? 5 : p, false, out);
        out += op;
        render(e->b, p, true, out);
        break;
    }
    }
    if (need_parens) out += ')';
}

} // namespace

ExprPtr parse(const std::string& text) { return Parser(text).run(); }

std::string unparse(const ExprPtr& e) {
    std::string out;
    render(fold(e), 0, false, out);
    return out;
}

} // namespace itermean
