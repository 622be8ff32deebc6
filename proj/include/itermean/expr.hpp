#ifndef ITERMEAN_EXPR_HPP
#define ITERMEAN_EXPR_HPP

#include <memory>
#include <optional>
#include <string>

#include "itermean/errors.hpp"

namespace itermean {

// Sqrt is accepted by the grammar but normalized to Pow(., 1/2) when the
// tree is folded, so it never survives into a folded AST.
enum class ExprKind { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Exp, Log, Sqrt };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree over a single free variable x.
struct Expr {
    ExprKind kind;
    double value = 0.0; // Const payload
    ExprPtr a, b;
};

ExprPtr make_const(double v);
ExprPtr make_var();
ExprPtr make_unary(ExprKind k, ExprPtr a);
ExprPtr make_binary(ExprKind k, ExprPtr a, ExprPtr b);

/// Parses the DSL grammar (precedence ^ > unary minus > * / > + -, with ^
/// right-associative) and constant-folds the result.
ExprPtr parse(const std::string& text);

/// Constant folding and local simplification (pow-of-pow collapse, exp/log
/// cancellation, sqrt normalization). Idempotent.
ExprPtr fold(const ExprPtr& e);

double eval_ast(const ExprPtr& e, double x);

/// Canonical text; parse(unparse(e)) is structurally equal to fold(e).
std::string unparse(const ExprPtr& e);

/// Substitutes `inner` for every occurrence of the free variable (symbolic
/// composition outer o inner), then folds.
ExprPtr substitute(const ExprPtr& outer, const ExprPtr& inner);

/// Symbolic inverse where the variable occurs exactly once and every node on
/// the path is invertible (powers with constant exponent, affine maps, exp,
/// log, and compositions thereof). Empty on failure.
std::optional<ExprPtr> invert_ast(const ExprPtr& e);

/// Exponent a when the folded tree is exactly x^a (Var counts as a=1).
std::optional<double> power_exponent(const ExprPtr& e);

int var_count(const ExprPtr& e);
bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

} // namespace itermean

#endif
