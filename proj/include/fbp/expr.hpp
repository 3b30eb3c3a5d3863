#ifndef FBP_EXPR_HPP
#define FBP_EXPR_HPP

#include <memory>
#include <string>
#include <string_view>

#include "fbp/core.hpp"

// Closed-form expressions of one variable, used to specify boundary data
// f(t), initial data phi(x) and manufactured fields from configuration text.
//
// Grammar (documented in docs/config.md):
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?          -- right-associative
//   atom   := number | 'pi' | <variable> | fn '(' args ')' | '(' expr ')'
// Functions: sin cos exp cosh sinh tanh sqrt abs pow(x,y)
// and piecewise(threshold, left, right), which evaluates `left` for
// variable <= threshold and `right` otherwise. The threshold must be a
// constant expression.

namespace fbp {

namespace detail {
struct ExprNode;
}

class Expr {
  public:
    Expr() = default;

    /// Parse `text` against the given variable name. Any other identifier
    /// (besides `pi` and the builtin functions) raises UnknownIdentifier.
    static Expr parse(std::string_view text, std::string_view variable);

    // Programmatic builders; all produce the same immutable node trees the
    // parser does, so rendered output is re-parseable.
    static Expr constant(double c);
    static Expr variable(std::string name = "t");
    static Expr add(Expr a, Expr b);
    static Expr sub(Expr a, Expr b);
    static Expr mul(Expr a, Expr b);
    static Expr div(Expr a, Expr b);
    static Expr pow(Expr base, Expr exponent);
    static Expr neg(Expr a);
    static Expr call(const std::string& fn, Expr arg);
    static Expr piecewise(double threshold, Expr left, Expr right);

    /// Evaluate at a point. Pure and reentrant. Division by zero, sqrt of a
    /// negative and NaN-producing powers raise DomainError; overflow to
    /// +-inf propagates silently (the solver reports it as divergence).
    double eval(double x) const;

    /// Re-parseable text form; parse(render(), var) evaluates identically.
    std::string render() const;

    /// Replace the variable with `inner` (function composition). The result
    /// uses `inner`'s variable.
    Expr compose(const Expr& inner) const;

    bool depends_on_variable() const;
    bool empty() const { return root_ == nullptr; }
    const std::string& variable_name() const { return var_name_; }

  private:
    std::shared_ptr<const detail::ExprNode> root_;
    std::string var_name_ = "t";

    Expr(std::shared_ptr<const detail::ExprNode> r, std::string v)
        : root_(std::move(r)), var_name_(std::move(v)) {}
};

enum class DiffSide { central, right, left };

/// Finite-difference derivative of order 1 or 2 at x with step h. The
/// one-sided variants never evaluate past x (useful at domain endpoints);
/// both are second-order accurate.
double numeric_derivative(const Expr& e, double x, int order, double h,
                          DiffSide side = DiffSide::central);

}  // namespace fbp

#endif
