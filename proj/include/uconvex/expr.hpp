#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

namespace uconvex {

/// Node kinds of a one-variable real expression in `t`.
enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Exp, Log, Neg };

/**
 * Immutable expression tree in the single variable `t`.
 *
 * Nodes are shared, so copies are cheap and the type is safe to use from
 * several threads at once. The exponent of a `Pow` node is always a `Const`
 * child, which keeps symbolic differentiation closed-form; general powers
 * f^g can be written as exp(g*log(f)).
 */
class Expr {
 public:
  static Expr constant(double value);
  static Expr var();
  static Expr add(Expr lhs, Expr rhs);
  static Expr sub(Expr lhs, Expr rhs);
  static Expr mul(Expr lhs, Expr rhs);
  static Expr div(Expr lhs, Expr rhs);
  /// Throws InvalidArgument if `exponent` depends on `t`.
  static Expr pow(Expr base, Expr exponent);
  static Expr pow(Expr base, double exponent);
  static Expr exp(Expr arg);
  static Expr log(Expr arg);
  static Expr neg(Expr arg);

  Op op() const noexcept;
  /// Value of a `Const` node; 0 for every other kind.
  double value() const noexcept;
  std::size_t arity() const noexcept;
  const Expr& child(std::size_t i) const;

  bool is_constant() const noexcept { return op() == Op::Const; }
  bool depends_on_t() const noexcept;
  std::size_t node_count() const noexcept;

  /// Structural equality (constants compared with ==).
  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/**
 * Parses infix text with + - * / ^, parentheses, exp(.), log(.), real
 * literals and the variable t. A unary minus applied directly to a literal
 * folds into a negative constant. Throws ParseError.
 */
Expr parse(std::string_view source);

/// Canonical fully parenthesised form; literals use 17 significant digits.
std::string to_string(const Expr& e);

/// Evaluates at `t`; throws DomainError naming the failing subexpression.
double eval(const Expr& e, double t);

/// Symbolic d/dt, returned in simplified form.
Expr differentiate(const Expr& e);

/// Constant folding plus removal of neutral/absorbing elements.
Expr simplify(const Expr& e);

}  // namespace uconvex
