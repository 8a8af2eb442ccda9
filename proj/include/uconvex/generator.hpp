#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "uconvex/expr.hpp"

namespace uconvex {

/// Closed-form generator families with exact derivatives.
struct BuiltinFamily {
  enum class Kind { Power, ExpMinusOne, PowerTimesExp, CubicRational };

  Kind kind = Kind::Power;
  double p = 1.0;
  double a = 2.718281828459045;

  static BuiltinFamily power(double p);
  static BuiltinFamily exp_minus_one(double a);
  static BuiltinFamily power_times_exp(double p, double a);
  /// t^p / (t + 1); p > 1 so that the map is onto [0, inf).
  static BuiltinFamily cubic_rational(double p);
};

/**
 * Increasing bijection phi of [0, inf) with phi(0) = 0.
 *
 * Construction verifies phi(0) = 0 and strict monotonicity on a 200-point
 * log grid up to T_max. That is a grid audit, not a proof.
 */
class Generator {
 public:
  static Generator make(const BuiltinFamily& family);
  static Generator make(const Expr& phi, std::string name = {});
  /// "power:p=2", "exp:a=2.7", "powexp:p=1,a=2", "cubicrational:p=3", "expr:<text>".
  static Generator from_spec(std::string_view spec);

  const std::string& name() const noexcept { return name_; }
  double value(double t) const;
  double deriv1(double t) const;
  double deriv2(double t) const;
  /// phi^{-1}(y); closed form when available, else bracketed Newton.
  double inverse(double y) const;
  /// Always the bracketed solver, even when a closed form exists.
  double inverse_numeric(double y) const;

  /// Largest argument where phi stays below the overflow guard.
  double t_max() const noexcept { return t_max_; }
  double phi_max() const noexcept { return phi_max_; }

  const Expr& phi_expr() const noexcept { return phi_; }
  const Expr& d1_expr() const noexcept { return d1_; }
  const Expr& d2_expr() const noexcept { return d2_; }
  const std::optional<BuiltinFamily>& family() const noexcept { return family_; }
  bool has_closed_form_inverse() const noexcept;
  /// phi(t) = e^t - 1 exactly (builtin with a = e or the expression exp(t)-1).
  bool is_natural_exp_minus_one() const;

 private:
  Generator() = default;
  void finish_construction();

  std::string name_;
  Expr phi_ = Expr::var();
  Expr d1_ = Expr::var();
  Expr d2_ = Expr::var();
  std::optional<BuiltinFamily> family_;
  double c_ = 0.0;  // ln a for the exponential families
  double t_max_ = 0.0;
  double phi_max_ = 0.0;
};

}  // namespace uconvex
