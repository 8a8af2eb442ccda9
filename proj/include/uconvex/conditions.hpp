#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uconvex/generator.hpp"
#include "uconvex/measure.hpp"
#include "uconvex/report.hpp"

namespace uconvex {

enum class Spacing { Linear, Log };

/// One-dimensional sample grid on [lo, hi]; checks use pairs drawn from it.
struct Grid2 {
  double lo = 1e-4;
  double hi = 30.0;
  std::size_t n = 120;
  Spacing spacing = Spacing::Log;

  void validate() const;
  std::vector<double> points() const;
  std::string describe() const;
  /// "lo:hi:n:log" or "lo:hi:n:lin".
  static Grid2 parse(std::string_view text);
};

/// The default grid with hi lowered to T_max / 2 so that r + s stays in range.
Grid2 default_grid(const Generator& g);
Grid2 fit_grid(Grid2 grid, const Generator& g);

/// Every inequality the audit knows. Each compares a "greater" and a "lesser" side.
enum class Condition {
  Superquadratic,      // phi(r+s) + phi(|r-s|) >= 2 phi(r) + 2 phi(s)
  Subquadratic,        // reversed
  Convex,              // (phi(r) + phi(s)) / 2 >= phi((r+s)/2)
  StrictlyConvex,      // same, with a relative floor 1e-12 at r != s
  GeometricConvex,     // sqrt(phi(s) phi(t)) >= phi(sqrt(s t)), plus t phi'/phi increasing
  RatioSuperadditive,  // R(r+s) >= R(r) + R(s), R = phi'/phi''
  RatioSubadditive,    // reversed
  FConcave,            // F(midpoint) >= mean of F, F(r,s) = phi(phi^-1(r) + phi^-1(s))
  GConvex,             // G(r,s) = phi(|phi^-1(r) - phi^-1(s)|)
  HConvex,             // H = F + G
  HSubadditive,        // H(P) + H(Q) >= H(P + Q)
  HHessianSufficient,  // three derivative inequalities implying H convex
  AbsSumIdentity,      // phi(|s|+|t|) + phi(||s|-|t||) = phi(|s+t|) + phi(|s-t|)
  Subadditive,         // phi(r) + phi(s) >= phi(r+s)
};

const char* condition_name(Condition c);
Condition condition_from_name(std::string_view name);

struct Sides {
  double greater;
  double lesser;
};

/**
 * Both sides of condition c at one point: (r, s) for pair conditions, signed
 * (s, t) for the identity, and (P1, P2, Q1, Q2) in phi-value coordinates for
 * the F/G/H conditions. Throws DomainError/OverflowError when undefined.
 */
Sides evaluate_condition(Condition c, const Generator& g, std::span<const double> point);

/// greater - lesser at the report's witness.
double reevaluate_margin(const Generator& g, const ConditionReport& report);

/// Points the grid-based check of c visits.
std::vector<std::vector<double>> sample_points(Condition c, const Generator& g, const Grid2& grid);

/// Checks c over explicit points; undefined points are excluded and counted.
ConditionReport check_points(Condition c, const Generator& g, const std::vector<std::vector<double>>& points,
                             std::string domain = "explicit points");
ConditionReport check(Condition c, const Generator& g, const Grid2& grid);

inline ConditionReport check_superquadratic(const Generator& g, const Grid2& grid) { return check(Condition::Superquadratic, g, grid); }
inline ConditionReport check_subquadratic(const Generator& g, const Grid2& grid) { return check(Condition::Subquadratic, g, grid); }
inline ConditionReport check_convex(const Generator& g, const Grid2& grid) { return check(Condition::Convex, g, grid); }
inline ConditionReport check_strictly_convex(const Generator& g, const Grid2& grid) { return check(Condition::StrictlyConvex, g, grid); }
inline ConditionReport check_geometric_convex(const Generator& g, const Grid2& grid) { return check(Condition::GeometricConvex, g, grid); }
inline ConditionReport check_ratio_superadditive(const Generator& g, const Grid2& grid) { return check(Condition::RatioSuperadditive, g, grid); }
inline ConditionReport check_ratio_subadditive(const Generator& g, const Grid2& grid) { return check(Condition::RatioSubadditive, g, grid); }
inline ConditionReport check_F_concave(const Generator& g, const Grid2& grid) { return check(Condition::FConcave, g, grid); }
inline ConditionReport check_G_convex(const Generator& g, const Grid2& grid) { return check(Condition::GConvex, g, grid); }
inline ConditionReport check_H_convex(const Generator& g, const Grid2& grid) { return check(Condition::HConvex, g, grid); }
inline ConditionReport check_H_subadditive(const Generator& g, const Grid2& grid) { return check(Condition::HSubadditive, g, grid); }
inline ConditionReport check_H_hessian_sufficient(const Generator& g, const Grid2& grid) { return check(Condition::HHessianSufficient, g, grid); }
inline ConditionReport check_abs_sum_identity(const Generator& g, const Grid2& grid) { return check(Condition::AbsSumIdentity, g, grid); }
inline ConditionReport check_subadditive(const Generator& g, const Grid2& grid) { return check(Condition::Subadditive, g, grid); }

/// F(r,s), G(r,s), H(r,s) on phi-value coordinates.
double F_value(const Generator& g, double r, double s);
double G_value(const Generator& g, double r, double s);
double H_value(const Generator& g, double r, double s);

enum class ParanormRoute { FConcave, ConvexGeometric };
enum class UcRoute { Superquadratic, HCondition, StrictConvexFinite, ExpPlaneExact };

const char* to_string(ParanormRoute r);
const char* to_string(UcRoute r);

/// Which sufficient conditions hold on the grid, and the evidence for them.
struct Certificate {
  std::string generator;
  std::vector<double> weights;
  CaseFlags flags;
  std::vector<ParanormRoute> paranorm_routes;
  std::vector<UcRoute> uc_routes;
  std::vector<ConditionReport> evidence;
  std::vector<std::string> notes;

  bool has(ParanormRoute r) const;
  bool has(UcRoute r) const;
  const ConditionReport* find(std::string_view condition) const;
};

Certificate certify(const Generator& g, const MeasureSpace& m, const Grid2& grid);
inline Certificate certify(const Generator& g, const MeasureSpace& m) { return certify(g, m, default_grid(g)); }

}  // namespace uconvex
