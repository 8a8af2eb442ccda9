#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "uconvex/generator.hpp"

namespace uconvex {

/// Delta: 0 < eps < 2r. DeltaPhi: 0 < eps and phi(eps) <= 2 phi(r).
enum class DeltaDomain { Delta, DeltaPhi };

/// Throws InvalidArgument if (r, eps) is outside the domain.
void validate_query(const Generator& g, double r, double eps, DeltaDomain domain = DeltaDomain::Delta);

/// r - phi^{-1}(phi(r) - phi(eps/2)), in cancellation-free form for the power and exp families.
double delta_closed_form(const Generator& g, double r, double eps);

/// Naive power-family formula r - (r^p - (eps/2)^p)^{1/p}.
double delta_lp(double p, double r, double eps);

struct ImplicitDelta {
  double delta;
  double residual;  // |lambda(r - delta, eps/2) - 2 phi(r)|
};

/**
 * Solves phi(u + eps/2) + phi(|u - eps/2|) = 2 phi(r) for u = r - delta by
 * bisection on [0, r], then a Newton polish away from the kink u = eps/2.
 * Throws RouteUnavailable if phi is not strictly convex on [0, r + eps/2].
 */
ImplicitDelta delta_implicit(const Generator& g, double r, double eps);

using ModulusFn = std::function<double(double r, double eps)>;

/**
 * Modulus of psi(p(.)) from a modulus `base` of p:
 * r - psi(psi^{-1}(r) - base(psi^{-1}(r), psi^{-1}(eps))).
 * Throws RouteUnavailable if psi fails the subadditivity audit.
 */
double delta_psi_transform(const ModulusFn& base, const Generator& psi, double r, double eps);

// phi(t) = e^t - 1 on the plane with unit weights.

/// Root x in [0, r] of phi(x) - phi(r - x) = phi(r) - phi(eps) (stable closed form).
double exp_split_point(double r, double eps);
/// Same root by bisection (independent route).
double exp_split_point_bisect(double r, double eps);
/// Exact modulus on DeltaPhi built from the split point.
double exp_plane_delta0(double r, double eps);
/// delta0(r, eps / 4), a modulus on Delta.
double exp_plane_modulus(double r, double eps);

enum class Method { ClosedForm, Implicit, ExpPlane, Psi, Lp, Empirical };

const char* to_string(Method m);
Method method_from_name(std::string_view name);

struct ModulusRow {
  double r;
  double eps;
  Method method;
  double delta;
  double residual;  // NaN when the method is not root-solved
};

struct ModulusTable {
  std::vector<ModulusRow> rows;
};

}  // namespace uconvex
