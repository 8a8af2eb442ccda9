#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "uconvex/modulus.hpp"
#include "uconvex/paranorm.hpp"

namespace uconvex {

struct OracleResult {
  double r = 0.0;
  double eps = 0.0;
  double worst_midpoint = 0.0;  // largest p((x + y) / 2) found
  double delta_hat = 0.0;       // r - worst_midpoint
  SimpleFunction x, y;          // pair attaining worst_midpoint
  std::size_t samples = 0;
  std::size_t feasible = 0;
  std::uint64_t seed = 0;
  bool low_coverage = false;  // fewer than 100 feasible random pairs
};

/// Extra detail of the e^t - 1 arc sweep.
struct ArcResult {
  OracleResult result;
  double rho = 0.0, alpha = 0.0;
  double s_lo = 1.0, s_hi = 0.0;   // parameter range of the arc inside [1, rho - 1]^2
  double s_best = 0.0;             // argmax of the sweep
  double f_lo = 0.0, f_hi = 0.0;   // f at both arc endpoints
  double f_critical = 0.0;         // f at (2 rho / (alpha + 2), alpha rho / (alpha + 2))
  bool argmax_at_endpoint = false;
  bool critical_is_strict_min = false;
};

/// f(s, t) on the arc t/s + (rho - s)/(rho - t) = alpha, rho = e^r + 1, alpha = e^eps + 1.
double arc_t(double rho, double alpha, double s);
double arc_f(double rho, double s, double t);

/**
 * Dense sweep (4000 points plus golden-section refinement) of the midpoint
 * norm log(f - 1) along the arc. Nothing about the location of the maximum
 * is assumed.
 */
ArcResult arc_max_exp(double r, double eps);

struct SearchOptions {
  std::size_t batch = 512;
  bool refine = true;
  bool sphere_only = false;  // fast mode: radii fixed at r
};

/// Seeded random search for the worst midpoint under p(x), p(y) <= r and p(x - y) >= eps.
OracleResult empirical_modulus(const ParanormContext& ctx, double r, double eps, std::size_t samples,
                               std::uint64_t seed, const SearchOptions& options = {});

struct LowerBoundRow {
  double r, eps;
  double delta_theory;
  double delta_empirical;
  bool violation;
  OracleResult oracle;
};

struct LowerBoundReport {
  std::vector<LowerBoundRow> rows;
  std::size_t violations = 0;
  bool any_low_coverage = false;
};

/// Compares delta_theory(r, eps) with the empirical modulus on every (r, eps) pair.
LowerBoundReport check_lower_bound(const ParanormContext& ctx, const ModulusFn& delta_theory,
                                   const std::vector<std::pair<double, double>>& points, std::size_t samples,
                                   std::uint64_t seed);

}  // namespace uconvex
