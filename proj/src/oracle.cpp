#include "uconvex/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uconvex/error.hpp"
#include "uconvex/format.hpp"
#include "uconvex/parallel.hpp"
#include "uconvex/rng.hpp"

namespace uconvex {

// ---------------------------------------------------------------------------
// Arc sweep for e^t - 1 on the plane

double arc_t(double rho, double alpha, double s) {
  // Smaller root of t^2 - (rho + alpha s) t + s (rho (alpha - 1) + s) = 0, as 2c / (b + sqrt(disc)).
  const double b = rho + alpha * s;
  const double c = s * (rho * (alpha - 1.0) + s);
  const double d = rho - (alpha - 2.0) * s;
  const double disc = d * d + 4.0 * (alpha - 2.0) * s * s;
  return 2.0 * c / (b + std::sqrt(disc));
}

double arc_f(double rho, double s, double t) { return std::sqrt(s * t) + std::sqrt((rho - s) * (rho - t)); }

namespace {

constexpr std::size_t kArcPoints = 4000;

// Paranorm of (a, b) for e^t - 1 with unit weights.
double exp_plane_norm(double a, double b) { return std::log1p(std::expm1(std::fabs(a)) + std::expm1(std::fabs(b))); }

}  // namespace

ArcResult arc_max_exp(double r, double eps) {
  if (!(r > 0.0) || !(eps > 0.0) || !std::isfinite(r) || !std::isfinite(eps))
    throw InvalidArgument("arc sweep needs r > 0 and eps > 0");
  if (!(std::expm1(eps) <= 2.0 * std::expm1(r)))
    throw InvalidArgument("(r, eps) = (" + format_double(r) + ", " + format_double(eps) +
                          ") is outside e^eps - 1 <= 2(e^r - 1)");
  ArcResult out;
  const double rho = std::exp(r) + 1.0;
  const double alpha = std::exp(eps) + 1.0;
  out.rho = rho;
  out.alpha = alpha;
  const double top = rho - 1.0;
  if (arc_t(rho, alpha, 1.0) > top) throw InvalidArgument("empty arc: no admissible s for this (r, eps)");

  // Largest s with t(s) <= rho - 1.
  double lo = 1.0, hi = top;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (arc_t(rho, alpha, mid) <= top ? lo : hi) = mid;
  }
  const double s_hi = lo;
  out.s_hi = s_hi;

  auto midnorm = [&](double s) { return std::log(arc_f(rho, s, arc_t(rho, alpha, s)) - 1.0); };

  std::size_t best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  const double width = s_hi - 1.0;
  for (std::size_t i = 0; i < kArcPoints; ++i) {
    const double s = 1.0 + width * static_cast<double>(i) / static_cast<double>(kArcPoints - 1);
    const double v = midnorm(s);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  auto node = [&](std::size_t i) {
    return 1.0 + width * static_cast<double>(i) / static_cast<double>(kArcPoints - 1);
  };
  double s_best = node(best);

  // Golden-section refinement on the neighbouring cells.
  double a = node(best == 0 ? 0 : best - 1), b = node(std::min(best + 1, kArcPoints - 1));
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c1 = b - invphi * (b - a), c2 = a + invphi * (b - a);
  double f1 = midnorm(c1), f2 = midnorm(c2);
  for (int i = 0; i < 100 && b - a > 1e-15 * (1.0 + std::fabs(b)); ++i) {
    if (f1 > f2) {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - invphi * (b - a);
      f1 = midnorm(c1);
    } else {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + invphi * (b - a);
      f2 = midnorm(c2);
    }
  }
  for (double s : {a, b, c1, c2}) {
    const double v = midnorm(s);
    if (v > best_val) {
      best_val = v;
      s_best = s;
    }
  }

  const double t_best = arc_t(rho, alpha, s_best);
  OracleResult& res = out.result;
  res.r = r;
  res.eps = eps;
  res.worst_midpoint = best_val;
  res.delta_hat = r - best_val;
  res.x = {std::log(s_best), std::log(rho - s_best)};
  res.y = {std::log(t_best), std::log(rho - t_best)};
  res.samples = kArcPoints;
  res.feasible = kArcPoints;

  // Re-validate the constraints the pair was searched under.
  const double px = exp_plane_norm(res.x[0], res.x[1]);
  const double py = exp_plane_norm(res.y[0], res.y[1]);
  const double pd = exp_plane_norm(res.x[0] - res.y[0], res.x[1] - res.y[1]);
  const double tol = 1e-9 * std::max(1.0, r);
  if (std::fabs(px - r) > tol || std::fabs(py - r) > tol || std::fabs(pd - eps) > 1e-9 * std::max(1.0, eps))
    throw Error("arc sweep produced a pair that violates its constraints");

  out.s_best = s_best;
  out.f_lo = arc_f(rho, 1.0, arc_t(rho, alpha, 1.0));
  out.f_hi = arc_f(rho, s_hi, arc_t(rho, alpha, s_hi));
  const double endpoint_tol = 1e-6 * width;
  out.argmax_at_endpoint = std::fabs(s_best - 1.0) <= endpoint_tol || std::fabs(s_best - s_hi) <= endpoint_tol;

  const double s_star = 2.0 * rho / (alpha + 2.0);
  const double t_star = alpha * rho / (alpha + 2.0);
  out.f_critical = arc_f(rho, s_star, t_star);
  const double h = 1e-3 * width;
  const bool inside = s_star - h > 1.0 && s_star + h < s_hi;
  const bool on_arc = std::fabs(arc_t(rho, alpha, s_star) - t_star) <= 1e-9 * rho;
  out.critical_is_strict_min = inside && on_arc &&
                               out.f_critical < arc_f(rho, s_star - h, arc_t(rho, alpha, s_star - h)) &&
                               out.f_critical < arc_f(rho, s_star + h, arc_t(rho, alpha, s_star + h)) &&
                               out.f_critical < std::min(out.f_lo, out.f_hi);
  return out;
}

// ---------------------------------------------------------------------------
// General random search

namespace {

constexpr double kRadii[3] = {1.0, 0.9, 0.5};
constexpr std::size_t kLowCoverage = 100;

struct Candidate {
  double mid = -std::numeric_limits<double>::infinity();
  SimpleFunction x, y;
  std::size_t feasible = 0;
};

// Pulls x back inside the closed r-ball if rounding left it just outside.
void fit_inside(const ParanormContext& ctx, SimpleFunction& x, double r) {
  for (int i = 0; i < 64 && ctx.pnorm(x) > r; ++i)
    for (double& v : x) v *= 1.0 - 0x1.0p-52;
}

double midpoint_norm(const ParanormContext& ctx, const SimpleFunction& x, const SimpleFunction& y,
                     SimpleFunction& scratch) {
  for (std::size_t i = 0; i < x.size(); ++i) scratch[i] = 0.5 * (x[i] + y[i]);
  return ctx.pnorm(scratch);
}

double gap_norm(const ParanormContext& ctx, const SimpleFunction& x, const SimpleFunction& y, SimpleFunction& scratch) {
  for (std::size_t i = 0; i < x.size(); ++i) scratch[i] = x[i] - y[i];
  return ctx.pnorm(scratch);
}

// Coordinatewise hill climb with steps 0.1 r, 0.05 r, ... (20 halvings).
void refine(const ParanormContext& ctx, double r, double eps, Candidate& best) {
  const std::size_t k = ctx.dim();
  SimpleFunction scratch(k);
  double h = 0.1 * r;
  for (int level = 0; level < 20; ++level, h *= 0.5) {
    for (int pass = 0; pass < 50; ++pass) {
      bool improved = false;
      for (std::size_t j = 0; j < 2 * k; ++j) {
        for (double sign : {1.0, -1.0}) {
          SimpleFunction x = best.x, y = best.y;
          SimpleFunction& v = j < k ? x : y;
          v[j % k] += sign * h;
          try {
            if (ctx.pnorm(v) > r) {
              v = ctx.radial_scale(v, r);
              fit_inside(ctx, v, r);
            }
            if (gap_norm(ctx, x, y, scratch) < eps) continue;
            const double m = midpoint_norm(ctx, x, y, scratch);
            if (m > best.mid) {
              best.mid = m;
              best.x = std::move(x);
              best.y = std::move(y);
              improved = true;
            }
          } catch (const Error&) {
          }
        }
      }
      if (!improved) break;
    }
  }
}

}  // namespace

OracleResult empirical_modulus(const ParanormContext& ctx, double r, double eps, std::size_t samples,
                               std::uint64_t seed, const SearchOptions& options) {
  if (!(r > 0.0) || !(eps > 0.0) || !(eps < 2.0 * r))
    throw InvalidArgument("empirical modulus needs 0 < eps < 2r, got r = " + format_double(r) +
                          ", eps = " + format_double(eps));
  if (samples == 0) throw InvalidArgument("empirical modulus needs at least one sample");
  const std::size_t k = ctx.dim();
  const std::size_t batch = std::max<std::size_t>(1, options.batch);
  const std::size_t batches = (samples + batch - 1) / batch;
  std::vector<Candidate> found(batches);

  parallel_for(batches, [&](std::size_t b) {
    CounterRng rng(seed, b);
    Candidate& acc = found[b];
    SimpleFunction d1(k), d2(k), scratch(k);
    const std::size_t end = std::min(samples, (b + 1) * batch);
    for (std::size_t i = b * batch; i < end; ++i) {
      const int strategy = static_cast<int>(i % 3);
      const double rx = options.sphere_only ? r : r * kRadii[(i / 3) % 3];
      const double ry = options.sphere_only ? r : r * kRadii[(i / 9) % 3];
      for (std::size_t j = 0; j < k; ++j) d1[j] = rng.normal();
      if (strategy == 0) {
        for (std::size_t j = 0; j < k; ++j) d2[j] = rng.normal();
      } else if (strategy == 1) {
        for (std::size_t j = 0; j < k; ++j) d2[j] = -d1[j] + 0.3 * rng.normal();
      } else {
        const double sigma = std::exp(std::log(1e-3) + rng.uniform() * (std::log(2.0) - std::log(1e-3)));
        for (std::size_t j = 0; j < k; ++j) d2[j] = d1[j] + sigma * rng.normal();
      }
      try {
        SimpleFunction x = ctx.radial_scale(d1, rx);
        SimpleFunction y = ctx.radial_scale(d2, ry);
        fit_inside(ctx, x, r);
        fit_inside(ctx, y, r);
        if (gap_norm(ctx, x, y, scratch) < eps) continue;
        ++acc.feasible;
        const double m = midpoint_norm(ctx, x, y, scratch);
        if (m > acc.mid) {
          acc.mid = m;
          acc.x = std::move(x);
          acc.y = std::move(y);
        }
      } catch (const Error&) {
      }
    }
  });

  Candidate best;
  std::size_t feasible = 0;
  for (auto& c : found) {
    feasible += c.feasible;
    if (c.mid > best.mid) {
      best.mid = c.mid;
      best.x = c.x;
      best.y = c.y;
    }
  }
  if (best.x.empty()) {
    // Antipodal pair along the heaviest coordinate as a last resort.
    std::size_t j = static_cast<std::size_t>(
        std::max_element(ctx.space().weights().begin(), ctx.space().weights().end()) - ctx.space().weights().begin());
    SimpleFunction e(k, 0.0);
    e[j] = 1.0;
    SimpleFunction x = ctx.radial_scale(e, r);
    fit_inside(ctx, x, r);
    SimpleFunction y = x, scratch(k);
    for (double& v : y) v = -v;
    if (gap_norm(ctx, x, y, scratch) >= eps) {
      best.mid = midpoint_norm(ctx, x, y, scratch);
      best.x = x;
      best.y = y;
    }
  }
  if (best.x.empty()) throw Error("empirical modulus found no feasible pair");

  if (options.refine) refine(ctx, r, eps, best);

  OracleResult out;
  out.r = r;
  out.eps = eps;
  out.worst_midpoint = best.mid;
  out.delta_hat = r - best.mid;
  out.x = best.x;
  out.y = best.y;
  out.samples = samples;
  out.feasible = feasible;
  out.seed = seed;
  out.low_coverage = feasible < kLowCoverage;

  SimpleFunction scratch(k);
  if (ctx.pnorm(out.x) > r + 1e-12 || ctx.pnorm(out.y) > r + 1e-12 || gap_norm(ctx, out.x, out.y, scratch) < eps - 1e-12)
    throw Error("empirical modulus produced a pair that violates its constraints");
  return out;
}

LowerBoundReport check_lower_bound(const ParanormContext& ctx, const ModulusFn& delta_theory,
                                   const std::vector<std::pair<double, double>>& points, std::size_t samples,
                                   std::uint64_t seed) {
  LowerBoundReport rep;
  rep.rows.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [r, eps] = points[i];
    LowerBoundRow row{r, eps, delta_theory(r, eps), 0.0, false, {}};
    row.oracle = empirical_modulus(ctx, r, eps, samples, mix64(seed + i));
    row.delta_empirical = row.oracle.delta_hat;
    row.violation = row.delta_empirical < row.delta_theory - 1e-9;
    rep.violations += row.violation ? 1 : 0;
    rep.any_low_coverage = rep.any_low_coverage || row.oracle.low_coverage;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace uconvex
