#include "uconvex/modulus.hpp"

#include <cmath>
#include <limits>

#include "uconvex/conditions.hpp"
#include "uconvex/error.hpp"
#include "uconvex/format.hpp"

namespace uconvex {

namespace {

void require_positive(double r, double eps) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("modulus needs r > 0, got r = " + format_double(r));
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("modulus needs eps > 0, got eps = " + format_double(eps));
}

void require_delta(double r, double eps) {
  require_positive(r, eps);
  if (!(eps < 2.0 * r))
    throw InvalidArgument("(r, eps) = (" + format_double(r) + ", " + format_double(eps) + ") is outside 0 < eps < 2r");
}

void require_exp_delta_phi(double r, double eps) {
  require_positive(r, eps);
  if (!(std::expm1(eps) <= 2.0 * std::expm1(r)))
    throw InvalidArgument("(r, eps) = (" + format_double(r) + ", " + format_double(eps) +
                          ") is outside e^eps - 1 <= 2(e^r - 1)");
}

}  // namespace

void validate_query(const Generator& g, double r, double eps, DeltaDomain domain) {
  if (domain == DeltaDomain::Delta) {
    require_delta(r, eps);
    return;
  }
  require_positive(r, eps);
  if (!(g.value(eps) <= 2.0 * g.value(r)))
    throw InvalidArgument("(r, eps) = (" + format_double(r) + ", " + format_double(eps) +
                          ") is outside phi(eps) <= 2 phi(r)");
}

double delta_closed_form(const Generator& g, double r, double eps) {
  require_delta(r, eps);
  if (const auto& f = g.family()) {
    if (f->kind == BuiltinFamily::Kind::Power) {
      const double q = std::pow(eps / (2.0 * r), f->p);
      return -r * std::expm1(std::log1p(-q) / f->p);
    }
    if (f->kind == BuiltinFamily::Kind::ExpMinusOne) {
      const double c = std::log(f->a);
      return -std::log1p(-std::expm1(0.5 * c * eps) * std::exp(-c * r)) / c;
    }
  }
  return r - g.inverse(g.value(r) - g.value(0.5 * eps));
}

double delta_lp(double p, double r, double eps) {
  require_delta(r, eps);
  return r - std::pow(std::pow(r, p) - std::pow(eps / 2.0, p), 1.0 / p);
}

ImplicitDelta delta_implicit(const Generator& g, double r, double eps) {
  require_delta(r, eps);
  const double v = 0.5 * eps;

  const Grid2 local{(r + v) * 1e-3, r + v, 24, Spacing::Log};
  const ConditionReport audit = check_strictly_convex(g, local);
  if (!audit.holds()) {
    std::string where;
    if (audit.witness.size() == 2)
      where = " (margin " + format_double(audit.worst_margin) + " at r = " + format_double(audit.witness[0]) +
              ", s = " + format_double(audit.witness[1]) + ")";
    throw RouteUnavailable("implicit modulus needs a strictly convex generator; strict convexity fails on [" +
                           format_double(local.lo) + ", " + format_double(local.hi) + "]" + where);
  }

  const double target = 2.0 * g.value(r);
  auto lambda = [&](double u) { return g.value(u + v) + g.value(std::fabs(u - v)); };

  // lambda(., v) increases strictly, lambda(0) = 2 phi(v) <= target <= lambda(r).
  double lo = 0.0, hi = r;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (lambda(mid) < target ? lo : hi) = mid;
  }
  double u = std::fabs(lambda(lo) - target) <= std::fabs(lambda(hi) - target) ? lo : hi;
  double res = std::fabs(lambda(u) - target);

  // Newton polish, disabled near the kink at u = v.
  for (int i = 0; i < 3 && res > 0.0 && std::fabs(u - v) > 1e-8; ++i) {
    const double slope = g.deriv1(u + v) + (u >= v ? 1.0 : -1.0) * g.deriv1(std::fabs(u - v));
    if (!(slope > 0.0) || !std::isfinite(slope)) break;
    const double next = u - (lambda(u) - target) / slope;
    if (!(next >= 0.0 && next <= r)) break;
    const double next_res = std::fabs(lambda(next) - target);
    if (!(next_res < res)) break;
    u = next;
    res = next_res;
  }
  return {r - u, res};
}

double delta_psi_transform(const ModulusFn& base, const Generator& psi, double r, double eps) {
  require_positive(r, eps);
  const ConditionReport audit = check_subadditive(psi, default_grid(psi));
  if (!audit.holds())
    throw RouteUnavailable("psi transform needs a subadditive psi; subadditivity fails with margin " +
                           format_double(audit.worst_margin));
  const double rb = psi.inverse(r), eb = psi.inverse(eps);
  if (!(eb < 2.0 * rb))
    throw InvalidArgument("transformed point (" + format_double(rb) + ", " + format_double(eb) +
                          ") is outside the base domain 0 < eps < 2r");
  return r - psi.value(rb - base(rb, eb));
}

// ---------------------------------------------------------------------------
// e^t - 1 on the plane

namespace {

// w = r - x, computed without subtracting nearly equal quantities.
double split_gap(double r, double eps) {
  const double er = std::exp(-r);
  const double k = std::exp(eps - r);
  const double z = 2.0 * er * std::expm1(eps) / ((1.0 + k) + std::sqrt((1.0 - k) * (1.0 - k) + 4.0 * er));
  return -std::log1p(-z);
}

}  // namespace

double exp_split_point(double r, double eps) {
  require_exp_delta_phi(r, eps);
  return r - split_gap(r, eps);
}

double exp_split_point_bisect(double r, double eps) {
  require_exp_delta_phi(r, eps);
  const double rhs = std::expm1(r) - std::expm1(eps);
  auto h = [&](double t) { return std::expm1(t) - std::expm1(r - t) - rhs; };
  double lo = 0.0, hi = r;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (h(mid) < 0.0 ? lo : hi) = mid;
  }
  return std::fabs(h(lo)) <= std::fabs(h(hi)) ? lo : hi;
}

double exp_plane_delta0(double r, double eps) {
  require_exp_delta_phi(r, eps);
  const double w = split_gap(r, eps);
  const double q = std::exp(-r) * std::expm1(0.5 * std::log1p(-std::exp(r) * std::expm1(-w)));
  return -std::log1p(std::expm1(-0.5 * w) + q);
}

double exp_plane_modulus(double r, double eps) {
  require_delta(r, eps);
  return exp_plane_delta0(r, 0.25 * eps);
}

// ---------------------------------------------------------------------------

const char* to_string(Method m) {
  switch (m) {
    case Method::ClosedForm: return "closed";
    case Method::Implicit: return "implicit";
    case Method::ExpPlane: return "exp-plane";
    case Method::Psi: return "psi";
    case Method::Lp: return "lp";
    case Method::Empirical: return "empirical";
  }
  return "unknown";
}

Method method_from_name(std::string_view name) {
  for (Method m : {Method::ClosedForm, Method::Implicit, Method::ExpPlane, Method::Psi, Method::Lp, Method::Empirical})
    if (name == to_string(m)) return m;
  throw InvalidArgument("unknown method '" + std::string(name) +
                        "'; expected closed, implicit, exp-plane, psi, lp or empirical");
}

}  // namespace uconvex
