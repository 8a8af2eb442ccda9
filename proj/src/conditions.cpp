#include "uconvex/conditions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include "margin_tracker.hpp"
#include "uconvex/error.hpp"
#include "uconvex/format.hpp"
#include "uconvex/parallel.hpp"

namespace uconvex {

// ---------------------------------------------------------------------------
// Grid2

void Grid2::validate() const {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi))
    throw InvalidArgument("grid needs 0 < lo < hi, got lo = " + format_double(lo) + ", hi = " + format_double(hi));
  if (n < 2) throw InvalidArgument("grid needs n >= 2");
}

std::vector<double> Grid2::points() const {
  validate();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = spacing == Spacing::Log ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)))
                                     : lo + f * (hi - lo);
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::string Grid2::describe() const {
  return format_double(lo) + ":" + format_double(hi) + ":" + std::to_string(n) + ":" +
         (spacing == Spacing::Log ? "log" : "lin");
}

Grid2 Grid2::parse(std::string_view text) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto c = text.find(':');
    parts.push_back(text.substr(0, c));
    if (c == std::string_view::npos) break;
    text.remove_prefix(c + 1);
  }
  if (parts.size() != 3 && parts.size() != 4) throw InvalidArgument("grid must be lo:hi:n[:log|lin]");
  auto num = [](std::string_view s, auto& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
      throw InvalidArgument("invalid grid field '" + std::string(s) + "'");
  };
  Grid2 g;
  num(parts[0], g.lo);
  num(parts[1], g.hi);
  num(parts[2], g.n);
  if (parts.size() == 4) {
    if (parts[3] == "log")
      g.spacing = Spacing::Log;
    else if (parts[3] == "lin")
      g.spacing = Spacing::Linear;
    else
      throw InvalidArgument("grid spacing must be log or lin, got '" + std::string(parts[3]) + "'");
  }
  g.validate();
  return g;
}

Grid2 fit_grid(Grid2 grid, const Generator& g) {
  grid.hi = std::min(grid.hi, 0.5 * g.t_max());
  grid.validate();
  return grid;
}

Grid2 default_grid(const Generator& g) { return fit_grid(Grid2{}, g); }

// ---------------------------------------------------------------------------
// Names

namespace {

struct NamedCondition {
  Condition c;
  const char* name;
};

constexpr NamedCondition kNames[] = {
    {Condition::Superquadratic, "superquadratic"},
    {Condition::Subquadratic, "subquadratic"},
    {Condition::Convex, "convex"},
    {Condition::StrictlyConvex, "strictly-convex"},
    {Condition::GeometricConvex, "geometrically-convex"},
    {Condition::RatioSuperadditive, "ratio-superadditive"},
    {Condition::RatioSubadditive, "ratio-subadditive"},
    {Condition::FConcave, "F-concave"},
    {Condition::GConvex, "G-convex"},
    {Condition::HConvex, "H-convex"},
    {Condition::HSubadditive, "H-subadditive"},
    {Condition::HHessianSufficient, "H-hessian-sufficient"},
    {Condition::AbsSumIdentity, "abs-sum-identity"},
    {Condition::Subadditive, "subadditive"},
};

}  // namespace

const char* condition_name(Condition c) {
  for (const auto& nc : kNames)
    if (nc.c == c) return nc.name;
  return "unknown";
}

Condition condition_from_name(std::string_view name) {
  for (const auto& nc : kNames)
    if (name == nc.name) return nc.c;
  throw InvalidArgument("unknown condition '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Pointwise evaluation

double F_value(const Generator& g, double r, double s) { return g.value(g.inverse(r) + g.inverse(s)); }

double G_value(const Generator& g, double r, double s) { return g.value(std::fabs(g.inverse(r) - g.inverse(s))); }

double H_value(const Generator& g, double r, double s) {
  const double a = g.inverse(r), b = g.inverse(s);
  return g.value(a + b) + g.value(std::fabs(a - b));
}

namespace {

double ratio(const Generator& g, double t) {
  const double d2 = g.deriv2(t);
  if (d2 == 0.0) throw DomainError("second derivative vanishes at t = " + format_double(t));
  return g.deriv1(t) / d2;
}

void require_size(std::span<const double> p, std::size_t n, Condition c) {
  if (p.size() != n)
    throw InvalidArgument(std::string(condition_name(c)) + " expects " + std::to_string(n) + " coordinates, got " +
                          std::to_string(p.size()));
}

template <class Fn>
Sides midpoint_sides(std::span<const double> p, Fn&& f, bool concave) {
  const double mid = f(0.5 * (p[0] + p[2]), 0.5 * (p[1] + p[3]));
  const double mean = 0.5 * (f(p[0], p[1]) + f(p[2], p[3]));
  return concave ? Sides{mid, mean} : Sides{mean, mid};
}

// Three derivative inequalities at r > s > 0; returns the tightest one.
Sides hessian_sides(const Generator& g, double r, double s) {
  const double d1p = g.deriv1(r + s), d1m = g.deriv1(r - s);
  const double d2p = g.deriv2(r + s), d2m = g.deriv2(r - s);
  const double kr = g.deriv2(r) / g.deriv1(r), ks = g.deriv2(s) / g.deriv1(s);
  const double sum2 = d2p + d2m;
  const double diff1 = d1p - d1m, sum1 = d1p + d1m;
  if (!(diff1 > 0.0)) throw DomainError("phi' not increasing between r - s and r + s");
  const Sides first{4.0 * d2p * d2m / (diff1 * sum1) + kr * ks, kr * sum2 / diff1 + ks * sum2 / sum1};
  const Sides second{sum2 / sum1, kr};
  const Sides third{sum2 / diff1, ks};
  Sides best = first;
  double best_scaled = (first.greater - first.lesser) / detail::magnitude(first.greater, first.lesser);
  for (const Sides& cand : {second, third}) {
    const double sc = (cand.greater - cand.lesser) / detail::magnitude(cand.greater, cand.lesser);
    if (sc < best_scaled) {
      best_scaled = sc;
      best = cand;
    }
  }
  return best;
}

}  // namespace

Sides evaluate_condition(Condition c, const Generator& g, std::span<const double> p) {
  switch (c) {
    case Condition::Superquadratic:
    case Condition::Subquadratic: {
      require_size(p, 2, c);
      const double r = p[0], s = p[1];
      const double a = g.value(r + s) + g.value(std::fabs(r - s));
      const double b = 2.0 * g.value(r) + 2.0 * g.value(s);
      return c == Condition::Superquadratic ? Sides{a, b} : Sides{b, a};
    }
    case Condition::Convex:
    case Condition::StrictlyConvex: {
      require_size(p, 2, c);
      return {0.5 * (g.value(p[0]) + g.value(p[1])), g.value(0.5 * (p[0] + p[1]))};
    }
    case Condition::GeometricConvex: {
      require_size(p, 2, c);
      return {std::sqrt(g.value(p[0]) * g.value(p[1])), g.value(std::sqrt(p[0] * p[1]))};
    }
    case Condition::RatioSuperadditive:
    case Condition::RatioSubadditive: {
      require_size(p, 2, c);
      const double whole = ratio(g, p[0] + p[1]);
      const double parts = ratio(g, p[0]) + ratio(g, p[1]);
      return c == Condition::RatioSuperadditive ? Sides{whole, parts} : Sides{parts, whole};
    }
    case Condition::FConcave:
      require_size(p, 4, c);
      return midpoint_sides(p, [&](double r, double s) { return F_value(g, r, s); }, true);
    case Condition::GConvex:
      require_size(p, 4, c);
      return midpoint_sides(p, [&](double r, double s) { return G_value(g, r, s); }, false);
    case Condition::HConvex:
      require_size(p, 4, c);
      return midpoint_sides(p, [&](double r, double s) { return H_value(g, r, s); }, false);
    case Condition::HSubadditive:
      require_size(p, 4, c);
      return {H_value(g, p[0], p[1]) + H_value(g, p[2], p[3]), H_value(g, p[0] + p[2], p[1] + p[3])};
    case Condition::HHessianSufficient:
      require_size(p, 2, c);
      if (!(p[0] > p[1] && p[1] > 0.0)) throw DomainError("derivative inequalities need r > s > 0");
      return hessian_sides(g, p[0], p[1]);
    case Condition::AbsSumIdentity: {
      require_size(p, 2, c);
      const double s = p[0], t = p[1];
      const double as = std::fabs(s), at = std::fabs(t);
      return {g.value(as + at) + g.value(std::fabs(as - at)), g.value(std::fabs(s + t)) + g.value(std::fabs(s - t))};
    }
    case Condition::Subadditive:
      require_size(p, 2, c);
      return {g.value(p[0]) + g.value(p[1]), g.value(p[0] + p[1])};
  }
  throw InvalidArgument("unknown condition");
}

double reevaluate_margin(const Generator& g, const ConditionReport& report) {
  const Sides s = evaluate_condition(condition_from_name(report.name), g, report.witness);
  return s.greater - s.lesser;
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

constexpr std::size_t kCoarseNodes = 14;

std::vector<double> coarse(const std::vector<double>& t) {
  const std::size_t m = std::min(kCoarseNodes, t.size());
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = t[(i * (t.size() - 1) + (m - 1) / 2) / (m - 1)];
  out.front() = t.front();
  out.back() = t.back();
  return out;
}

}  // namespace

std::vector<std::vector<double>> sample_points(Condition c, const Generator& g, const Grid2& grid) {
  const std::vector<double> t = grid.points();
  const std::size_t n = t.size();
  std::vector<std::vector<double>> pts;
  switch (c) {
    case Condition::Superquadratic:
    case Condition::Subquadratic:
    case Condition::RatioSuperadditive:
    case Condition::RatioSubadditive:
    case Condition::GeometricConvex:
    case Condition::Subadditive:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) pts.push_back({t[i], t[j]});
      break;
    case Condition::Convex:
    case Condition::StrictlyConvex:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pts.push_back({t[i], t[j]});
      break;
    case Condition::HHessianSufficient:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (t[i] > t[j] + grid.lo) pts.push_back({t[i], t[j]});
      break;
    case Condition::AbsSumIdentity:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          pts.push_back({t[i], t[j]});
          pts.push_back({t[i], -t[j]});
          pts.push_back({-t[i], t[j]});
          pts.push_back({-t[i], -t[j]});
        }
      break;
    case Condition::FConcave:
    case Condition::GConvex:
    case Condition::HConvex:
    case Condition::HSubadditive: {
      // Nodes in phi-value coordinates, taken from a coarse subgrid of t values.
      std::vector<double> u;
      for (double x : coarse(t)) u.push_back(g.value(x));
      std::vector<std::array<double, 2>> nodes;
      for (double a : u)
        for (double b : u) nodes.push_back({a, b});
      const bool with_replacement = c == Condition::HSubadditive;
      for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = with_replacement ? i : i + 1; j < nodes.size(); ++j)
          pts.push_back({nodes[i][0], nodes[i][1], nodes[j][0], nodes[j][1]});
      break;
    }
  }
  return pts;
}

// ---------------------------------------------------------------------------
// Checks

namespace {

constexpr std::size_t kCheckBatch = 512;
constexpr double kStrictFloor = 1e-12;
constexpr double kIdentityTol = 1e-12;

// t phi'(t) / phi(t) must be nondecreasing along the grid.
ConditionReport log_derivative_monotone(const Generator& g, const Grid2& grid) {
  ConditionReport rep;
  rep.name = "log-derivative-monotone";
  rep.domain = grid.describe();
  detail::MarginTracker acc;
  const auto t = grid.points();
  double prev = 0.0, prev_t = 0.0;
  bool have_prev = false;
  for (double x : t) {
    double q = 0.0;
    try {
      q = x * g.deriv1(x) / g.value(x);
    } catch (const Error&) {
      acc.exclude();
      have_prev = false;
      continue;
    }
    if (have_prev) acc.consider(q, prev, {prev_t, x});
    prev = q;
    prev_t = x;
    have_prev = true;
  }
  acc.fill(rep);
  return rep;
}

}  // namespace

ConditionReport check_points(Condition c, const Generator& g, const std::vector<std::vector<double>>& points,
                             std::string domain) {
  ConditionReport rep;
  rep.name = condition_name(c);
  rep.domain = std::move(domain);
  const bool strict = c == Condition::StrictlyConvex;
  const std::size_t batches = (points.size() + kCheckBatch - 1) / kCheckBatch;
  std::vector<detail::MarginTracker> parts(batches);
  std::vector<double> identity_gap(batches, 0.0);

  parallel_for(batches, [&](std::size_t b) {
    detail::MarginTracker& acc = parts[b];
    acc.relative = strict;
    const std::size_t end = std::min(points.size(), (b + 1) * kCheckBatch);
    for (std::size_t i = b * kCheckBatch; i < end; ++i) {
      try {
        const Sides s = evaluate_condition(c, g, points[i]);
        if (!std::isfinite(s.greater) || !std::isfinite(s.lesser)) {
          acc.exclude();
          continue;
        }
        if (c == Condition::AbsSumIdentity) {
          // Track the largest absolute gap via the smallest -|gap|.
          const double gap = std::fabs(s.greater - s.lesser);
          acc.consider(-gap, 0.0, points[i]);
          identity_gap[b] = std::max(identity_gap[b], gap / detail::magnitude(s.greater, s.lesser));
          continue;
        }
        acc.consider(s.greater, s.lesser, points[i]);
      } catch (const Error&) {
        acc.exclude();
      }
    }
  });

  detail::MarginTracker total;
  total.relative = strict;
  for (const auto& p : parts) total.merge(p);
  total.fill(rep);

  if (c == Condition::AbsSumIdentity && rep.evaluated > 0) {
    const Sides s = evaluate_condition(c, g, rep.witness);
    rep.greater = s.greater;
    rep.lesser = s.lesser;
    rep.worst_margin = std::fabs(s.greater - s.lesser);
    const double worst = *std::max_element(identity_gap.begin(), identity_gap.end());
    rep.verdict = worst <= kIdentityTol ? Verdict::HoldsOnGrid : Verdict::Fails;
    rep.notes.push_back("margin is the largest absolute difference of the two sides");
  }
  if (strict && rep.evaluated > 0) {
    rep.verdict = total.scaled >= kStrictFloor ? Verdict::HoldsOnGrid : Verdict::Fails;
    rep.notes.push_back("strictness floor: margin >= 1e-12 * max(|sides|) at r != s");
  }
  if ((c == Condition::RatioSuperadditive || c == Condition::RatioSubadditive) && rep.excluded > 0)
    rep.notes.push_back(std::to_string(rep.excluded) + " points excluded (phi'' = 0 or undefined)");
  else if (rep.excluded > 0)
    rep.notes.push_back(std::to_string(rep.excluded) + " points excluded (overflow or outside the domain)");
  return rep;
}

ConditionReport check(Condition c, const Generator& g, const Grid2& grid) {
  grid.validate();
  std::string domain = "grid " + grid.describe();
  if (c == Condition::FConcave || c == Condition::GConvex || c == Condition::HConvex || c == Condition::HSubadditive)
    domain += ", nodes phi(t) on a " + std::to_string(std::min(kCoarseNodes, grid.n)) + "-point subgrid";
  if (c == Condition::HHessianSufficient) domain += ", pairs with r > s + lo";
  ConditionReport rep = check_points(c, g, sample_points(c, g, grid), domain);

  if (c == Condition::GeometricConvex) {
    const ConditionReport deriv = log_derivative_monotone(g, grid);
    if (deriv.holds() != rep.holds()) {
      rep.notes.push_back(std::string("discrepancy: t phi'/phi monotonicity test ") +
                          (deriv.holds() ? "holds" : "fails") + " while the inequality test " +
                          (rep.holds() ? "holds" : "fails"));
    } else {
      rep.notes.push_back(std::string("t phi'/phi monotonicity test agrees (") + to_string(deriv.verdict) + ")");
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Certificates

const char* to_string(ParanormRoute r) {
  switch (r) {
    case ParanormRoute::FConcave:
      return "F-concave";
    case ParanormRoute::ConvexGeometric:
      return "convex-geometric";
  }
  return "none";
}

const char* to_string(UcRoute r) {
  switch (r) {
    case UcRoute::Superquadratic:
      return "superquadratic-closed-form";
    case UcRoute::HCondition:
      return "H-condition-implicit";
    case UcRoute::StrictConvexFinite:
      return "strictly-convex-finite-dim";
    case UcRoute::ExpPlaneExact:
      return "exp-plane-exact";
  }
  return "none";
}

bool Certificate::has(ParanormRoute r) const {
  return std::find(paranorm_routes.begin(), paranorm_routes.end(), r) != paranorm_routes.end();
}

bool Certificate::has(UcRoute r) const { return std::find(uc_routes.begin(), uc_routes.end(), r) != uc_routes.end(); }

const ConditionReport* Certificate::find(std::string_view condition) const {
  for (const auto& rep : evidence)
    if (rep.name == condition) return &rep;
  return nullptr;
}

Certificate certify(const Generator& g, const MeasureSpace& m, const Grid2& grid_in) {
  const Grid2 grid = fit_grid(grid_in, g);
  Certificate cert;
  cert.generator = g.name();
  cert.weights = m.weights();
  cert.flags = m.classify();

  auto run = [&](Condition c) -> const ConditionReport& {
    cert.evidence.push_back(check(c, g, grid));
    return cert.evidence.back();
  };
  const bool convex = run(Condition::Convex).holds();
  const bool strict = run(Condition::StrictlyConvex).holds();
  const bool geometric = run(Condition::GeometricConvex).holds();
  const bool superquadratic = run(Condition::Superquadratic).holds();
  const bool ratio_super = run(Condition::RatioSuperadditive).holds();
  const bool f_concave = run(Condition::FConcave).holds();
  const bool h_convex = run(Condition::HConvex).holds();
  const bool h_subadditive = run(Condition::HSubadditive).holds();

  cert.notes.push_back("bijectivity of phi is grid-audited on (1e-6, T_max], not proved");
  if (ratio_super && !f_concave)
    cert.notes.push_back("inconsistent: phi'/phi'' superadditive on the grid but F-concavity fails");

  if (cert.flags.sub_probability && f_concave) {
    cert.paranorm_routes.push_back(ParanormRoute::FConcave);
    bool proper_subset = false;
    for (double a : m.weights()) proper_subset = proper_subset || (a > 0.0 && a < 1.0);
    if (m.total() == 1.0 && proper_subset)
      cert.notes.push_back("total mass 1 with a point of mass in (0,1): F-concavity is also necessary for subadditivity");
    else
      cert.notes.push_back("F-concavity used as a sufficient condition only");
  }
  if (cert.flags.counting_like && convex && geometric) cert.paranorm_routes.push_back(ParanormRoute::ConvexGeometric);

  const bool paranorm = !cert.paranorm_routes.empty();
  if (paranorm && superquadratic) cert.uc_routes.push_back(UcRoute::Superquadratic);
  const bool h_route = (cert.flags.sub_probability && h_convex) || (m.integer_weights() && h_subadditive);
  if (paranorm && strict && h_route) cert.uc_routes.push_back(UcRoute::HCondition);
  if (paranorm && strict) cert.uc_routes.push_back(UcRoute::StrictConvexFinite);
  if (g.is_natural_exp_minus_one() && m.weights() == std::vector<double>{1.0, 1.0})
    cert.uc_routes.push_back(UcRoute::ExpPlaneExact);
  if (std::find(cert.uc_routes.begin(), cert.uc_routes.end(), UcRoute::StrictConvexFinite) != cert.uc_routes.end() &&
      cert.uc_routes.size() == 1)
    cert.notes.push_back("no explicit modulus for this route; use the empirical modulus");
  return cert;
}

}  // namespace uconvex
