#include "uconvex/generator.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "uconvex/error.hpp"
#include "uconvex/format.hpp"

namespace uconvex {

namespace {

constexpr double kOverflowGuard = 1e300;
constexpr double kDefaultTMax = 1e8;
constexpr double kExpExponentCap = 700.0;
constexpr int kAuditPoints = 200;
constexpr int kNewtonCap = 100;

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    throw InvalidArgument("invalid value for " + std::string(what) + ": '" + std::string(text) + "'");
  return v;
}

// Parses "p=2,a=3" into the requested keys; unknown keys are an error.
struct Params {
  std::optional<double> p, a;
};

Params parse_params(std::string_view text) {
  Params out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw InvalidArgument("expected key=value in generator spec, got '" + std::string(item) + "'");
    const std::string_view key = item.substr(0, eq);
    const double v = parse_number(item.substr(eq + 1), key);
    if (key == "p")
      out.p = v;
    else if (key == "a")
      out.a = v;
    else
      throw InvalidArgument("unknown generator parameter '" + std::string(key) + "'");
  }
  return out;
}

std::string family_name(const BuiltinFamily& f) {
  switch (f.kind) {
    case BuiltinFamily::Kind::Power:
      return "power:p=" + format_double(f.p);
    case BuiltinFamily::Kind::ExpMinusOne:
      return "exp:a=" + format_double(f.a);
    case BuiltinFamily::Kind::PowerTimesExp:
      return "powexp:p=" + format_double(f.p) + ",a=" + format_double(f.a);
    case BuiltinFamily::Kind::CubicRational:
      return "cubicrational:p=" + format_double(f.p);
  }
  return {};
}

// exp(c*t), printed as exp(t) when c == 1.
Expr exp_ct(double c) {
  const Expr t = Expr::var();
  return c == 1.0 ? Expr::exp(t) : Expr::exp(Expr::mul(Expr::constant(c), t));
}

Expr family_expr(const BuiltinFamily& f, double c) {
  const Expr t = Expr::var();
  switch (f.kind) {
    case BuiltinFamily::Kind::Power:
      return f.p == 1.0 ? t : Expr::pow(t, f.p);
    case BuiltinFamily::Kind::ExpMinusOne:
      return Expr::sub(exp_ct(c), Expr::constant(1.0));
    case BuiltinFamily::Kind::PowerTimesExp:
      return Expr::mul(f.p == 1.0 ? t : Expr::pow(t, f.p), exp_ct(c));
    case BuiltinFamily::Kind::CubicRational:
      return Expr::div(Expr::pow(t, f.p), Expr::add(t, Expr::constant(1.0)));
  }
  return t;
}

void require_nonnegative(double t) {
  if (!(t >= 0.0)) throw InvalidArgument("generator argument must be >= 0, got " + format_double(t));
}

double checked(double v, double t) {
  if (std::isnan(v)) throw DomainError("generator undefined at t = " + format_double(t));
  if (std::isinf(v)) throw OverflowError("generator overflows at t = " + format_double(t));
  return v;
}

}  // namespace

BuiltinFamily BuiltinFamily::power(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("power family needs p >= 1, got " + format_double(p));
  return {Kind::Power, p, std::numbers::e};
}

BuiltinFamily BuiltinFamily::exp_minus_one(double a) {
  if (!(a > 1.0) || !std::isfinite(a)) throw InvalidArgument("exp family needs a > 1, got " + format_double(a));
  return {Kind::ExpMinusOne, 1.0, a};
}

BuiltinFamily BuiltinFamily::power_times_exp(double p, double a) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("powexp family needs p >= 1, got " + format_double(p));
  if (!(a > 1.0) || !std::isfinite(a)) throw InvalidArgument("powexp family needs a > 1, got " + format_double(a));
  return {Kind::PowerTimesExp, p, a};
}

BuiltinFamily BuiltinFamily::cubic_rational(double p) {
  // At p = 1 the map tends to 1 and is not onto [0, inf).
  if (!(p > 1.0) || !std::isfinite(p))
    throw InvalidArgument("cubicrational family needs p > 1, got " + format_double(p));
  return {Kind::CubicRational, p, std::numbers::e};
}

Generator Generator::make(const BuiltinFamily& family) {
  Generator g;
  g.family_ = family;
  g.name_ = family_name(family);
  g.c_ = std::log(family.a);
  g.phi_ = family_expr(family, g.c_);
  g.finish_construction();
  return g;
}

Generator Generator::make(const Expr& phi, std::string name) {
  if (!phi.depends_on_t()) throw InvalidArgument("generator expression must depend on t");
  Generator g;
  g.phi_ = phi;
  g.name_ = name.empty() ? "expr:" + to_string(phi) : std::move(name);
  g.finish_construction();
  return g;
}

Generator Generator::from_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  if (kind == "expr") {
    if (rest.empty()) throw InvalidArgument("expr generator needs an expression after 'expr:'");
    return make(parse(rest), "expr:" + std::string(rest));
  }
  const Params prm = parse_params(rest);
  if (kind == "power") {
    if (!prm.p || prm.a) throw InvalidArgument("power generator takes exactly p=<value>");
    return make(BuiltinFamily::power(*prm.p));
  }
  if (kind == "exp") {
    if (prm.p) throw InvalidArgument("exp generator takes only a=<value>");
    return make(BuiltinFamily::exp_minus_one(prm.a.value_or(std::numbers::e)));
  }
  if (kind == "powexp") {
    if (!prm.p) throw InvalidArgument("powexp generator needs p=<value>");
    return make(BuiltinFamily::power_times_exp(*prm.p, prm.a.value_or(std::numbers::e)));
  }
  if (kind == "cubicrational") {
    if (!prm.p || prm.a) throw InvalidArgument("cubicrational generator takes exactly p=<value>");
    return make(BuiltinFamily::cubic_rational(*prm.p));
  }
  throw InvalidArgument("unknown generator kind '" + std::string(kind) +
                        "'; expected power, exp, powexp, cubicrational or expr");
}

void Generator::finish_construction() {
  d1_ = differentiate(phi_);
  d2_ = differentiate(d1_);

  double at_zero = 0.0;
  try {
    at_zero = value(0.0);
  } catch (const Error& e) {
    throw InvalidArgument("generator must satisfy phi(0) = 0: " + std::string(e.what()));
  }
  if (std::fabs(at_zero) > 1e-12)
    throw InvalidArgument("generator must satisfy phi(0) = 0, got phi(0) = " + format_double(at_zero));

  auto below_guard = [this](double t) {
    try {
      const double v = value(t);
      return v <= kOverflowGuard;
    } catch (const Error&) {
      return false;
    }
  };

  if (family_ && (family_->kind == BuiltinFamily::Kind::ExpMinusOne)) {
    t_max_ = kExpExponentCap / c_;
  } else if (below_guard(kDefaultTMax)) {
    t_max_ = kDefaultTMax;
  } else {
    double lo = 0.0, hi = kDefaultTMax;
    if (!below_guard(1.0)) lo = 0.0; else lo = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      (below_guard(mid) ? lo : hi) = mid;
    }
    t_max_ = lo;
    if (!(t_max_ > 0.0)) throw InvalidArgument("generator overflows immediately above 0");
  }
  phi_max_ = value(t_max_);

  // Strict monotonicity on a log grid (an audit, not a proof).
  const double lo = std::log(1e-6), hi = std::log(t_max_);
  double prev_t = 0.0, prev_v = 0.0;
  for (int i = 0; i < kAuditPoints; ++i) {
    const double t = std::exp(lo + (hi - lo) * i / (kAuditPoints - 1));
    double v = 0.0;
    try {
      v = value(t);
    } catch (const Error& e) {
      throw InvalidArgument("generator is not defined on its audit grid: " + std::string(e.what()));
    }
    if (v < prev_v || (v == prev_v && v > 0.0) || v < 0.0)
      throw InvalidArgument("generator is not strictly increasing: phi(" + format_double(prev_t) + ") = " +
                            format_double(prev_v) + " >= phi(" + format_double(t) + ") = " + format_double(v));
    prev_t = t;
    prev_v = v;
  }
}

double Generator::value(double t) const {
  require_nonnegative(t);
  if (!family_) return eval(phi_, t);
  const BuiltinFamily& f = *family_;
  switch (f.kind) {
    case BuiltinFamily::Kind::Power:
      if (f.p == 1.0) return t;
      if (f.p == 2.0) return checked(t * t, t);
      return checked(std::pow(t, f.p), t);
    case BuiltinFamily::Kind::ExpMinusOne:
      return checked(std::expm1(c_ * t), t);
    case BuiltinFamily::Kind::PowerTimesExp:
      return checked(std::pow(t, f.p) * std::exp(c_ * t), t);
    case BuiltinFamily::Kind::CubicRational:
      return checked(std::pow(t, f.p) / (t + 1.0), t);
  }
  return 0.0;
}

double Generator::deriv1(double t) const {
  require_nonnegative(t);
  if (!family_) return eval(d1_, t);
  const BuiltinFamily& f = *family_;
  const double p = f.p;
  switch (f.kind) {
    case BuiltinFamily::Kind::Power:
      if (p == 1.0) return 1.0;
      return checked(p * std::pow(t, p - 1.0), t);
    case BuiltinFamily::Kind::ExpMinusOne:
      return checked(c_ * std::exp(c_ * t), t);
    case BuiltinFamily::Kind::PowerTimesExp:
      return checked(std::exp(c_ * t) * std::pow(t, p - 1.0) * (p + c_ * t), t);
    case BuiltinFamily::Kind::CubicRational: {
      const double u = t + 1.0;
      return checked(std::pow(t, p - 1.0) * ((p - 1.0) * t + p) / (u * u), t);
    }
  }
  return 0.0;
}

double Generator::deriv2(double t) const {
  require_nonnegative(t);
  if (!family_) return eval(d2_, t);
  const BuiltinFamily& f = *family_;
  const double p = f.p;
  switch (f.kind) {
    case BuiltinFamily::Kind::Power:
      if (p == 1.0) return 0.0;
      if (p == 2.0) return 2.0;
      return checked(p * (p - 1.0) * std::pow(t, p - 2.0), t);
    case BuiltinFamily::Kind::ExpMinusOne:
      return checked(c_ * c_ * std::exp(c_ * t), t);
    case BuiltinFamily::Kind::PowerTimesExp: {
      const double ct = c_ * t;
      return checked(std::exp(ct) * std::pow(t, p - 2.0) * (p * (p - 1.0) + 2.0 * p * ct + ct * ct), t);
    }
    case BuiltinFamily::Kind::CubicRational: {
      const double u = t + 1.0;
      return checked(p * (p - 1.0) * std::pow(t, p - 2.0) / u - 2.0 * p * std::pow(t, p - 1.0) / (u * u) +
                         2.0 * std::pow(t, p) / (u * u * u),
                     t);
    }
  }
  return 0.0;
}

bool Generator::has_closed_form_inverse() const noexcept {
  return family_ && (family_->kind == BuiltinFamily::Kind::Power || family_->kind == BuiltinFamily::Kind::ExpMinusOne);
}

bool Generator::is_natural_exp_minus_one() const {
  if (family_) return family_->kind == BuiltinFamily::Kind::ExpMinusOne && family_->a == std::numbers::e;
  static const Expr natural = parse("exp(t)-1");
  return phi_ == natural;
}

double Generator::inverse(double y) const {
  if (!(y >= 0.0)) throw InvalidArgument("inverse needs y >= 0, got " + format_double(y));
  if (y > phi_max_)
    throw OverflowError("inverse of " + format_double(y) + " exceeds phi(T_max) = " + format_double(phi_max_) +
                        " (searched t in [0, " + format_double(t_max_) + "])");
  if (!has_closed_form_inverse()) return inverse_numeric(y);
  if (family_->kind == BuiltinFamily::Kind::ExpMinusOne) return std::log1p(y) / c_;
  const double p = family_->p;
  if (p == 1.0) return y;
  if (p == 2.0) return std::sqrt(y);
  if (p == 3.0) return std::cbrt(y);
  return std::pow(y, 1.0 / p);
}

double Generator::inverse_numeric(double y) const {
  if (!(y >= 0.0)) throw InvalidArgument("inverse needs y >= 0, got " + format_double(y));
  if (y == 0.0) return 0.0;
  if (y > phi_max_)
    throw OverflowError("inverse of " + format_double(y) + " exceeds phi(T_max) = " + format_double(phi_max_) +
                        " (searched t in [0, " + format_double(t_max_) + "])");

  // Bracket [lo, hi] with phi(lo) <= y <= phi(hi), grown or shrunk geometrically from [0, 1].
  double lo = 0.0, hi = std::min(1.0, t_max_);
  if (value(hi) < y) {
    while (value(hi) < y) {
      lo = hi;
      hi = std::min(2.0 * hi, t_max_);
      if (lo == t_max_) throw OverflowError("inverse bracket exceeded T_max = " + format_double(t_max_));
    }
  } else {
    while (hi > std::numeric_limits<double>::min() && value(0.5 * hi) >= y) hi *= 0.5;
    lo = 0.5 * hi;
    if (value(lo) > y) lo = 0.0;
  }

  // Safeguarded Newton: bisect whenever the step leaves the bracket or fails
  // to halve the previous step (slow Newton on steep exponentials).
  double t = 0.5 * (lo + hi);
  double step_old = hi - lo;
  for (int it = 0; it < kNewtonCap; ++it) {
    const double f = value(t) - y;
    if (f == 0.0) return t;
    (f > 0.0 ? hi : lo) = t;
    if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * hi) break;
    double next = 0.5 * (lo + hi);
    double d = 0.0;
    try {
      d = deriv1(t);
    } catch (const Error&) {
      d = 0.0;
    }
    if (d > 0.0 && std::isfinite(d)) {
      const double newton = t - f / d;
      if (newton > lo && newton < hi && 2.0 * std::fabs(f / d) <= step_old) next = newton;
    }
    step_old = std::fabs(next - t);
    if (next == t) break;
    t = next;
  }
  const double flo = std::fabs(value(lo) - y), fhi = std::fabs(value(hi) - y), ft = std::fabs(value(t) - y);
  if (ft <= flo && ft <= fhi) return t;
  return flo <= fhi ? lo : hi;
}

}  // namespace uconvex
