#include "uconvex/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "uconvex/conditions.hpp"
#include "uconvex/error.hpp"
#include "uconvex/format.hpp"
#include "uconvex/io.hpp"
#include "uconvex/modulus.hpp"
#include "uconvex/oracle.hpp"
#include "uconvex/paranorm.hpp"
#include "uconvex/rng.hpp"

namespace uconvex {

namespace {

struct Config {
  std::string command;
  std::string phi;
  std::string weights = "1,1";
  std::string grid;
  std::string r = "1";
  std::string eps;
  std::string eps_frac;
  std::string out;
  std::string format = "json";
  std::string method;
  std::string psi;
  std::string base = "closed";
  std::size_t samples = 0;
  std::size_t n = 64;
  std::uint64_t seed = 1;
  double inflate = 1.0;
};

// Output of one command: the JSON document and the CSV text.
struct Output {
  Json results = Json::array();
  Json extra = Json::object();
  std::string csv;
  int code = kExitOk;
};

double to_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw InvalidArgument("invalid number '" + std::string(s) + "' for " + std::string(what));
  return v;
}

// "a,b,c" or "lo:hi:n" (n evenly spaced values, endpoints included).
std::vector<double> parse_values(std::string_view text, std::string_view what) {
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    std::vector<std::string_view> parts;
    while (true) {
      const auto c = text.find(':');
      parts.push_back(text.substr(0, c));
      if (c == std::string_view::npos) break;
      text.remove_prefix(c + 1);
    }
    if (parts.size() != 3) throw InvalidArgument(std::string(what) + " range must be lo:hi:n");
    const double lo = to_double(parts[0], what), hi = to_double(parts[1], what);
    const double nd = to_double(parts[2], what);
    if (nd < 1 || nd != std::floor(nd)) throw InvalidArgument(std::string(what) + " range needs an integer n >= 1");
    const auto n = static_cast<std::size_t>(nd);
    for (std::size_t i = 0; i < n; ++i)
      out.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    return out;
  }
  while (true) {
    const auto c = text.find(',');
    out.push_back(to_double(text.substr(0, c), what));
    if (c == std::string_view::npos) break;
    text.remove_prefix(c + 1);
  }
  return out;
}

std::vector<std::pair<double, double>> query_points(const Config& cfg) {
  const auto rs = parse_values(cfg.r, "--r");
  std::vector<std::pair<double, double>> pts;
  if (!cfg.eps.empty() && !cfg.eps_frac.empty()) throw InvalidArgument("give either --eps or --eps-frac, not both");
  if (cfg.eps.empty() && cfg.eps_frac.empty()) throw InvalidArgument("--eps or --eps-frac is required");
  const bool frac = !cfg.eps_frac.empty();
  const auto es = parse_values(frac ? cfg.eps_frac : cfg.eps, frac ? "--eps-frac" : "--eps");
  for (double r : rs)
    for (double e : es) pts.emplace_back(r, frac ? 2.0 * r * e : e);
  return pts;
}

Grid2 grid_for(const Config& cfg, const Generator& g) {
  return cfg.grid.empty() ? default_grid(g) : fit_grid(Grid2::parse(cfg.grid), g);
}

Json config_echo(const Config& cfg) {
  Json j;
  j["command"] = cfg.command;
  j["phi"] = cfg.phi;
  j["weights"] = cfg.weights;
  j["grid"] = cfg.grid;
  j["r"] = cfg.r;
  j["eps"] = cfg.eps;
  j["eps_frac"] = cfg.eps_frac;
  j["method"] = cfg.method;
  j["psi"] = cfg.psi;
  j["base"] = cfg.base;
  j["samples"] = cfg.samples;
  j["n"] = cfg.n;
  j["seed"] = cfg.seed;
  j["format"] = cfg.format;
  if (cfg.inflate != 1.0) j["inflate_delta"] = cfg.inflate;
  return j;
}

std::string csv_join(const std::vector<double>& v, char sep = ';') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += format_double(v[i]);
  }
  return s;
}

void add_report(Output& o, const ConditionReport& rep) {
  o.results.push_back(to_json(rep));
  o.csv += rep.name + "," + to_string(rep.verdict) + "," + format_double(rep.worst_margin) + "," +
           csv_join(rep.witness) + "," + std::to_string(rep.evaluated) + "," + std::to_string(rep.excluded) + "\n";
}

// ---------------------------------------------------------------------------

Output cmd_audit(const Config& cfg) {
  const Generator g = Generator::from_spec(cfg.phi);
  const Grid2 grid = grid_for(cfg, g);
  Output o;
  o.csv = "name,verdict,margin,witness,evaluated,excluded\n";
  for (Condition c : {Condition::Superquadratic, Condition::Subquadratic, Condition::Convex, Condition::StrictlyConvex,
                      Condition::GeometricConvex, Condition::RatioSuperadditive, Condition::RatioSubadditive,
                      Condition::FConcave, Condition::GConvex, Condition::HConvex, Condition::HSubadditive,
                      Condition::HHessianSufficient, Condition::AbsSumIdentity})
    add_report(o, check(c, g, grid));
  const ParanormContext ctx(g, MeasureSpace::parse(cfg.weights));
  const AxiomAudit ax = audit_axioms(ctx, cfg.samples ? cfg.samples : 2000, cfg.seed);
  for (const ConditionReport* rep : {&ax.symmetry, &ax.subadditivity, &ax.continuity}) {
    ConditionReport copy = *rep;
    copy.name = "paranorm-" + copy.name;
    add_report(o, copy);
  }
  o.extra["generator"] = g.name();
  o.extra["t_max"] = number(g.t_max());
  o.extra["grid"] = grid.describe();
  return o;
}

Output cmd_certify(const Config& cfg) {
  const Generator g = Generator::from_spec(cfg.phi);
  const MeasureSpace m = MeasureSpace::parse(cfg.weights);
  const Certificate cert = certify(g, m, grid_for(cfg, g));
  Output o;
  o.extra["certificate"] = to_json(cert);
  o.csv = "kind,route\n";
  for (auto r : cert.paranorm_routes) o.csv += std::string("paranorm,") + to_string(r) + "\n";
  for (auto r : cert.uc_routes) o.csv += std::string("uniform-convexity,") + to_string(r) + "\n";
  for (const auto& rep : cert.evidence) o.results.push_back(to_json(rep));
  return o;
}

// Route gate shared by modulus and verify; returns the modulus function.
ModulusFn modulus_for(Method method, const Generator& g, const MeasureSpace& m, const Config& cfg) {
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) throw RouteUnavailable(what);
  };
  switch (method) {
    case Method::ClosedForm: {
      const Certificate cert = certify(g, m, grid_for(cfg, g));
      require(cert.has(UcRoute::Superquadratic),
              "closed-form modulus needs the superquadratic-closed-form route (a paranorm route and a superquadratic "
              "generator); certification did not establish it");
      return [g](double r, double e) { return delta_closed_form(g, r, e); };
    }
    case Method::Implicit: {
      const Certificate cert = certify(g, m, grid_for(cfg, g));
      require(cert.has(UcRoute::HCondition),
              "implicit modulus needs the H-condition-implicit route (strictly convex generator with H convex on a "
              "sub-probability space or H subadditive on integer weights); certification did not establish it");
      return [g](double r, double e) { return delta_implicit(g, r, e).delta; };
    }
    case Method::ExpPlane:
      require(g.is_natural_exp_minus_one() && m.weights() == std::vector<double>{1.0, 1.0},
              "exp-plane modulus needs phi(t) = e^t - 1 with weights 1,1");
      return [](double r, double e) { return exp_plane_modulus(r, e); };
    case Method::Lp:
      require(g.family() && g.family()->kind == BuiltinFamily::Kind::Power,
              "lp modulus needs a power generator");
      {
        const Certificate cert = certify(g, m, grid_for(cfg, g));
        require(cert.has(UcRoute::Superquadratic), "lp modulus needs the superquadratic-closed-form route");
      }
      return [p = g.family()->p](double r, double e) { return delta_lp(p, r, e); };
    case Method::Psi: {
      if (cfg.psi.empty()) throw InvalidArgument("method psi needs --psi");
      const Method base = method_from_name(cfg.base);
      if (base == Method::Psi || base == Method::Empirical) throw InvalidArgument("--base must be an explicit modulus");
      ModulusFn inner = modulus_for(base, g, m, cfg);
      const Generator psi = Generator::from_spec(cfg.psi);
      return [inner, psi](double r, double e) { return delta_psi_transform(inner, psi, r, e); };
    }
    case Method::Empirical:
      break;
  }
  throw InvalidArgument("method has no closed modulus");
}

Output cmd_modulus(const Config& cfg) {
  if (cfg.method.empty()) throw InvalidArgument("--method is required");
  const Generator g = Generator::from_spec(cfg.phi);
  const MeasureSpace m = MeasureSpace::parse(cfg.weights);
  const Method method = method_from_name(cfg.method);
  const auto pts = query_points(cfg);
  Output o;
  o.csv = "r,eps,method,delta,residual\n";
  auto emit = [&](double r, double e, double delta, double residual, const Json& more) {
    Json j;
    j["name"] = "r=" + format_double(r) + ",eps=" + format_double(e);
    j["verdict"] = "computed";
    j["margin"] = number(residual);
    j["witness"] = Json::array({number(r), number(e)});
    j["r"] = number(r);
    j["eps"] = number(e);
    j["method"] = to_string(method);
    j["delta"] = number(delta);
    j["residual"] = number(residual);
    for (auto it = more.begin(); it != more.end(); ++it) j[it.key()] = it.value();
    o.results.push_back(j);
    o.csv += format_double(r) + "," + format_double(e) + "," + to_string(method) + "," + format_double(delta) + "," +
             format_double(residual) + "\n";
  };
  const double nan = std::numeric_limits<double>::quiet_NaN();

  if (method == Method::Empirical) {
    const Certificate cert = certify(g, m, grid_for(cfg, g));
    if (cert.paranorm_routes.empty())
      throw RouteUnavailable("empirical modulus needs a certified paranorm (no paranorm route established)");
    const ParanormContext ctx(g, m);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto [r, e] = pts[i];
      const OracleResult res = empirical_modulus(ctx, r, e, cfg.samples ? cfg.samples : 20000, mix64(cfg.seed + i));
      emit(r, e, res.delta_hat, nan, Json{{"oracle", to_json(res)}});
    }
    return o;
  }

  if (method == Method::Implicit) {
    // Gate first so a missing route reports exit 3 before any solve.
    modulus_for(method, g, m, cfg);
    for (const auto& [r, e] : pts) {
      const ImplicitDelta d = delta_implicit(g, r, e);
      emit(r, e, d.delta, d.residual, Json::object());
    }
    return o;
  }
  const ModulusFn fn = modulus_for(method, g, m, cfg);
  for (const auto& [r, e] : pts) emit(r, e, fn(r, e), nan, Json::object());
  return o;
}

Output cmd_verify(const Config& cfg) {
  if (cfg.method.empty()) throw InvalidArgument("--method is required");
  const Generator g = Generator::from_spec(cfg.phi);
  const MeasureSpace m = MeasureSpace::parse(cfg.weights);
  const Method method = method_from_name(cfg.method);
  if (method == Method::Empirical) throw InvalidArgument("verify compares an explicit modulus; empirical is not one");
  ModulusFn fn = modulus_for(method, g, m, cfg);
  if (cfg.inflate != 1.0) fn = [fn, f = cfg.inflate](double r, double e) { return f * fn(r, e); };
  const ParanormContext ctx(g, m);
  const auto pts = query_points(cfg);
  const LowerBoundReport rep = check_lower_bound(ctx, fn, pts, cfg.samples ? cfg.samples : 20000, cfg.seed);

  Output o;
  const std::size_t k = m.size();
  o.csv = "r,eps,delta_theory,delta_empirical,violation_flag";
  for (std::size_t i = 0; i < k; ++i) o.csv += ",x" + std::to_string(i + 1);
  for (std::size_t i = 0; i < k; ++i) o.csv += ",y" + std::to_string(i + 1);
  o.csv += "\n";
  Json warnings = Json::array();
  for (const auto& row : rep.rows) {
    Json j;
    j["name"] = "r=" + format_double(row.r) + ",eps=" + format_double(row.eps);
    j["verdict"] = row.violation ? "violation" : "bound-holds";
    j["margin"] = number(row.delta_empirical - row.delta_theory);
    std::vector<double> w = row.oracle.x;
    w.insert(w.end(), row.oracle.y.begin(), row.oracle.y.end());
    Json wj = Json::array();
    for (double v : w) wj.push_back(number(v));
    j["witness"] = wj;
    j["delta_theory"] = number(row.delta_theory);
    j["delta_empirical"] = number(row.delta_empirical);
    j["oracle"] = to_json(row.oracle);
    o.results.push_back(j);
    if (row.oracle.low_coverage)
      warnings.push_back("low coverage at r=" + format_double(row.r) + ", eps=" + format_double(row.eps) + ": " +
                         std::to_string(row.oracle.feasible) + " feasible pairs");
    o.csv += format_double(row.r) + "," + format_double(row.eps) + "," + format_double(row.delta_theory) + "," +
             format_double(row.delta_empirical) + "," + (row.violation ? "1" : "0");
    for (double v : w) o.csv += "," + format_double(v);
    o.csv += "\n";
  }
  o.extra["violations"] = rep.violations;
  o.extra["warnings"] = warnings;
  o.code = rep.violations > 0 ? kExitViolation : kExitOk;
  return o;
}

Output cmd_ball(const Config& cfg) {
  const Generator g = Generator::from_spec(cfg.phi);
  const MeasureSpace m = MeasureSpace::parse(cfg.weights);
  if (m.size() != 2) throw InvalidArgument("ball needs exactly two weights, got " + std::to_string(m.size()));
  const ParanormContext ctx(g, m);
  const auto rs = parse_values(cfg.r, "--r");
  if (rs.size() != 1) throw InvalidArgument("ball takes a single --r");
  const double r = rs[0];
  const std::size_t n = cfg.n;
  const auto pts = ball_boundary(ctx, r, n);

  // Symmetry audit before anything is written.
  const double tol = 1e-9 * std::max(1.0, r);
  const bool diagonal = m.weights()[0] == m.weights()[1];
  auto close = [&](std::array<double, 2> a, std::array<double, 2> b) {
    return std::fabs(a[0] - b[0]) <= tol && std::fabs(a[1] - b[1]) <= tol;
  };
  for (std::size_t j = 0; j < n; ++j) {
    const auto [x1, x2] = pts[j];
    std::vector<std::array<double, 2>> mirrors = {{-x1, x2}, {x1, -x2}, {-x1, -x2}};
    if (diagonal) mirrors.push_back({x2, x1});
    for (const auto& q : mirrors)
      if (std::fabs(ctx.pnorm(q) - r) > tol) throw Error("ball symmetry check failed at point " + std::to_string(j));
    if (n % 4 == 0) {
      const bool ok = close(pts[(n - j) % n], {x1, -x2}) && close(pts[(n / 2 + n - j) % n], {-x1, x2}) &&
                      close(pts[(j + n / 2) % n], {-x1, -x2});
      if (!ok) throw Error("ball point set is not mirror symmetric at point " + std::to_string(j));
    }
  }

  Output o;
  o.csv = "theta,x1,x2\n";
  for (std::size_t j = 0; j < n; ++j) {
    const double theta = 2.0 * 3.141592653589793 * static_cast<double>(j) / static_cast<double>(n);
    o.csv += format_double(theta) + "," + format_double(pts[j][0]) + "," + format_double(pts[j][1]) + "\n";
    Json p;
    p["theta"] = number(theta);
    p["x1"] = number(pts[j][0]);
    p["x2"] = number(pts[j][1]);
    o.results.push_back(p);
  }
  o.extra["symmetry"] = diagonal ? "axes and diagonal verified" : "axes verified";
  return o;
}

void add_common(CLI::App* sub, Config& cfg, bool weights, bool grid) {
  sub->add_option("--phi", cfg.phi, "generator: power:p=V, exp:a=V, powexp:p=V,a=V, cubicrational:p=V, expr:TEXT")
      ->required();
  if (weights) sub->add_option("--weights", cfg.weights, "point masses, e.g. 1,1 or weights=1,1");
  if (grid) sub->add_option("--grid", cfg.grid, "audit grid lo:hi:n:log|lin");
  sub->add_option("--out", cfg.out, "output file (default: stdout)");
  sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Uniform convexity toolkit for phi-paranormed spaces", "uconvex"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  auto* audit = app.add_subcommand("audit", "check every generator condition on a grid");
  add_common(audit, cfg, true, true);
  audit->add_option("--samples", cfg.samples, "random pairs for the paranorm axiom audit");
  audit->add_option("--seed", cfg.seed, "seed");

  auto* cert = app.add_subcommand("certify", "list the routes to paranorm and uniform convexity");
  add_common(cert, cfg, true, true);

  auto* modulus = app.add_subcommand("modulus", "tabulate a modulus of convexity");
  add_common(modulus, cfg, true, true);
  modulus->add_option("--method", cfg.method, "closed, implicit, exp-plane, psi, lp or empirical");
  modulus->add_option("--r", cfg.r, "radii: a,b,c or lo:hi:n");
  modulus->add_option("--eps", cfg.eps, "separations: a,b,c or lo:hi:n");
  modulus->add_option("--eps-frac", cfg.eps_frac, "separations as fractions of 2r");
  modulus->add_option("--psi", cfg.psi, "outer generator for method psi");
  modulus->add_option("--base", cfg.base, "base method for method psi");
  modulus->add_option("--samples", cfg.samples, "samples per point for method empirical");
  modulus->add_option("--seed", cfg.seed, "seed");

  auto* verify = app.add_subcommand("verify", "check a modulus against the empirical search");
  add_common(verify, cfg, true, true);
  verify->add_option("--method", cfg.method, "closed, implicit, exp-plane, psi or lp");
  verify->add_option("--r", cfg.r, "radii: a,b,c or lo:hi:n");
  verify->add_option("--eps", cfg.eps, "separations: a,b,c or lo:hi:n");
  verify->add_option("--eps-frac", cfg.eps_frac, "separations as fractions of 2r");
  verify->add_option("--psi", cfg.psi, "outer generator for method psi");
  verify->add_option("--base", cfg.base, "base method for method psi");
  verify->add_option("--samples", cfg.samples, "samples per point (default 20000)");
  verify->add_option("--seed", cfg.seed, "seed");
  verify->add_option("--inflate-delta", cfg.inflate)->group("");

  auto* ball = app.add_subcommand("ball", "sample the sphere {p = r} in the plane");
  add_common(ball, cfg, true, false);
  ball->add_option("--r", cfg.r, "radius");
  ball->add_option("--n", cfg.n, "number of points (>= 4)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  Output o;
  try {
    if (audit->parsed()) {
      cfg.command = "audit";
      o = cmd_audit(cfg);
    } else if (cert->parsed()) {
      cfg.command = "certify";
      o = cmd_certify(cfg);
    } else if (modulus->parsed()) {
      cfg.command = "modulus";
      o = cmd_modulus(cfg);
    } else if (verify->parsed()) {
      cfg.command = "verify";
      o = cmd_verify(cfg);
    } else {
      cfg.command = "ball";
      o = cmd_ball(cfg);
    }
  } catch (const RouteUnavailable& e) {
    err << "route unavailable: " << e.what() << "\n";
    return kExitRoute;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  std::string text;
  if (cfg.format == "csv") {
    text = o.csv;
  } else {
    Json doc;
    doc["tool_version"] = kToolVersion;
    doc["config_echo"] = config_echo(cfg);
    for (auto it = o.extra.begin(); it != o.extra.end(); ++it) doc[it.key()] = it.value();
    doc["results"] = o.results;
    text = doc.dump(2) + "\n";
  }
  if (cfg.out.empty()) {
    out << text;
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f || !(f << text)) {
      err << "error: cannot write " << cfg.out << "\n";
      return kExitInput;
    }
  }
  return o.code;
}

}  // namespace uconvex
