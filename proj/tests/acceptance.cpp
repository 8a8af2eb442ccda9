// Acceptance run: one PASS/FAIL line per criterion, each with its runtime.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "oracles.hpp"
#include "uconvex/cli.hpp"
#include "uconvex/conditions.hpp"
#include "uconvex/modulus.hpp"
#include "uconvex/oracle.hpp"

using namespace uconvex;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(const char* id, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) {
    o.pass = false;
    o.detail += " [over budget " + std::to_string(budget_s) + " s]";
  }
  std::printf("%s %s (%.3f s) %s\n", id, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::vector<std::pair<double, double>> delta_grid(int n, double rlo, double rhi) {
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < n; ++i) {
    const double r = rlo + (rhi - rlo) * i / (n - 1);
    for (int j = 1; j <= n; ++j) out.emplace_back(r, 2.0 * r * j / (n + 1));
  }
  return out;
}

// (r, eps) with e^eps - 1 < 2(e^r - 1).
std::vector<std::pair<double, double>> delta_phi_grid(int n, double rlo, double rhi) {
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < n; ++i) {
    const double r = rlo + (rhi - rlo) * i / (n - 1);
    const double emax = std::log1p(2.0 * std::expm1(r));
    for (int j = 1; j <= n; ++j) out.emplace_back(r, emax * j / (n + 1));
  }
  return out;
}

std::vector<std::pair<double, double>> grid5() {
  std::vector<std::pair<double, double>> out;
  for (double r : {0.5, 1.0, 1.5, 2.0, 3.0})
    for (double f : {0.1, 0.3, 0.5, 0.7, 0.9}) out.emplace_back(r, 2.0 * r * f);
  return out;
}

}  // namespace

int main() {
  criterion("AC1", 1.0, [] {
    const Generator e = Generator::from_spec("exp");
    const double l2 = std::numbers::ln2;
    const ConditionReport rep = check_points(Condition::Superquadratic, e, {{2 * l2, 0.5 * l2}});
    const double expected = (std::pow(2.0, 2.5) + std::pow(2.0, 1.5) - 2.0) - (4.0 + 2.0 * std::sqrt(2.0));
    const bool ok = !rep.holds() && std::fabs(rep.worst_margin - expected) <= 1e-9;
    return Outcome{ok, fmt("superquadratic margin %.12f, expected %.12f", rep.worst_margin, expected)};
  });

  criterion("AC2", 1.0, [] {
    const Generator e = Generator::from_spec("exp");
    const ConditionReport rep = check_points(Condition::HSubadditive, e, {{1.0, 1.0, 1.0, 1.0}});
    const ConditionReport grid = check_H_subadditive(e, default_grid(e));
    const bool ok = !rep.holds() && !grid.holds() && std::fabs(rep.lesser - 8.0) <= 1e-9 &&
                    std::fabs(rep.greater - 6.0) <= 1e-9;
    return Outcome{ok, fmt("H(2,2) = %.12f, 2H(1,1) = %.12f", rep.lesser, rep.greater)};
  });

  criterion("AC3", 1.0, [] {
    using Big = boost::multiprecision::cpp_bin_float_50;
    double worst = 0.0;
    for (double p : {2.0, 2.5, 3.0, 4.0}) {
      const Generator g = Generator::make(BuiltinFamily::power(p));
      for (const auto& [r, eps] : delta_grid(10, 0.1, 10.0)) {
        const Big R(r), E(Big(eps) / 2), P(p);
        const double ref = static_cast<double>(R - pow(pow(R, P) - pow(E, P), 1 / P));
        worst = std::max(worst, std::fabs(delta_closed_form(g, r, eps) - ref) / ref);
      }
    }
    return Outcome{worst <= 1e-12, fmt("max relative error %.3e over 4 x 100 points", worst)};
  });

  criterion("AC4", 30.0, [] {
    double worst = 0.0;
    int endpoint = 0, strict_min = 0, total = 0;
    for (const auto& [r, eps] : delta_phi_grid(20, 0.2, 5.0)) {
      const ArcResult a = arc_max_exp(r, eps);
      worst = std::max(worst, std::fabs(a.result.worst_midpoint - (r - exp_plane_delta0(r, eps))));
      endpoint += a.argmax_at_endpoint;
      strict_min += a.critical_is_strict_min;
      ++total;
    }
    const bool ok = worst <= 1e-8 && endpoint == total && strict_min == total;
    return Outcome{ok, fmt("max |arc max - (r - delta0)| = %.3e; ", worst) +
                           std::to_string(endpoint) + "/" + std::to_string(total) + " endpoint argmax, " +
                           std::to_string(strict_min) + "/" + std::to_string(total) + " strict interior minimum"};
  });

  criterion("AC5", 5.0, [] {
    int bad = 0;
    double smallest = INFINITY;
    for (double r : {0.5, 1.0, 2.0, 4.0}) {
      const double emax = std::log1p(2.0 * std::expm1(r));
      double prev = exp_plane_delta0(r, emax / 51.0);
      for (int j = 2; j <= 50; ++j) {
        const double d = exp_plane_delta0(r, emax * j / 51.0);
        if (!(d > prev)) ++bad;
        smallest = std::min(smallest, d - prev);
        prev = d;
      }
    }
    return Outcome{bad == 0, fmt("%.0f non-increasing steps; smallest step %.3e", bad, smallest)};
  });

  criterion("AC6", 180.0, [] {
    constexpr std::size_t kSamples = 20000;
    std::string detail;
    bool ok = true;
    auto run = [&](const char* label, const char* spec, std::vector<double> w, Method m, double inflate, bool expect_clean) {
      const Generator g = Generator::from_spec(spec);
      const MeasureSpace space(w);
      const Certificate cert = certify(g, space);
      ModulusFn fn;
      bool routed = false;
      switch (m) {
        case Method::ClosedForm:
          routed = cert.has(UcRoute::Superquadratic);
          fn = [g](double r, double e) { return delta_closed_form(g, r, e); };
          break;
        case Method::Implicit:
          routed = cert.has(UcRoute::HCondition);
          fn = [g](double r, double e) { return delta_implicit(g, r, e).delta; };
          break;
        default:
          routed = cert.has(UcRoute::ExpPlaneExact);
          fn = exp_plane_modulus;
      }
      if (inflate != 1.0) fn = [fn, inflate](double r, double e) { return inflate * fn(r, e); };
      const LowerBoundReport rep = check_lower_bound(ParanormContext(g, space), fn, grid5(), kSamples, 1);
      const bool good = routed && (expect_clean ? rep.violations == 0 : rep.violations > 0);
      ok = ok && good;
      detail += std::string(label) + ": " + std::to_string(rep.violations) + " violations" + (routed ? "" : " (no route)") +
                (rep.any_low_coverage ? " (low coverage)" : "") + "; ";
    };
    run("power(3) closed", "power:p=3", {1, 1}, Method::ClosedForm, 1.0, true);
    run("power(1.5) implicit", "power:p=1.5", {0.5, 0.4}, Method::Implicit, 1.0, true);
    run("exp exact", "exp", {1, 1}, Method::ExpPlane, 1.0, true);
    run("power(2) closed x1.5", "power:p=2", {1, 1}, Method::ClosedForm, 1.5, false);
    return Outcome{ok, detail};
  });

  criterion("AC7", 2.0, [] {
    double worst = 0.0;
    for (const char* spec : {"power:p=1.5", "cubicrational:p=3"}) {
      const Generator g = Generator::from_spec(spec);
      for (const auto& [r, eps] : delta_grid(10, 0.1, 10.0)) {
        const ImplicitDelta d = delta_implicit(g, r, eps);
        const double u = r - d.delta, v = eps / 2;
        const double res = std::fabs(g.value(u + v) + g.value(std::fabs(u - v)) - 2.0 * g.value(r));
        worst = std::max(worst, res / g.value(r));
      }
    }
    return Outcome{worst <= 1e-10, fmt("max residual / phi(r) = %.3e", worst)};
  });

  criterion("AC8", 10.0, [] {
    struct Row {
      const char* spec;
      std::vector<Condition> conds;
    };
    const std::vector<Row> table{
        {"power:p=2", {Condition::Superquadratic}},
        {"power:p=2.5", {Condition::Superquadratic}},
        {"power:p=3", {Condition::Superquadratic}},
        {"power:p=4", {Condition::Superquadratic}},
        {"power:p=1.2", {Condition::Subquadratic}},
        {"power:p=1.5", {Condition::Subquadratic}},
        {"power:p=2", {Condition::Subquadratic}},
        {"exp:a=2", {Condition::Convex, Condition::GeometricConvex}},
        {"exp", {Condition::Convex, Condition::GeometricConvex}},
        {"exp:a=10", {Condition::Convex, Condition::GeometricConvex}},
        {"powexp:p=1", {Condition::Convex, Condition::GeometricConvex}},
        {"powexp:p=2,a=2", {Condition::Convex, Condition::GeometricConvex}},
        {"expr:t^3/(t+1)", {Condition::Superquadratic, Condition::RatioSuperadditive}},
        {"expr:t^2*exp(t)", {Condition::Superquadratic}},
    };
    int held = 0, total = 0;
    std::string missing;
    for (const auto& row : table) {
      const Generator g = Generator::from_spec(row.spec);
      for (Condition c : row.conds) {
        ++total;
        if (check(c, g, default_grid(g)).holds()) {
          ++held;
        } else {
          missing += std::string(" ") + row.spec + "/" + condition_name(c);
        }
      }
    }
    return Outcome{held == total, std::to_string(held) + "/" + std::to_string(total) + " verdicts as expected" + missing};
  });

  criterion("AC9", 5.0, [] {
    int bad = 0, checked = 0;
    auto fd_agree = [&](const Expr& e, double x) {
      const Expr d = differentiate(e);
      double fd = 0.0;
      try {
        fd = oracle::derivative([&](double u) { return eval(e, u); }, x);
      } catch (const std::exception&) {
        return;
      }
      ++checked;
      if (std::fabs(eval(d, x) - fd) > 1e-6 * std::max(1.0, std::fabs(fd))) ++bad;
    };
    std::vector<Expr> exprs;
    for (const char* src : {"t^2", "t^2.5", "exp(t)-1", "exp(0.69314718055994529*t)-1", "t*exp(t)", "t^2*exp(t)",
                            "t^3/(t+1)"})
      exprs.push_back(parse(src));
    oracle::RandomExpr gen(2024);
    for (int i = 0; i < 50; ++i) exprs.push_back(gen.make(3));
    int roundtrip_bad = 0;
    for (const Expr& e : exprs) {
      if (!(parse(to_string(e)) == e)) ++roundtrip_bad;
      for (int k = 0; k < 25; ++k) fd_agree(e, std::exp(std::log(0.05) + (std::log(5.0) - std::log(0.05)) * k / 24.0));
    }
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 10000; ++i) pts.push_back({u(rng), u(rng)});
    const ConditionReport id = check_points(Condition::AbsSumIdentity, Generator::from_spec("exp"), pts);
    const double rel = id.worst_margin / std::max({1.0, std::fabs(id.greater), std::fabs(id.lesser)});
    const bool ok = bad == 0 && roundtrip_bad == 0 && rel <= 1e-12 && id.evaluated == 10000;
    return Outcome{ok, std::to_string(exprs.size()) + " trees, " + std::to_string(roundtrip_bad) + " roundtrip and " +
                           std::to_string(bad) + "/" + std::to_string(checked) + " derivative mismatches; " +
                           fmt("identity max gap %.3e (relative)", rel)};
  });

  criterion("AC10", 60.0, [] {
    const std::vector<std::string> args{"verify", "--phi", "exp", "--method", "exp-plane", "--r", "0.5:2:3",
                                        "--eps-frac", "0.2:0.8:3", "--samples", "5000", "--seed", "2024"};
    std::ostringstream a, b, ea, eb;
    const int ca = run_cli(args, a, ea), cb = run_cli(args, b, eb);
    const bool ok = ca == 0 && cb == 0 && a.str() == b.str() && !a.str().empty();
    return Outcome{ok, std::to_string(a.str().size()) + " bytes, " + (a.str() == b.str() ? "identical" : "different")};
  });

  return failures == 0 ? 0 : 1;
}
