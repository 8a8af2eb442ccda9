#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "uconvex/cli.hpp"
#include "uconvex/io.hpp"

using namespace uconvex;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

Json json_of(const Run& r) { return Json::parse(r.out); }

const Json* result_named(const Json& doc, const std::string& name) {
  for (const auto& r : doc["results"])
    if (r["name"] == name) return &r;
  return nullptr;
}

std::vector<std::string> routes(const Json& doc, const char* key) {
  std::vector<std::string> out;
  for (const auto& r : doc["certificate"][key]) out.push_back(r.get<std::string>());
  return out;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("report schema") {
    const Run r = run({"audit", "--phi", "power:p=3"});
    REQUIRE(r.code == kExitOk);
    const Json doc = json_of(r);
    auto it = doc.begin();
    CHECK(it.key() == "tool_version");
    CHECK((++it).key() == "config_echo");
    CHECK(doc["tool_version"] == kToolVersion);
    CHECK(doc["config_echo"]["phi"] == "power:p=3");
    CHECK(doc.back().is_array());
    for (const auto& res : doc["results"])
      for (const char* k : {"name", "verdict", "margin", "witness"}) CHECK(res.contains(k));
    REQUIRE(result_named(doc, "superquadratic"));
    CHECK((*result_named(doc, "superquadratic"))["verdict"] == "holds-on-grid");
  }

  TEST_CASE("audit examples") {
    const Json e = json_of(run({"audit", "--phi", "exp:a=2.71828182845904523536"}));
    const Json& sq = *result_named(e, "superquadratic");
    CHECK(sq["verdict"] == "fails");
    CHECK(sq["margin"].get<double>() < 0.0);
    const Json c = json_of(run({"audit", "--phi", "expr:t^3/(t+1)"}));
    CHECK((*result_named(c, "ratio-superadditive"))["verdict"] == "holds-on-grid");
  }

  TEST_CASE("audit exits 0 whatever the verdicts") {
    CHECK(run({"audit", "--phi", "exp", "--grid", "0.01:3:20:lin"}).code == kExitOk);
  }

  TEST_CASE("certify examples") {
    const Json e = json_of(run({"certify", "--phi", "exp", "--weights", "1,1"}));
    const auto ep = routes(e, "paranorm_routes"), eu = routes(e, "uniform_convexity_routes");
    CHECK(contains(ep, "convex-geometric"));
    CHECK(contains(eu, "strictly-convex-finite-dim"));
    CHECK(contains(eu, "exp-plane-exact"));
    CHECK_FALSE(contains(eu, "superquadratic-closed-form"));
    CHECK_FALSE(contains(eu, "H-condition-implicit"));

    const Json p2 = json_of(run({"certify", "--phi", "power:p=2", "--weights", "1,1"}));
    CHECK(contains(routes(p2, "paranorm_routes"), "convex-geometric"));
    CHECK(contains(routes(p2, "uniform_convexity_routes"), "superquadratic-closed-form"));
    CHECK(contains(routes(p2, "uniform_convexity_routes"), "strictly-convex-finite-dim"));

    const Json p3 = json_of(run({"certify", "--phi", "power:p=3", "--weights", "0.5,0.3"}));
    CHECK(contains(routes(p3, "paranorm_routes"), "F-concave"));
    CHECK(contains(routes(p3, "uniform_convexity_routes"), "superquadratic-closed-form"));

    const Run csv = run({"certify", "--phi", "exp", "--format", "csv"});
    CHECK(csv.out.rfind("kind,route\n", 0) == 0);
    CHECK(csv.out.find("paranorm,convex-geometric\n") != std::string::npos);
  }

  TEST_CASE("modulus examples") {
    const Run r = run({"modulus", "--phi", "power:p=2", "--method", "closed", "--r", "1", "--eps", "1", "--format", "csv"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.rfind("r,eps,method,delta,residual\n", 0) == 0);
    CHECK(r.out.find("1,1,closed,0.13397459621556") != std::string::npos);

    const Json e = json_of(run({"modulus", "--phi", "exp", "--method", "exp-plane", "--r", "1", "--eps", "0.1:1.9:30"}));
    double prev = 0.0;
    for (const auto& row : e["results"]) {
      CHECK(row["delta"].get<double>() > prev);
      prev = row["delta"].get<double>();
    }

    const Json imp = json_of(run({"modulus", "--phi", "power:p=1.5", "--weights", "0.5,0.4", "--method", "implicit",
                                  "--r", "1,2", "--eps-frac", "0.25,0.5"}));
    CHECK(imp["results"].size() == 4);
    for (const auto& row : imp["results"]) CHECK(row["residual"].get<double>() <= 1e-10 * 2.0 * std::sqrt(8.0));
  }

  TEST_CASE("route and input errors") {
    const Run p1 = run({"modulus", "--phi", "power:p=1", "--method", "implicit", "--r", "1", "--eps", "1"});
    CHECK(p1.code == kExitRoute);
    CHECK(p1.err.find("H-condition-implicit") != std::string::npos);
    CHECK(run({"modulus", "--phi", "exp", "--method", "closed", "--r", "1", "--eps", "1"}).code == kExitRoute);
    CHECK(run({"modulus", "--phi", "power:p=2", "--method", "exp-plane", "--r", "1", "--eps", "1"}).code == kExitRoute);
    CHECK(run({"verify", "--phi", "exp", "--method", "closed", "--r", "1", "--eps", "1"}).code == kExitRoute);

    CHECK(run({"audit", "--phi", "expr:t^"}).code == kExitInput);
    CHECK(run({"audit", "--phi", "expr:t^"}).err.find("offset") != std::string::npos);
    CHECK(run({"audit", "--phi", "bogus"}).code == kExitInput);
    CHECK(run({"audit"}).code == kExitInput);
    CHECK(run({}).code == kExitInput);
    CHECK(run({"audit", "--phi", "exp", "--weights", "1,-1"}).code == kExitInput);
    CHECK(run({"audit", "--phi", "exp", "--grid", "3:1:10"}).code == kExitInput);
    CHECK(run({"modulus", "--phi", "power:p=2", "--method", "closed", "--r", "1", "--eps", "3"}).code == kExitInput);
    CHECK(run({"modulus", "--phi", "power:p=2", "--method", "eA", "--r", "1", "--eps", "1"}).code == kExitInput);
    CHECK(run({"modulus", "--phi", "power:p=2", "--r", "1", "--eps", "1"}).code == kExitInput);
    CHECK(run({"ball", "--phi", "exp", "--weights", "1,1,1"}).code == kExitInput);
    CHECK(run({"ball", "--phi", "exp", "--n", "3"}).code == kExitInput);
    CHECK(run({"audit", "--phi", "exp", "--format", "xml"}).code == kExitInput);
    CHECK(run({"--help"}).code == kExitOk);
  }

  TEST_CASE("verify exit codes") {
    const std::vector<std::string> base{"verify", "--phi", "power:p=2", "--method", "closed", "--r",
                                        "0.5,1",  "--eps-frac", "0.25,0.5", "--samples", "3000"};
    CHECK(run(base).code == kExitOk);
    std::vector<std::string> bad = base;
    bad.insert(bad.end(), {"--inflate-delta", "1.5"});
    const Run r = run(bad);
    CHECK(r.code == kExitViolation);
    CHECK(json_of(r)["violations"].get<int>() > 0);
    const Run help = run({"verify", "--help"});
    CHECK(help.out.find("inflate") == std::string::npos);
  }

  TEST_CASE("identical config and seed give byte-identical reports") {
    const std::vector<std::string> args{"verify", "--phi", "exp", "--method", "exp-plane", "--r", "0.5,1.5",
                                        "--eps-frac", "0.3,0.7", "--samples", "2000", "--seed", "17"};
    const Run a = run(args), b = run(args);
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
    std::vector<std::string> csv = args;
    csv.insert(csv.end(), {"--format", "csv"});
    CHECK(run(csv).out == run(csv).out);
    CHECK(run(csv).out.rfind("r,eps,delta_theory,delta_empirical,violation_flag,x1,x2,y1,y2\n", 0) == 0);
  }

  TEST_CASE("output file") {
    const auto path = std::filesystem::temp_directory_path() / "uconvex_cli_test.json";
    const Run r = run({"certify", "--phi", "power:p=2", "--out", path.string()});
    CHECK(r.code == kExitOk);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == run({"certify", "--phi", "power:p=2", "--out", path.string()}).out + ss.str());
    CHECK(Json::parse(ss.str())["tool_version"] == kToolVersion);
    std::filesystem::remove(path);
    CHECK(run({"certify", "--phi", "power:p=2", "--out", "/nonexistent/dir/x.json"}).code == kExitInput);
  }

  TEST_CASE("ball output") {
    const Run circle = run({"ball", "--phi", "power:p=2", "--r", "1", "--n", "16", "--format", "csv"});
    REQUIRE(circle.code == kExitOk);
    std::istringstream in(circle.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "theta,x1,x2");
    int rows = 0;
    while (std::getline(in, line)) {
      double th, x1, x2;
      char c1, c2;
      std::istringstream ls(line);
      ls >> th >> c1 >> x1 >> c2 >> x2;
      CHECK(std::hypot(x1, x2) == doctest::Approx(1.0).epsilon(1e-12));
      ++rows;
    }
    CHECK(rows == 16);

    // exp at r = 2: consecutive edges turn the same way (a convex curve)
    const Json e = json_of(run({"ball", "--phi", "exp", "--r", "2", "--n", "64"}));
    const auto& pts = e["results"];
    REQUIRE(pts.size() == 64);
    bool circular = true;
    for (std::size_t j = 0; j < 64; ++j) {
      const auto& a = pts[j];
      const auto& b = pts[(j + 1) % 64];
      const auto& c = pts[(j + 2) % 64];
      const double ux = b["x1"].get<double>() - a["x1"].get<double>(), uy = b["x2"].get<double>() - a["x2"].get<double>();
      const double vx = c["x1"].get<double>() - b["x1"].get<double>(), vy = c["x2"].get<double>() - b["x2"].get<double>();
      CHECK(ux * vy - uy * vx > 0.0);
      const double rad = std::hypot(a["x1"].get<double>(), a["x2"].get<double>());
      circular = circular && std::fabs(rad - std::hypot(pts[0]["x1"].get<double>(), pts[0]["x2"].get<double>())) < 1e-6;
    }
    CHECK_FALSE(circular);
    CHECK(e["symmetry"] == "axes and diagonal verified");
  }
}
