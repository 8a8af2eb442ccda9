#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "uconvex/error.hpp"
#include "uconvex/generator.hpp"

using namespace uconvex;

namespace {

std::vector<Generator> sample_generators() {
  return {Generator::make(BuiltinFamily::power(1.0)),
          Generator::make(BuiltinFamily::power(2.0)),
          Generator::make(BuiltinFamily::power(2.5)),
          Generator::make(BuiltinFamily::power(3.0)),
          Generator::make(BuiltinFamily::exp_minus_one(std::numbers::e)),
          Generator::make(BuiltinFamily::exp_minus_one(2.0)),
          Generator::make(BuiltinFamily::power_times_exp(1.0, std::numbers::e)),
          Generator::make(BuiltinFamily::power_times_exp(2.0, std::numbers::e)),
          Generator::make(BuiltinFamily::cubic_rational(3.0)),
          Generator::from_spec("expr:t^3/(t+1)"),
          Generator::from_spec("expr:exp(t)-1"),
          Generator::from_spec("expr:t^2*exp(t)")};
}

}  // namespace

TEST_SUITE("generator") {
  TEST_CASE("make_generator examples") {
    const Generator sq = Generator::make(BuiltinFamily::power(2.0));
    CHECK(sq.value(3.0) == 9.0);
    CHECK(sq.inverse(9.0) == 3.0);
    CHECK(sq.has_closed_form_inverse());

    const Generator e = Generator::make(BuiltinFamily::exp_minus_one(std::numbers::e));
    CHECK(e.value(1.0) == doctest::Approx(std::numbers::e - 1.0).epsilon(1e-15));
    CHECK(e.inverse(2.0) == doctest::Approx(std::log(3.0)).epsilon(1e-15));
    CHECK(e.is_natural_exp_minus_one());
    CHECK(e.t_max() == doctest::Approx(700.0));

    const Generator cr = Generator::from_spec("expr:t^3/(t+1)");
    CHECK_FALSE(cr.has_closed_form_inverse());
    CHECK(cr.inverse(8.0 / 3.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::fabs(cr.value(cr.inverse(8.0 / 3.0)) - 8.0 / 3.0) <= 1e-12 * 8.0 / 3.0);
  }

  TEST_CASE("derivative examples") {
    const Generator sq = Generator::make(BuiltinFamily::power(2.0));
    CHECK(sq.deriv1(3.0) == 6.0);
    const Generator e = Generator::make(BuiltinFamily::exp_minus_one(std::numbers::e));
    CHECK(e.deriv2(0.5) == doctest::Approx(std::exp(0.5)).epsilon(1e-15));
    for (const Generator& g : {Generator::from_spec("expr:t^3/(t+1)"), Generator::from_spec("cubicrational:p=3")}) {
      const double fd = oracle::central_difference([&](double x) { return g.value(x); }, 2.0);
      CHECK(std::fabs(g.deriv1(2.0) - fd) <= 1e-8 * std::fabs(fd));
    }
  }

  TEST_CASE("closed-form derivatives match the symbolic ones") {
    for (const Generator& g : sample_generators()) {
      if (!g.family()) continue;
      for (double x : {1e-3, 0.1, 0.7, 1.0, 2.5, 10.0, 40.0}) {
        CAPTURE(g.name());
        CAPTURE(x);
        CHECK(g.value(x) == doctest::Approx(eval(g.phi_expr(), x)).epsilon(1e-13));
        CHECK(g.deriv1(x) == doctest::Approx(eval(g.d1_expr(), x)).epsilon(1e-12));
        CHECK(g.deriv2(x) == doctest::Approx(eval(g.d2_expr(), x)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("spec strings") {
    CHECK(Generator::from_spec("power:p=3").name() == "power:p=3");
    CHECK(Generator::from_spec("exp:a=2.71828182845904523536").is_natural_exp_minus_one());
    CHECK(Generator::from_spec("expr:exp(t)-1").is_natural_exp_minus_one());
    CHECK_FALSE(Generator::from_spec("exp:a=2").is_natural_exp_minus_one());
    CHECK(Generator::from_spec("powexp:p=1,a=2").value(1.0) == doctest::Approx(2.0));
    CHECK(Generator::from_spec("cubicrational:p=3").value(2.0) == doctest::Approx(8.0 / 3.0));
    CHECK_THROWS_AS(Generator::from_spec("power:p=0.5"), InvalidArgument);
    CHECK_THROWS_AS(Generator::from_spec("exp:a=1"), InvalidArgument);
    CHECK_THROWS_AS(Generator::from_spec("cubicrational:p=1"), InvalidArgument);
    CHECK_THROWS_AS(Generator::from_spec("power"), InvalidArgument);
    CHECK_THROWS_AS(Generator::from_spec("power:q=2"), InvalidArgument);
    CHECK_THROWS_AS(Generator::from_spec("sine:p=2"), InvalidArgument);
    CHECK_THROWS_AS(Generator::from_spec("expr:t^"), ParseError);
  }

  TEST_CASE("rejects non-bijections") {
    CHECK_THROWS_WITH_AS(Generator::from_spec("expr:t+1"), doctest::Contains("phi(0) = 0"), InvalidArgument);
    CHECK_THROWS_WITH_AS(Generator::from_spec("expr:t*(t-2)"), doctest::Contains("not strictly increasing"),
                         InvalidArgument);
    CHECK_THROWS_AS(Generator::from_spec("expr:log(t)"), InvalidArgument);
    CHECK_THROWS_AS(Generator::from_spec("expr:3"), InvalidArgument);
  }

  TEST_CASE("inverse above phi(T_max) is an overflow naming the range") {
    const Generator bounded = Generator::from_spec("expr:t/(1+t)");
    CHECK(bounded.inverse(0.5) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_WITH_AS(bounded.inverse(2.0), doctest::Contains("T_max"), OverflowError);
    const Generator e = Generator::make(BuiltinFamily::exp_minus_one(std::numbers::e));
    CHECK_THROWS_AS(e.inverse(1e305), OverflowError);
    CHECK_THROWS_AS(e.inverse(-1.0), InvalidArgument);
    CHECK_THROWS_AS(e.value(-1.0), InvalidArgument);
  }

  TEST_CASE("roundtrip inverse(phi(t)) = t on a 200-point log grid") {
    for (const Generator& g : sample_generators()) {
      CHECK(std::fabs(g.value(0.0)) <= 1e-12);
      const double lo = std::log(1e-6), hi = std::log(g.t_max());
      for (int i = 0; i < 200; ++i) {
        const double t = std::min(std::exp(lo + (hi - lo) * i / 199.0), g.t_max());
        CAPTURE(g.name());
        CAPTURE(t);
        const double back = g.inverse(g.value(t));
        CHECK(std::fabs(back - t) <= 1e-10 * std::max(1.0, t));
        const double y = g.value(t);
        CHECK(std::fabs(g.value(back) - y) <= 1e-12 * std::max(1.0, y));
      }
    }
  }

  TEST_CASE("inverse is monotone on sampled pairs") {
    for (const Generator& g : sample_generators()) {
      double prev = 0.0;
      for (int i = 0; i <= 400; ++i) {
        const double y = std::exp(-30.0 + 60.0 * i / 400.0);
        if (y > g.phi_max()) break;
        const double x = g.inverse(y);
        CHECK(x >= prev);
        prev = x;
      }
    }
  }

  TEST_CASE("log1p inverse agrees with the bracketed solver") {
    for (double a : {std::numbers::e, 2.0, 10.0}) {
      const Generator g = Generator::make(BuiltinFamily::exp_minus_one(a));
      for (int i = 0; i <= 300; ++i) {
        const double y = std::exp(-40.0 + 80.0 * i / 300.0);
        const double a1 = g.inverse(y), a2 = g.inverse_numeric(y);
        CHECK(std::fabs(a1 - a2) <= 1e-12 * a1);
      }
    }
  }
}
