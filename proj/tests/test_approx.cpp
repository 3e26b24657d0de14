#include <doctest.h>

#include <cmath>

#include "mtq/approx.hpp"
#include "mtq/errors.hpp"

using namespace mtq;
using namespace mtq::approx;

TEST_SUITE("approx") {
  TEST_CASE("expected outflow") {
    CHECK(expected_outflow(1.0, 0.0) == 1.0);
    CHECK(expected_outflow(1.0, 1.0) == 0.0);
    CHECK(expected_outflow(1.0, 0.5) == 0.5);
    CHECK(expected_outflow(2.0, 1.0 + 5e-10) == 0.0);
    CHECK_THROWS_AS(expected_outflow(1.0, 1.1), DomainError);
    CHECK_THROWS_AS(expected_outflow(1.0, -1e-8), DomainError);
    CHECK_THROWS_AS(expected_outflow(-1.0, 0.5), DomainError);
  }

  TEST_CASE("rider right-hand side") {
    const auto c = RateProfile::constant(0.5, 1.0);
    CHECK(rider_rhs(1.0, 3.0, c, 0.0) == doctest::Approx(0.0));
    CHECK(rider_rhs(0.0, 3.0, c, 0.0) == doctest::Approx(0.5));
    CHECK(rider_rhs(0.0, 3.0, c, 1.0) == doctest::Approx(0.5 * std::exp(-1.0)));
  }

  TEST_CASE("rider fixed point for constant rates") {
    const auto c = RateProfile::constant(0.5, 1.0);
    const auto times = uniform_times(50.0, 1.0);
    const auto traj = rider_solve(c, times);
    for (const auto& s : traj) CHECK(std::abs(s.expected_parts - 1.0) < 1e-9);
    const auto out = rider_outflow(traj, c);
    for (double v : out.values) CHECK(v == doctest::Approx(0.5).epsilon(1e-9));
  }

  TEST_CASE("rider moderate step matches a high-order reference") {
    const auto prof = RateProfile::step(0.5, 1.0, 0.8, 1.0);
    SolverSettings s;
    s.rtol = 1e-10;
    s.atol = 1e-12;
    const std::vector<double> times{1.0, 10.0, 50.0, 400.0};
    const auto traj = rider_solve(prof, times, 0.0, std::nullopt, s);
    CHECK(traj[0].expected_parts == doctest::Approx(1.2681304078350017).epsilon(1e-8));
    CHECK(traj[1].expected_parts == doctest::Approx(2.514582687767868).epsilon(1e-8));
    CHECK(traj[2].expected_parts == doctest::Approx(3.766528046023428).epsilon(1e-8));
    CHECK(traj[3].expected_parts == doctest::Approx(4.0).epsilon(1e-6));
  }

  TEST_CASE("rider with a transition parameter on a cyclic profile") {
    const auto prof = RateProfile::cyclic(0.2, 0.99, 10.0, 1.0);
    SolverSettings s;
    s.rtol = 1e-10;
    s.atol = 1e-12;
    const std::vector<double> times{7.0, 25.0};
    const auto traj = rider_solve(prof, times, 0.5, std::nullopt, s);
    CHECK(traj[0].expected_parts == doctest::Approx(1.476994381269856).epsilon(1e-8));
    CHECK(traj[1].expected_parts == doctest::Approx(1.5017384193679728).epsilon(1e-8));
  }

  TEST_CASE("rider requires an explicit start when initially overloaded") {
    const auto prof = RateProfile::constant(1.5, 1.0);
    const std::vector<double> times{1.0};
    CHECK_THROWS_AS(rider_solve(prof, times), ConfigError);
    const auto traj = rider_solve(prof, times, 0.0, 2.0);
    CHECK(traj[0].expected_parts > 2.0);
  }

  TEST_CASE("outflow series stay within [0, mu]") {
    const auto prof = RateProfile::cyclic(0.2, 2.0, 5.0, 1.0);
    const auto times = uniform_times(25.0, 0.1);
    const auto out = rider_outflow(rider_solve(prof, times), prof);
    for (double v : out.values) {
      CHECK(v >= -1e-9);
      CHECK(v <= 1.0 + 1e-9);
    }
  }

  TEST_CASE("registry semantics") {
    ApproximatorRegistry reg;
    auto dummy = [](const RateProfile& p, std::span<const double> t) {
      OutflowSeries s{"dummy", {t.begin(), t.end()}, {}};
      for (double ti : t) s.values.push_back(p.at(ti).mu);
      return s;
    };
    const auto h = reg.add("dummy", dummy);
    CHECK(reg.contains("dummy"));
    CHECK(reg.names() == std::vector<std::string>{"dummy"});
    CHECK_THROWS_AS(reg.add("dummy", dummy), ConfigError);
    CHECK_THROWS_AS(reg.get("missing"), ConfigError);
    CHECK_THROWS_AS(reg.add("", dummy), ConfigError);
    const std::vector<double> t{1.0, 2.0};
    CHECK(reg.get("dummy")(RateProfile::constant(0.5, 1.0), t).values == std::vector<double>{1.0, 1.0});
    reg.remove(h);
    CHECK_FALSE(reg.contains("dummy"));
  }
}
