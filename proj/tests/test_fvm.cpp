#include <doctest.h>

#include <cmath>

#include "mtq/errors.hpp"
#include "mtq/fvm.hpp"
#include "mtq/smoluchowski.hpp"

using namespace mtq;

TEST_SUITE("fvm") {
  TEST_CASE("numerical flux") {
    const Coefficients c{-0.5, 0.75};
    CHECK(fvm::numerical_flux(c, 1.0, 1.0, 0.1) == doctest::Approx(-0.5));
    CHECK(fvm::numerical_flux(c, 1.0, 0.0, 0.1) == doctest::Approx(7.5 - 0.25));
    CHECK_THROWS_AS(fvm::numerical_flux(c, 1.0, 1.0, 0.0), DomainError);
  }

  TEST_CASE("stable time step") {
    const auto prof = RateProfile::constant(0.5, 1.0);
    CHECK(fvm::stable_dt(0.0, 0.02, prof) == doctest::Approx(2.77258872223978e-4).epsilon(1e-13));
    CHECK(fvm::stable_dt(0.0, 0.02, prof, 0.5) == doctest::Approx(1.38629436111989e-4).epsilon(1e-13));
    CHECK_THROWS_AS(fvm::stable_dt(0.0, 0.02, prof, 1.5), DomainError);
  }

  TEST_CASE("oversized step is rejected") {
    const auto prof = RateProfile::constant(0.5, 1.0);
    auto g = fvm::initial_grid(prof, 0.1, 10.0);
    const double dt = fvm::stable_dt(0.0, 0.1, prof);
    CHECK_NOTHROW(fvm::step(g, dt, prof));
    CHECK_THROWS_AS(fvm::step(g, 1.01 * dt, prof), StabilityError);
  }

  TEST_CASE("initial grid is normalized and nonnegative") {
    const auto g = fvm::initial_grid(RateProfile::step(0.5, 1.0, 0.8, 1.0), 0.02, 200.0);
    CHECK(g.cells == 10000);
    CHECK(g.mass() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_NOTHROW(g.check_invariants());
    CHECK_THROWS_AS(fvm::initial_grid(RateProfile::constant(1.2, 1.0), 0.02, 20.0), NoSteadyStateError);
    CHECK_THROWS_AS(fvm::initial_grid(RateProfile::constant(0.5, 1.0), 0.03, 1.0), ConfigError);
  }

  TEST_CASE("mass is conserved to roundoff over many steps") {
    const auto prof = RateProfile::cyclic(0.2, 2.0, 5.0, 1.0);
    auto g = fvm::initial_grid(prof, 0.05, 60.0);
    const double m0 = g.mass();
    for (int i = 0; i < 10000; ++i) fvm::step_in_place(g, fvm::stable_dt(g.t, g.dx, prof, 0.9), prof);
    CHECK(std::abs(g.mass() - m0) <= 1e-12);
    CHECK(*std::min_element(g.rho.begin(), g.rho.end()) >= 0.0);
  }

  TEST_CASE("discrete steady state is preserved") {
    // A grid function with zero interface fluxes is a fixed point of the scheme.
    const auto prof = RateProfile::constant(0.5, 1.0);
    const auto coef = coefficients(0.5, 1.0);
    const double dx = 0.05;
    const double r = (coef.b / dx + 0.5 * coef.a) / (coef.b / dx - 0.5 * coef.a);
    auto g = fvm::sample_grid([&](double x) { return std::pow(r, x / dx); }, dx, 40.0);
    const auto before = g.rho;
    for (int i = 0; i < 500; ++i) fvm::step_in_place(g, fvm::stable_dt(0, dx, prof, 0.9), prof);
    for (std::size_t i = 0; i < before.size(); ++i) CHECK(std::abs(g.rho[i] - before[i]) < 1e-13);
  }

  TEST_CASE("solve lands on output times") {
    const auto prof = RateProfile::step(0.5, 1.0, 0.8, 1.0);
    const std::vector<double> times{0.1, 0.25, 1.0};
    const auto out = fvm::solve_pde(prof, fvm::initial_grid(prof, 0.05, 50.0), times);
    REQUIRE(out.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(out[i].t == times[i]);
  }

  TEST_CASE("agrees with the closed form after a step") {
    const auto prof = RateProfile::step(0.5, 1.0, 0.8, 1.0);
    const auto params = smoluchowski::StepChangeParams::from_profile(prof);
    const std::vector<double> times{1.0};
    const auto out = fvm::solve_pde(prof, fvm::initial_grid(prof, 0.02, 60.0), times);
    double err = 0.0;
    for (std::size_t i = 0; i <= out[0].cells; ++i) {
      err = std::max(err, std::abs(out[0].rho[i] - smoluchowski::density(i * 0.02, 1.0, params)));
    }
    CHECK(err < 3e-3);
  }

  TEST_CASE("cell probabilities and moments") {
    const auto prof = RateProfile::constant(0.5, 1.0);
    const auto g = fvm::initial_grid(prof, 0.01, 60.0);
    const auto p = fvm::cell_probabilities(g, 10);
    for (std::size_t k = 0; k < 10; ++k) CHECK(p[k] == doctest::Approx(0.5 * std::pow(0.5, double(k))).epsilon(1e-4));
    CHECK_THROWS_AS(fvm::cell_probabilities(g, 61), DomainError);
    // Continuous steady mean is -1/c = 1/ln 2.
    CHECK(fvm::expected_length(g) == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-4));
    CHECK(std::abs(fvm::expected_length_rate(g, prof)) < 1e-3);
  }

  TEST_CASE("nodes per unit") {
    CHECK(fvm::nodes_per_unit(0.02) == 50);
    CHECK(fvm::nodes_per_unit(0.01) == 100);
    CHECK_THROWS_AS(fvm::nodes_per_unit(0.3), ConfigError);
  }
}
