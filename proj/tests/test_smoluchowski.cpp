#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mtq/errors.hpp"
#include "mtq/smoluchowski.hpp"

using namespace mtq;
using namespace mtq::smoluchowski;

namespace {

double integrate(const std::function<double(double)>& f, double lo, double hi) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-13);
}

}  // namespace

TEST_SUITE("smoluchowski") {
  TEST_CASE("step parameters") {
    const auto p = StepChangeParams::from_rates({0.5, 1.0}, {0.8, 1.0});
    CHECK(p.c0 == doctest::Approx(std::log(0.5)).epsilon(1e-14));
    CHECK(p.c == doctest::Approx(std::log(0.8)).epsilon(1e-14));
    CHECK(p.d == doctest::Approx(std::log(0.5) - std::log(0.8)).epsilon(1e-13));
    CHECK(p.final_stable());
    CHECK_THROWS_AS(StepChangeParams::from_rates({1.0, 1.0}, {0.5, 1.0}), NoSteadyStateError);
    CHECK_THROWS_AS(StepChangeParams::from_profile(RateProfile::cyclic(0.5, 0.8, 5, 1)), ConfigError);
  }

  TEST_CASE("density matches superposition of the fundamental solution") {
    // Frozen from 20-digit quadrature of the fundamental solution against the initial density.
    const auto p = StepChangeParams::from_rates({0.5, 1.0}, {0.8, 1.0});
    CHECK(density(0.5, 1.0, p) == doctest::Approx(0.40622665315542427354).epsilon(1e-11));
    CHECK(density(2.0, 5.0, p) == doctest::Approx(0.19980867012737786621).epsilon(1e-11));
  }

  TEST_CASE("cell probabilities match superposition references") {
    const auto p = StepChangeParams::from_rates({0.5, 1.0}, {0.8, 1.0});
    CHECK(pk_closed_form(0, 1.0, p) == doctest::Approx(0.40477279616404227922).epsilon(1e-11));
    CHECK(pk_closed_form(3, 5.0, p) == doctest::Approx(0.11493292465208424736).epsilon(1e-11));
    CHECK(pk_closed_form(0, 20.0, p) == doctest::Approx(0.2383314874582089609).epsilon(1e-11));
  }

  TEST_CASE("closed-form cell probabilities equal quadrature of the density") {
    const Rates cases[][2] = {{{0.5, 1}, {0.8, 1}}, {{0.2, 1}, {0.99, 1}}, {{0.2, 1}, {2.0, 1}},
                              {{0.8, 1}, {0.5, 1}}, {{0.99, 1}, {0.2, 1}}};
    for (const auto& c : cases) {
      const auto p = StepChangeParams::from_rates(c[0], c[1]);
      for (double t : {0.01, 0.5, 3.0, 40.0}) {
        for (std::size_t k : {0u, 1u, 7u, 60u}) {
          INFO("lambda1=" << c[1].lambda << " t=" << t << " k=" << k);
          CHECK(std::abs(pk_closed_form(k, t, p) - pk_quadrature(k, t, p)) < 1e-11);
        }
      }
    }
  }

  TEST_CASE("mass is one and the no-flux boundary holds") {
    const auto p = StepChangeParams::from_rates({0.2, 1.0}, {0.99, 1.0});
    for (double t : {0.5, 5.0, 50.0}) {
      double m = 0.0;
      for (std::size_t k = 0; k < 400; ++k) m += pk_closed_form(k, t, p);
      CHECK(m == doctest::Approx(1.0).epsilon(1e-9));
      const double h = 1e-5;
      const double grad = (density(h, t, p) - density(0.0, t, p)) / h;
      const double flux = p.final.a * density(0.0, t, p) - p.final.b * grad;
      CHECK(std::abs(flux) < 1e-4);
    }
  }

  TEST_CASE("density satisfies the drift-diffusion equation") {
    const auto p = StepChangeParams::from_rates({0.5, 1.0}, {0.8, 1.0});
    const double x = 2.3, t = 4.0, h = 1e-3;
    const double rt = (density(x, t + h, p) - density(x, t - h, p)) / (2 * h);
    const double rx = (density(x + h, t, p) - density(x - h, t, p)) / (2 * h);
    const double rxx = (density(x + h, t, p) - 2 * density(x, t, p) + density(x - h, t, p)) / (h * h);
    CHECK(std::abs(rt - (p.final.b * rxx - p.final.a * rx)) < 1e-5);
  }

  TEST_CASE("t = 0 returns the initial steady state exactly") {
    const auto p = StepChangeParams::from_rates({0.5, 1.0}, {0.8, 1.0});
    for (std::size_t k = 0; k < 10; ++k) {
      CHECK(pk_closed_form(k, 0.0, p) == doctest::Approx(0.5 * std::pow(0.5, double(k))).epsilon(1e-13));
    }
    CHECK(density(1.0, 0.0, p) == doctest::Approx(-p.c0 * std::exp(p.c0)).epsilon(1e-15));
  }

  TEST_CASE("constant profile relaxes nowhere") {
    const auto p = StepChangeParams::from_profile(RateProfile::constant(0.5, 1.0));
    CHECK(pk_closed_form(2, 10.0, p) == doctest::Approx(0.125).epsilon(1e-10));
  }

  TEST_CASE("fundamental solution carries unit mass") {
    const auto coef = coefficients(0.8, 1.0);
    for (double x0 : {0.0, 1.0, 5.0}) {
      const double m = integrate([&](double x) { return fundamental_solution(x, 2.0, x0, coef); }, 0.0, 80.0);
      CHECK(m == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK_THROWS_AS(fundamental_solution(1.0, 0.0, 1.0, coef), DomainError);
  }

  TEST_CASE("very strong ramp evaluates without overflow") {
    const auto p = StepChangeParams::from_rates({0.2, 1.0}, {2.0, 1.0});
    CHECK_FALSE(p.final_stable());
    for (double t : {1.0, 50.0, 100.0}) {
      for (std::size_t k : {0u, 50u, 99u}) {
        const double v = pk_closed_form(k, t, p);
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
      }
    }
  }

  TEST_CASE("xi_tilde is the steady mean-value point") {
    CHECK(xi_tilde(3, 0.0) == 3.0);
    CHECK(xi_tilde(3, 1.0) == doctest::Approx(3.5));
    CHECK(xi_tilde(0, 0.5) == doctest::Approx(0.471233627055102).epsilon(1e-13));
    // Series branch agrees with the closed expression just outside its range.
    CHECK(xi_tilde(0, 1.0 + 2e-4) == doctest::Approx(xi_tilde(0, 1.0 + 9e-5)).epsilon(1e-5));
    for (double rho : {0.3, 0.8, 0.99}) {
      const auto c = coefficients(rho, 1.0);
      const double xi = xi_tilde(4, rho);
      CHECK(xi > 4.0);
      CHECK(xi < 5.0);
      CHECK(steady_density(c, xi) == doctest::Approx(steady_cell_mass(c, 4)).epsilon(1e-12));
    }
  }
}
