#include "mtq/smoluchowski.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mtq/errors.hpp"

namespace mtq::smoluchowski {

namespace {

std::atomic<std::size_t> g_fallbacks{0};

void note_fallback(const char* why) {
  if (g_fallbacks.fetch_add(1) == 0) {
    std::clog << "mtq: closed-form cell probability fell back to quadrature (" << why << ")\n";
  }
}

}  // namespace

StepChangeParams StepChangeParams::from_rates(Rates before, Rates after) {
  const auto rho0 = TrafficIntensity::of(before);
  const auto rho1 = TrafficIntensity::of(after);
  if (!rho0.stable()) {
    throw NoSteadyStateError("step change: initial utilization must be < 1 for steady initial data");
  }
  StepChangeParams p;
  p.initial = coefficients(before);
  p.final = coefficients(after);
  p.c0 = p.initial.a / p.initial.b;
  p.c = p.final.a / p.final.b;
  p.d = p.c0 - p.c;
  p.rho0 = rho0.value();
  p.rho1 = rho1.value();
  return p;
}

StepChangeParams StepChangeParams::from_profile(const RateProfile& profile) {
  if (!profile.piecewise_constant_in_time()) {
    throw ConfigError("closed-form solution requires a constant or step rate profile");
  }
  return from_rates(profile.initial(), profile.at(0.0));
}

double StepChangeParams::sigma(double t) const { return std::sqrt(2.0 * final.b * t); }

double fundamental_solution(double x, double t, double x0, Coefficients coef) {
  if (!(t > 0.0)) throw DomainError("fundamental_solution: t must be > 0");
  if (!(x >= 0.0) || !(x0 >= 0.0)) throw DomainError("fundamental_solution: x, x0 must be >= 0");
  if (!(coef.b > 0.0)) throw DomainError("fundamental_solution: b must be > 0");
  const double a = coef.a;
  const double b = coef.b;
  const double c = a / b;
  const double four_bt = 4.0 * b * t;
  const double norm = 1.0 / std::sqrt(std::numbers::pi * four_bt);
  const double g1 = x - x0 - a * t;
  const double g2 = x + x0 - a * t;
  const double direct = norm * std::exp(-g1 * g1 / four_bt);
  const double image = norm * std::exp(-c * x0 - g2 * g2 / four_bt);
  const double z = (x + x0 + a * t) / std::sqrt(four_bt);
  const double boundary = -0.5 * c * exp_erfc(c * x, z);
  return std::max(direct + image + boundary, 0.0);
}

double density(double x, double t, const StepChangeParams& p) {
  if (!(x >= 0.0)) throw DomainError("density: x must be >= 0");
  if (!(t >= 0.0)) throw DomainError("density: t must be >= 0");
  const double s = p.sigma(t);
  if (t == 0.0 || s < kSigmaMin) return -p.c0 * std::exp(p.c0 * x);

  const double a = p.final.a;
  const double b = p.final.b;
  const double c = p.c;
  const double c0 = p.c0;
  const double d = p.d;
  const double bt = b * t;
  const double at = a * t;

  const double r1 = -c0 * exp_phi(c0 * (c0 * bt + x - at), (2.0 * c0 * bt + x - at) / s);
  const double r2 = -c0 * exp_phi(d * (d * bt - x + at), (2.0 * d * bt - x + at) / s);
  const double r3 = -c * exp_phi(c * x, -(x + at) / s) +
                    c * exp_phi(c * x + c0 * (c0 * bt - x - at), (2.0 * c0 * bt - x - at) / s);
  return std::max(r1 + r2 + r3, 0.0);
}

double pk_quadrature(std::size_t k, double t, const StepChangeParams& p) {
  const double lo = static_cast<double>(k);
  auto f = [&](double x) { return density(x, t, p); };
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, lo + 1.0, 20, 1e-12,
                                                                        &err);
}

double pk_closed_form(std::size_t k, double t, const StepChangeParams& p) {
  if (!(t >= 0.0)) throw DomainError("pk_closed_form: t must be >= 0");
  const double s = p.sigma(t);
  if (t == 0.0 || s < kSigmaMin) return steady_cell_mass(p.initial, k);
  if (std::abs(p.d) <= 1e-9 * std::max(1.0, std::abs(p.c))) {
    note_fallback("degenerate step");
    return pk_quadrature(k, t, p);
  }

  const double a = p.final.a;
  const double b = p.final.b;
  const double c = p.c;
  const double c0 = p.c0;
  const double d = p.d;
  const double kk = static_cast<double>(k);

  try {
    const double e0 = c0 * (c0 * b - a) * t;  // exponent shared by the c0-terms
    const double m0 = (2.0 * c0 * b - a) * t;
    const double ed = d * (d * b + a) * t;
    const double md = (2.0 * d * b + a) * t;

    const double t1 = gauss_cdf((kk + 1.0 - a * t) / s) - gauss_cdf((kk - a * t) / s);
    const double t2 = -(exp_phi(e0 + c0 * kk + c0, (m0 + kk + 1.0) / s) -
                        exp_phi(e0 + c0 * kk, (m0 + kk) / s));
    const double t3 = (c0 / d) * (exp_phi(ed - d * kk - d, (md - (kk + 1.0)) / s) -
                                  exp_phi(ed - d * kk, (md - kk) / s));
    const double t4 = -(exp_phi(c * kk + c, -(kk + 1.0 + a * t) / s) -
                        exp_phi(c * kk, -(kk + a * t) / s));
    const double t5 = -(c / d) * (exp_phi(e0 - d * kk - d, (m0 - (kk + 1.0)) / s) -
                                  exp_phi(e0 - d * kk, (m0 - kk) / s));
    const double sum = t1 + t2 + t3 + t4 + t5;
    if (!std::isfinite(sum)) throw OverflowError("non-finite term");
    return std::max(sum, 0.0);
  } catch (const OverflowError&) {
    note_fallback("term overflow");
    return pk_quadrature(k, t, p);
  }
}

double xi_tilde(std::size_t k, double rho) {
  if (!(rho >= 0.0)) throw DomainError("xi_tilde: utilization must be >= 0");
  const double kk = static_cast<double>(k);
  if (rho == 0.0) return kk;
  const double x = rho - 1.0;
  if (std::abs(x) < 1e-4) {
    // Series about rho = 1; the closed form cancels catastrophically there.
    return kk + 0.5 + x * (1.0 / 24.0 + x * (-1.0 / 48.0 + x * (13.0 / 960.0)));
  }
  const double l = std::log1p(x);
  return kk + std::log(x / l) / l;
}

double pk_midpoint(std::size_t k, double t, const StepChangeParams& p) {
  return density(xi_tilde(k, p.rho1), t, p);
}

std::size_t closed_form_fallback_count() { return g_fallbacks.load(); }

}  // namespace mtq::smoluchowski
