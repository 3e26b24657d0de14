#include "mtq/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mtq/errors.hpp"

namespace mtq {

namespace {

constexpr double kSqrt1_2 = 0.70710678118654752440;
// Below this Phi argument the product is formed in log space through erfcx.
constexpr double kTailSwitch = -8.0;
const double kLogMax = std::log(std::numeric_limits<double>::max());

// exp(x^2) erfc(x) for x >= 4 by the Laplace continued fraction
// sqrt(pi) erfcx(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))).
double erfcx_continued_fraction(double x) {
  constexpr double tiny = 1e-300;
  double f = x;
  double c = f;
  double d = 0.0;
  for (int n = 1; n < 5000; ++n) {
    const double a = 0.5 * n;
    d = x + a * d;
    if (d == 0.0) d = tiny;
    d = 1.0 / d;
    c = x + a / c;
    if (c == 0.0) c = tiny;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / (std::sqrt(std::numbers::pi) * f);
}

double checked_exp(double exponent, double scale) {
  // scale > 0; result = exp(exponent) * scale
  if (exponent < kLogMax - 1.0) return std::exp(exponent) * scale;
  const double l = exponent + std::log(scale);
  if (l > kLogMax) {
    std::ostringstream msg;
    msg << "exp_phi: result exp(" << l << ") overflows";
    throw OverflowError(msg.str());
  }
  return std::exp(l);
}

}  // namespace

double gauss_cdf(double z) { return 0.5 * std::erfc(-z * kSqrt1_2); }

double erfcx(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) {
    // erfc(-x) = 2 - erfc(x)
    return 2.0 * std::exp(x * x) - erfcx(-x);
  }
  if (x < 4.0) return std::exp(x * x) * std::erfc(x);
  if (std::isinf(x)) return 0.0;
  if (x > 1e8) return 1.0 / (std::sqrt(std::numbers::pi) * x);
  return erfcx_continued_fraction(x);
}

double exp_phi(double u, double v) {
  if (std::isnan(u) || std::isnan(v)) return std::numeric_limits<double>::quiet_NaN();
  if (v == -std::numeric_limits<double>::infinity()) {
    if (u == std::numeric_limits<double>::infinity()) {
      throw DomainError("exp_phi: indeterminate inf * 0");
    }
    return 0.0;
  }
  if (u == -std::numeric_limits<double>::infinity()) return 0.0;
  if (v >= kTailSwitch) {
    const double phi = gauss_cdf(v);
    return checked_exp(u, phi);
  }
  // Phi(v) = 0.5 erfcx(w) exp(-w^2), w = -v/sqrt(2); the v^2/2 term is split with
  // an fma so the combined exponent keeps full relative accuracy.
  const double w = -v * kSqrt1_2;
  const double vv = v * v;
  const double vv_err = std::fma(v, v, -vv);
  const double exponent = (u - 0.5 * vv) - 0.5 * vv_err;
  return checked_exp(exponent, 0.5 * erfcx(w));
}

double exp_erfc(double u, double z) {
  // erfc(z) = 2 Phi(-z sqrt 2)
  return 2.0 * exp_phi(u, -z * std::numbers::sqrt2);
}

}  // namespace mtq
