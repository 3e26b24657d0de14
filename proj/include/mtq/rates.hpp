#pragma once

#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

namespace mtq {

// Arrival rate lambda and service rate mu at one instant.
struct Rates {
  double lambda = 0.0;
  double mu = 1.0;
};

// Drift a and diffusion b of the approximating Smoluchowski equation.
struct Coefficients {
  double a = 0.0;
  double b = 0.0;
};

// Utilization lambda/mu. Values below one admit a geometric steady state.
class TrafficIntensity {
 public:
  explicit TrafficIntensity(double value);
  static TrafficIntensity of(Rates r);

  double value() const { return value_; }
  bool stable() const { return value_ < 1.0; }

 private:
  double value_;
};

struct ConstantRates {
  double lambda;
  double mu;
};

// Steady state at (lambda0, mu0) before t = 0, (lambda1, mu1) from t = 0 on.
struct StepRates {
  double lambda0;
  double mu0;
  double lambda1;
  double mu1;
};

// lambda(t) = (lambda0 - lambda1)/2 cos(2 pi t / period) + (lambda0 + lambda1)/2.
struct CyclicRates {
  double lambda0;
  double lambda1;
  double period;
  double mu;
};

struct Knot {
  double t;
  double value;
};

// Linear interpolation between knots, constant extrapolation outside.
struct PiecewiseLinearRates {
  std::vector<Knot> lambda;
  std::vector<Knot> mu;
};

class RateProfile {
 public:
  using Spec = std::variant<ConstantRates, StepRates, CyclicRates, PiecewiseLinearRates>;

  explicit RateProfile(Spec spec);

  static RateProfile constant(double lambda, double mu);
  static RateProfile step(double lambda0, double mu0, double lambda1, double mu1);
  static RateProfile cyclic(double lambda0, double lambda1, double period, double mu);
  static RateProfile piecewise_linear(std::vector<Knot> lambda, std::vector<Knot> mu);

  // Rates in effect at time t >= 0.
  Rates at(double t) const;

  // Rates whose steady state is the initial condition (pre-step rates for a step).
  Rates initial() const;

  // Componentwise suprema of lambda and mu over [0, horizon].
  Rates upper_bounds(double horizon) const;

  // True when the rates do not change for t >= 0 (constant or step profiles).
  bool piecewise_constant_in_time() const;

  std::string_view kind() const;
  const Spec& spec() const { return spec_; }

 private:
  Spec spec_;
};

Rates eval_rates(const RateProfile& profile, double t);

// a = lambda - mu, b = logarithmic mean of lambda and mu.
Coefficients coefficients(double lambda, double mu);
inline Coefficients coefficients(Rates r) { return coefficients(r.lambda, r.mu); }

inline constexpr double kLambdaEps = 1e-12;

// (1 - rho) rho^k.
double steady_pmf(TrafficIntensity rho, std::size_t k);

// Steady pmf truncated where the remaining tail drops below tail_tol, renormalized.
std::vector<double> truncated_steady_pmf(TrafficIntensity rho, double tail_tol = 1e-12);

// Steady pmf truncated to exactly n entries and renormalized.
std::vector<double> steady_pmf_vector(TrafficIntensity rho, std::size_t n);

// -(a/b) exp((a/b) x), the stationary density of the drift-diffusion model.
double steady_density(double a, double b, double x);
inline double steady_density(Coefficients c, double x) { return steady_density(c.a, c.b, x); }

// Exact integral of steady_density over [k, k+1].
double steady_cell_mass(Coefficients c, std::size_t k);

double steady_expected_length(TrafficIntensity rho);

}  // namespace mtq
