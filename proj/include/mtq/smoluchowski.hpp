#pragma once

#include <cstddef>

#include "mtq/rates.hpp"
#include "mtq/special.hpp"

namespace mtq::smoluchowski {

// Constants of the closed-form solution after a rate step at t = 0 from a
// steady state. c = a/b, c0 = a0/b0, d = c0 - c.
struct StepChangeParams {
  Coefficients initial;
  Coefficients final;
  double c = 0.0;
  double c0 = 0.0;
  double d = 0.0;
  double rho0 = 0.0;
  double rho1 = 0.0;

  static StepChangeParams from_rates(Rates before, Rates after);
  // Accepts constant and step profiles only.
  static StepChangeParams from_profile(const RateProfile& profile);

  double sigma(double t) const;
  // Post-step utilization below one; otherwise the formulas are evaluated as is.
  bool final_stable() const { return rho1 < 1.0; }
};

// Below this sigma the initial data are returned directly.
inline constexpr double kSigmaMin = 1e-6;

// Response of the no-flux drift-diffusion problem to unit mass at x0.
double fundamental_solution(double x, double t, double x0, Coefficients coef);

double density(double x, double t, const StepChangeParams& params);

// Integral of density over [k, k+1] in closed form. Falls back to quadrature
// when a term overflows or the step is degenerate (d ~ 0).
double pk_closed_form(std::size_t k, double t, const StepChangeParams& params);

// Adaptive Gauss-Kronrod integral of density over [k, k+1].
double pk_quadrature(std::size_t k, double t, const StepChangeParams& params);

// Mean-value point in [k, k+1] that is exact for the steady state at utilization rho.
double xi_tilde(std::size_t k, double rho);

// density evaluated at xi_tilde(k, rho1).
double pk_midpoint(std::size_t k, double t, const StepChangeParams& params);

// Number of closed-form evaluations that fell back to quadrature in this process.
std::size_t closed_form_fallback_count();

}  // namespace mtq::smoluchowski
