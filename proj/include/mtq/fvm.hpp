#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mtq/rates.hpp"

namespace mtq::fvm {

// Node values rho_i ~ rho(i dx, t) for i = 0..cells on [0, cells * dx].
struct DensityGrid {
  double dx = 0.02;
  std::size_t cells = 0;
  double t = 0.0;
  std::vector<double> rho;

  double x_hi() const { return dx * static_cast<double>(cells); }
  // Trapezoidal total mass, end nodes weighted 1/2.
  double mass() const;
  void check_invariants(double mass_tol = 1e-10) const;
};

// Samples f at the nodes of [0, x_hi] and renormalizes the trapezoidal mass to one.
DensityGrid sample_grid(const std::function<double(double)>& f, double dx, double x_hi, double t = 0.0);

// Steady density of the profile's initial rates, sampled and renormalized.
DensityGrid initial_grid(const RateProfile& profile, double dx, double x_hi);

double numerical_flux(Coefficients coef, double u, double v, double dx);
double numerical_flux(double t, double u, double v, double dx, const RateProfile& profile);

// safety * dx^2 / (2 b(t)).
double stable_dt(double t, double dx, const RateProfile& profile, double safety = 1.0);

// One explicit step with zero flux through both ends. End nodes own half cells.
// Throws StabilityError when dt exceeds stable_dt(grid.t, dx, profile, 1).
DensityGrid step(const DensityGrid& grid, double dt, const RateProfile& profile);
void step_in_place(DensityGrid& grid, double dt, const RateProfile& profile);

inline constexpr double kDefaultSafety = 0.9;
inline constexpr double kMassDriftTolerance = 1e-8;

using GridObserver = std::function<void(const DensityGrid&)>;

// Steps with safety * stable_dt, clipping the last step onto each output time.
// Throws NumericalFailure when the mass drifts by more than kMassDriftTolerance.
void solve_pde(const RateProfile& profile, DensityGrid grid, std::span<const double> output_times,
               const GridObserver& observer, double safety = kDefaultSafety);

std::vector<DensityGrid> solve_pde(const RateProfile& profile, const DensityGrid& initial,
                                   std::span<const double> output_times,
                                   double safety = kDefaultSafety);

// Trapezoidal integrals of rho over [k, k+1] for k < K.
std::vector<double> cell_probabilities(const DensityGrid& grid, std::size_t K);

// Trapezoidal integral of x rho.
double expected_length(const DensityGrid& grid);

// a sum_{k>=1} rho(k) - b sum_{k>=1} rho_x(k) with centered differences.
double expected_length_rate(const DensityGrid& grid, const RateProfile& profile);

// Number of grid nodes per unit length; throws ConfigError unless dx divides 1.
std::size_t nodes_per_unit(double dx);

}  // namespace mtq::fvm
