#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace mtq {

struct SolverSettings {
  double rtol = 1e-6;
  double atol = 1e-9;
  double dt_init = 0.0;  // <= 0 selects a starting step automatically
  double dt_max = std::numeric_limits<double>::infinity();

  void validate() const;
};

// dy/dt = f(t, y), written into the third argument.
using OdeRhs = std::function<void(double, std::span<const double>, std::span<double>)>;

// Called once per requested output time with the interpolated state.
using OdeObserver = std::function<void(double, std::span<const double>)>;

struct IntegrationStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
};

inline constexpr double kMinStep = 1e-14;

// Bogacki-Shampine 3(2) embedded pair with local extrapolation, FSAL, and cubic
// Hermite dense output. output_times must be nondecreasing and >= t0. Throws
// StiffnessError when the controller asks for a step below kMinStep.
IntegrationStats integrate_rk23(const OdeRhs& rhs, double t0, std::vector<double> y0,
                                std::span<const double> output_times, const SolverSettings& settings,
                                const OdeObserver& observer);

}  // namespace mtq
