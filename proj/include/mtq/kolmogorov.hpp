#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mtq/rates.hpp"
#include "mtq/rk23.hpp"

namespace mtq {

inline constexpr double kNegativeTolerance = 1e-12;
inline constexpr double kMassTolerance = 1e-8;

// Queue-length probabilities p_0..p_{N-1} at time t.
struct QueueDistribution {
  double t = 0.0;
  std::vector<double> p;

  std::size_t size() const { return p.size(); }
  double mass() const;
  double expected_length() const;

  // Throws NumericalFailure on negative entries beyond kNegativeTolerance or a
  // mass defect beyond kMassTolerance.
  void check_invariants() const;

  // Roundoff negatives set to zero and the result renormalized. For reporting only.
  QueueDistribution clamped() const;
};

std::vector<double> uniform_times(double horizon, double dt, bool include_zero = false);

namespace kolmogorov {

// Forward equations truncated at N = p.size() with the closure p_N = (lambda/mu) p_{N-1}.
void rhs(Rates rates, std::span<const double> p, std::span<double> dpdt);
std::vector<double> rhs(double t, std::span<const double> p, const RateProfile& profile);

// d/dt E[L] = sum_k k dp_k/dt, evaluated from the right-hand side.
double expected_length_rate(double t, std::span<const double> p, const RateProfile& profile);

// Steady pmf of the profile's initial rates on N states (renormalized).
QueueDistribution steady_initial(const RateProfile& profile, std::size_t n);

std::vector<QueueDistribution> solve(const RateProfile& profile, const QueueDistribution& initial,
                                     std::span<const double> output_times,
                                     const SolverSettings& settings = {});

// Uniform output grid t0 + dt, t0 + 2 dt, ..., horizon.
std::vector<QueueDistribution> solve(const RateProfile& profile, const QueueDistribution& initial,
                                     double horizon, const SolverSettings& settings = {},
                                     double output_dt = 0.1);

}  // namespace kolmogorov
}  // namespace mtq
