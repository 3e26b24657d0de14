#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mtq/kolmogorov.hpp"
#include "mtq/rates.hpp"
#include "mtq/rk23.hpp"

namespace mtq::approx {

// Expected departure rate over time for one method.
struct OutflowSeries {
  std::string method;
  std::vector<double> times;
  std::vector<double> values;
};

// mu (1 - p0). p0 may exceed [0, 1] by 1e-9 of roundoff; it is clamped.
double expected_outflow(double mu, double p0);

double outflow_from_distribution(const QueueDistribution& dist, const RateProfile& profile);

OutflowSeries outflow_from_distributions(std::span<const QueueDistribution> dists,
                                         const RateProfile& profile, std::string method = "ode");

// Outflow from empty-queue probabilities sampled at the given times.
OutflowSeries outflow_from_idle_probabilities(std::span<const double> times,
                                              std::span<const double> p0, const RateProfile& profile,
                                              std::string method = "pde");

// Pointwise stationary approximation of the expected number in system.
struct RiderState {
  double t = 0.0;
  double expected_parts = 0.0;
};

double rider_rhs(double expected_parts, double t, const RateProfile& profile, double transition);

// Default initial value is the steady expected length at the profile's initial
// rates; a ConfigError demands an explicit value when that utilization is >= 1.
std::vector<RiderState> rider_solve(const RateProfile& profile, std::span<const double> output_times,
                                    double transition = 0.0,
                                    std::optional<double> initial_parts = std::nullopt,
                                    const SolverSettings& settings = {});

// lambda(t) - dL/dt along the trajectory.
OutflowSeries rider_outflow(std::span<const RiderState> trajectory, const RateProfile& profile,
                            double transition = 0.0);

using Approximator =
    std::function<OutflowSeries(const RateProfile& profile, std::span<const double> times)>;

struct ApproximatorHandle {
  std::string name;
};

// Named external outflow approximators. Registration is expected at start-up;
// lookups may run concurrently.
class ApproximatorRegistry {
 public:
  ApproximatorHandle add(const std::string& name, Approximator fn);
  void remove(const ApproximatorHandle& handle);
  const Approximator& get(const std::string& name) const;
  bool contains(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, Approximator> entries_;
};

ApproximatorRegistry& default_registry();

inline ApproximatorHandle register_external_approximator(const std::string& name, Approximator fn) {
  return default_registry().add(name, std::move(fn));
}

}  // namespace mtq::approx
