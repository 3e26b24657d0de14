#include "mtq/approx.hpp"

#include <algorithm>
#include <cmath>

#include "mtq/errors.hpp"

namespace mtq::approx {

double expected_outflow(double mu, double p0) {
  if (!(mu >= 0.0)) throw DomainError("expected_outflow: mu must be >= 0");
  if (!(p0 >= -1e-9 && p0 <= 1.0 + 1e-9)) throw DomainError("expected_outflow: p0 outside [0, 1]");
  return mu * (1.0 - std::clamp(p0, 0.0, 1.0));
}

double outflow_from_distribution(const QueueDistribution& dist, const RateProfile& profile) {
  if (dist.p.empty()) throw DomainError("outflow: empty distribution");
  return expected_outflow(profile.at(dist.t).mu, dist.p[0]);
}

OutflowSeries outflow_from_distributions(std::span<const QueueDistribution> dists,
                                         const RateProfile& profile, std::string method) {
  OutflowSeries s{std::move(method), {}, {}};
  s.times.reserve(dists.size());
  s.values.reserve(dists.size());
  for (const auto& d : dists) {
    s.times.push_back(d.t);
    s.values.push_back(outflow_from_distribution(d, profile));
  }
  return s;
}

OutflowSeries outflow_from_idle_probabilities(std::span<const double> times,
                                              std::span<const double> p0, const RateProfile& profile,
                                              std::string method) {
  if (times.size() != p0.size()) throw DomainError("outflow: times and p0 differ in length");
  OutflowSeries s{std::move(method), {times.begin(), times.end()}, {}};
  s.values.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    s.values.push_back(expected_outflow(profile.at(times[i]).mu, p0[i]));
  }
  return s;
}

double rider_rhs(double expected_parts, double t, const RateProfile& profile, double transition) {
  const auto r = profile.at(t);
  const double rho = r.lambda / r.mu;
  const double l = expected_parts;
  return r.mu * std::exp(-r.mu * transition) * (rho - l / (1.0 + l));
}

std::vector<RiderState> rider_solve(const RateProfile& profile, std::span<const double> output_times,
                                    double transition, std::optional<double> initial_parts,
                                    const SolverSettings& settings) {
  double l0 = 0.0;
  if (initial_parts) {
    l0 = *initial_parts;
  } else {
    const auto rho0 = TrafficIntensity::of(profile.initial());
    if (!rho0.stable()) {
      throw ConfigError("rider: initial utilization >= 1; an explicit initial expected length is required");
    }
    l0 = steady_expected_length(rho0);
  }
  if (!(l0 >= 0.0)) throw DomainError("rider: initial expected length must be >= 0");

  std::vector<RiderState> out;
  out.reserve(output_times.size());
  auto f = [&](double t, std::span<const double> y, std::span<double> dy) {
    dy[0] = rider_rhs(std::max(y[0], 0.0), t, profile, transition);
  };
  auto observe = [&](double t, std::span<const double> y) {
    out.push_back({t, std::max(y[0], 0.0)});
  };
  integrate_rk23(f, 0.0, {l0}, output_times, settings, observe);
  return out;
}

OutflowSeries rider_outflow(std::span<const RiderState> trajectory, const RateProfile& profile,
                            double transition) {
  OutflowSeries s{"rider", {}, {}};
  for (const auto& st : trajectory) {
    s.times.push_back(st.t);
    s.values.push_back(profile.at(st.t).lambda - rider_rhs(st.expected_parts, st.t, profile, transition));
  }
  return s;
}

ApproximatorHandle ApproximatorRegistry::add(const std::string& name, Approximator fn) {
  if (name.empty()) throw ConfigError("approximator name must not be empty");
  if (!fn) throw ConfigError("approximator '" + name + "' has no callable");
  std::lock_guard lock(mutex_);
  if (!entries_.emplace(name, std::move(fn)).second) {
    throw ConfigError("approximator '" + name + "' is already registered");
  }
  return ApproximatorHandle{name};
}

void ApproximatorRegistry::remove(const ApproximatorHandle& handle) {
  std::lock_guard lock(mutex_);
  entries_.erase(handle.name);
}

const Approximator& ApproximatorRegistry::get(const std::string& name) const {
  std::lock_guard lock(mutex_);
  const auto it = entries_.find(name);
  if (it == entries_.end()) throw ConfigError("unknown approximator '" + name + "'");
  return it->second;
}

bool ApproximatorRegistry::contains(const std::string& name) const {
  std::lock_guard lock(mutex_);
  return entries_.count(name) != 0;
}

std::vector<std::string> ApproximatorRegistry::names() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [name, fn] : entries_) out.push_back(name);
  return out;
}

ApproximatorRegistry& default_registry() {
  static ApproximatorRegistry registry;
  return registry;
}

}  // namespace mtq::approx
