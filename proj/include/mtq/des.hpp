#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mtq/approx.hpp"
#include "mtq/rates.hpp"

namespace mtq::des {

// Per-path generator: std::mt19937_64 seeded through std::seed_seq{seed lo/hi, path lo/hi};
// uniforms take the top 53 bits; exponentials are -log1p(-u)/rate.
inline constexpr std::string_view kAlgorithmId = "mt19937_64+seed_seq(seed,path)+u53+thinning/1";

struct SimConfig {
  RateProfile profile;
  double horizon = 0.0;
  std::size_t n_paths = 1;
  std::uint64_t seed = 0;
  std::vector<double> sample_times;
  // Dominating rates; must bound lambda(t) and mu(t) on [0, horizon].
  double lambda_max = 0.0;
  double mu_max = 0.0;
  // Initial queue-length pmf. Empty selects the truncated steady pmf of the initial rates.
  std::vector<double> initial_pmf;
  bool record_paths = false;
  // 0 selects std::thread::hardware_concurrency().
  std::size_t threads = 0;

  // Bounds taken from profile.upper_bounds(horizon).
  static SimConfig with_profile_bounds(RateProfile profile, double horizon, std::size_t n_paths,
                                       std::uint64_t seed, std::vector<double> sample_times);

  void validate() const;
};

std::vector<double> point_mass(std::size_t k);

// Queue-length counts at each sample time across all paths.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution(std::vector<double> times, std::size_t n_paths);

  std::size_t n_paths() const { return n_paths_; }
  std::span<const double> times() const { return times_; }

  // Counts for sample time i; entry k counts paths with k in system.
  std::span<const std::uint64_t> counts(std::size_t i) const { return counts_.at(i); }
  void add(std::size_t i, std::size_t k, std::uint64_t n = 1);
  void merge(const EmpiricalDistribution& other);

  double p_hat(std::size_t i, std::size_t k) const;
  // Binomial standard error sqrt(p (1 - p) / n).
  double standard_error(std::size_t i, std::size_t k) const;
  std::vector<double> pmf(std::size_t i) const;
  double mean_length(std::size_t i) const;

  bool operator==(const EmpiricalDistribution&) const = default;

 private:
  std::vector<double> times_;
  std::size_t n_paths_;
  std::vector<std::vector<std::uint64_t>> counts_;
};

struct PathLog {
  std::size_t initial_state = 0;
  std::vector<double> arrivals;
  std::vector<double> departures;
};

struct SimResult {
  EmpiricalDistribution distribution;
  std::vector<PathLog> paths;  // filled only when record_paths is set
  std::uint64_t seed = 0;
  std::string_view algorithm = kAlgorithmId;
  std::uint64_t candidate_events = 0;
  std::uint64_t accepted_arrivals = 0;
  std::uint64_t accepted_departures = 0;
};

// Results do not depend on the thread count.
SimResult simulate(const SimConfig& config);

struct OutflowEstimate {
  approx::OutflowSeries series;
  std::vector<double> standard_error;
};

// Departures in [t, t + window) per path, averaged and divided by window.
OutflowEstimate outflow_estimate(std::span<const PathLog> paths, std::span<const double> window_starts,
                                 double window);

}  // namespace mtq::des
