#include "mtq/des.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "mtq/errors.hpp"

namespace mtq::des {

namespace {

class PathRng {
 public:
  PathRng(std::uint64_t seed, std::uint64_t path) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)};
    engine_.seed(seq);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

 private:
  std::mt19937_64 engine_;
};

std::size_t draw_initial(PathRng& rng, std::span<const double> cdf) {
  const double u = rng.uniform() * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

struct Tally {
  EmpiricalDistribution dist;
  std::uint64_t candidates = 0;
  std::uint64_t arrivals = 0;
  std::uint64_t departures = 0;
};

void run_path(const SimConfig& cfg, std::span<const double> cdf, std::size_t path, Tally& tally,
              PathLog* log) {
  PathRng rng(cfg.seed, path);
  std::size_t state = draw_initial(rng, cdf);
  if (log) log->initial_state = state;
  const double dominating = cfg.lambda_max + cfg.mu_max;
  const auto& samples = cfg.sample_times;
  std::size_t next = 0;
  double t = 0.0;
  for (;;) {
    t += rng.exponential(dominating);
    // Right-continuous paths: samples strictly before the event see the old state.
    while (next < samples.size() && samples[next] < t) tally.dist.add(next++, state);
    if (t > cfg.horizon) break;
    ++tally.candidates;
    const auto r = cfg.profile.at(t);
    const double u = rng.uniform() * dominating;
    if (u < r.lambda) {
      ++state;
      ++tally.arrivals;
      if (log) log->arrivals.push_back(t);
    } else if (u < r.lambda + r.mu && state > 0) {
      --state;
      ++tally.departures;
      if (log) log->departures.push_back(t);
    }
  }
  while (next < samples.size()) tally.dist.add(next++, state);
}

}  // namespace

SimConfig SimConfig::with_profile_bounds(RateProfile profile, double horizon, std::size_t n_paths,
                                         std::uint64_t seed, std::vector<double> sample_times) {
  const auto ub = profile.upper_bounds(horizon);
  SimConfig cfg{std::move(profile)};
  cfg.horizon = horizon;
  cfg.n_paths = n_paths;
  cfg.seed = seed;
  cfg.sample_times = std::move(sample_times);
  cfg.lambda_max = ub.lambda;
  cfg.mu_max = ub.mu;
  return cfg;
}

void SimConfig::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("simulation: horizon must be finite and > 0");
  if (n_paths == 0) throw ConfigError("simulation: n_paths must be >= 1");
  if (!std::is_sorted(sample_times.begin(), sample_times.end())) {
    throw ConfigError("simulation: sample times must be nondecreasing");
  }
  if (!sample_times.empty() && (sample_times.front() < 0.0 || sample_times.back() > horizon)) {
    throw ConfigError("simulation: sample times must lie in [0, horizon]");
  }
  const auto ub = profile.upper_bounds(horizon);
  if (!std::isfinite(lambda_max) || !std::isfinite(mu_max) || lambda_max < ub.lambda ||
      mu_max < ub.mu) {
    std::ostringstream msg;
    msg << "simulation: rate bounds (" << lambda_max << ", " << mu_max
        << ") do not dominate the profile's suprema (" << ub.lambda << ", " << ub.mu << ")";
    throw ConfigError(msg.str());
  }
  if (!(lambda_max + mu_max > 0.0)) throw ConfigError("simulation: rate bounds must not both be zero");
  for (double v : initial_pmf) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("simulation: initial pmf entries must be >= 0");
  }
  if (!initial_pmf.empty() && std::abs(std::accumulate(initial_pmf.begin(), initial_pmf.end(), 0.0) - 1.0) > 1e-9) {
    throw ConfigError("simulation: initial pmf must sum to 1");
  }
}

std::vector<double> point_mass(std::size_t k) {
  std::vector<double> p(k + 1, 0.0);
  p[k] = 1.0;
  return p;
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> times, std::size_t n_paths)
    : times_(std::move(times)), n_paths_(n_paths), counts_(times_.size()) {}

void EmpiricalDistribution::add(std::size_t i, std::size_t k, std::uint64_t n) {
  auto& c = counts_.at(i);
  if (c.size() <= k) c.resize(k + 1, 0);
  c[k] += n;
}

void EmpiricalDistribution::merge(const EmpiricalDistribution& other) {
  if (other.times_ != times_) throw DomainError("empirical distribution: sample times differ");
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    const auto& src = other.counts_[i];
    for (std::size_t k = 0; k < src.size(); ++k) {
      if (src[k] != 0) add(i, k, src[k]);
    }
  }
}

double EmpiricalDistribution::p_hat(std::size_t i, std::size_t k) const {
  const auto& c = counts_.at(i);
  return k < c.size() ? static_cast<double>(c[k]) / static_cast<double>(n_paths_) : 0.0;
}

double EmpiricalDistribution::standard_error(std::size_t i, std::size_t k) const {
  const double p = p_hat(i, k);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n_paths_));
}

std::vector<double> EmpiricalDistribution::pmf(std::size_t i) const {
  const auto& c = counts_.at(i);
  std::vector<double> p(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) p[k] = p_hat(i, k);
  return p;
}

double EmpiricalDistribution::mean_length(std::size_t i) const {
  const auto& c = counts_.at(i);
  double s = 0.0;
  for (std::size_t k = 1; k < c.size(); ++k) s += static_cast<double>(k) * static_cast<double>(c[k]);
  return s / static_cast<double>(n_paths_);
}

SimResult simulate(const SimConfig& config) {
  config.validate();

  std::vector<double> pmf = config.initial_pmf;
  if (pmf.empty()) {
    const auto rho = TrafficIntensity::of(config.profile.initial());
    if (!rho.stable()) {
      throw ConfigError("simulation: initial utilization >= 1; an explicit initial pmf is required");
    }
    pmf = truncated_steady_pmf(rho);
  }
  std::vector<double> cdf(pmf.size());
  std::partial_sum(pmf.begin(), pmf.end(), cdf.begin());

  std::size_t workers = config.threads;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, config.n_paths);

  std::vector<PathLog> logs(config.record_paths ? config.n_paths : 0);
  std::vector<Tally> tallies;
  tallies.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    tallies.push_back({EmpiricalDistribution(config.sample_times, config.n_paths)});
  }

  auto work = [&](std::size_t w) {
    const std::size_t lo = config.n_paths * w / workers;
    const std::size_t hi = config.n_paths * (w + 1) / workers;
    for (std::size_t path = lo; path < hi; ++path) {
      run_path(config, cdf, path, tallies[w], config.record_paths ? &logs[path] : nullptr);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  SimResult result{EmpiricalDistribution(config.sample_times, config.n_paths)};
  result.seed = config.seed;
  for (const auto& t : tallies) {
    result.distribution.merge(t.dist);
    result.candidate_events += t.candidates;
    result.accepted_arrivals += t.arrivals;
    result.accepted_departures += t.departures;
  }
  result.paths = std::move(logs);
  return result;
}

OutflowEstimate outflow_estimate(std::span<const PathLog> paths, std::span<const double> window_starts,
                                 double window) {
  if (!(window > 0.0)) throw DomainError("outflow estimate: window must be > 0");
  if (paths.empty()) throw DomainError("outflow estimate: no recorded paths");
  OutflowEstimate out{{"des", {window_starts.begin(), window_starts.end()}, {}}, {}};
  const double n = static_cast<double>(paths.size());
  for (double t0 : window_starts) {
    double s = 0.0;
    double s2 = 0.0;
    for (const auto& p : paths) {
      const auto lo = std::lower_bound(p.departures.begin(), p.departures.end(), t0);
      const auto hi = std::lower_bound(lo, p.departures.end(), t0 + window);
      const double c = static_cast<double>(hi - lo);
      s += c;
      s2 += c * c;
    }
    const double mean = s / n;
    const double var = paths.size() > 1 ? std::max(0.0, (s2 - n * mean * mean) / (n - 1.0)) : 0.0;
    out.series.values.push_back(mean / window);
    out.standard_error.push_back(std::sqrt(var / n) / window);
  }
  return out;
}

}  // namespace mtq::des
