#include "mtq/kolmogorov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mtq/errors.hpp"

namespace mtq {

double QueueDistribution::mass() const { return std::accumulate(p.begin(), p.end(), 0.0); }

double QueueDistribution::expected_length() const {
  double s = 0.0;
  for (std::size_t k = 1; k < p.size(); ++k) s += static_cast<double>(k) * p[k];
  return s;
}

void QueueDistribution::check_invariants() const {
  const auto min_it = std::min_element(p.begin(), p.end());
  if (min_it != p.end() && *min_it < -kNegativeTolerance) {
    std::ostringstream msg;
    msg << "queue distribution at t=" << t << ": p_" << (min_it - p.begin()) << " = " << *min_it
        << " is negative";
    throw NumericalFailure(msg.str());
  }
  const double m = mass();
  if (!(std::abs(m - 1.0) <= kMassTolerance)) {
    std::ostringstream msg;
    msg << "queue distribution at t=" << t << ": total mass " << m << " deviates from 1";
    throw NumericalFailure(msg.str());
  }
}

QueueDistribution QueueDistribution::clamped() const {
  QueueDistribution out{t, p};
  for (auto& v : out.p) v = std::max(v, 0.0);
  const double m = out.mass();
  if (m > 0.0) {
    for (auto& v : out.p) v /= m;
  }
  return out;
}

std::vector<double> uniform_times(double horizon, double dt, bool include_zero) {
  if (!(horizon > 0.0) || !(dt > 0.0)) throw DomainError("uniform_times: horizon and dt must be > 0");
  const auto n = static_cast<std::size_t>(std::llround(horizon / dt));
  if (n == 0 || std::abs(static_cast<double>(n) * dt - horizon) > 1e-9 * horizon) {
    throw DomainError("uniform_times: horizon must be a multiple of dt");
  }
  std::vector<double> times;
  times.reserve(n + 1);
  if (include_zero) times.push_back(0.0);
  for (std::size_t i = 1; i <= n; ++i) times.push_back(i == n ? horizon : static_cast<double>(i) * dt);
  return times;
}

namespace kolmogorov {

void rhs(Rates r, std::span<const double> p, std::span<double> dp) {
  const std::size_t n = p.size();
  if (n < 2) throw DomainError("kolmogorov rhs: need at least two states");
  const double lam = r.lambda;
  const double mu = r.mu;
  dp[0] = mu * p[1] - lam * p[0];
  for (std::size_t k = 1; k + 1 < n; ++k) {
    dp[k] = lam * p[k - 1] - (lam + mu) * p[k] + mu * p[k + 1];
  }
  dp[n - 1] = lam * p[n - 2] - mu * p[n - 1];
}

std::vector<double> rhs(double t, std::span<const double> p, const RateProfile& profile) {
  std::vector<double> dp(p.size());
  rhs(profile.at(t), p, dp);
  return dp;
}

double expected_length_rate(double t, std::span<const double> p, const RateProfile& profile) {
  const auto dp = rhs(t, p, profile);
  double s = 0.0;
  for (std::size_t k = 1; k < dp.size(); ++k) s += static_cast<double>(k) * dp[k];
  return s;
}

QueueDistribution steady_initial(const RateProfile& profile, std::size_t n) {
  return QueueDistribution{0.0, steady_pmf_vector(TrafficIntensity::of(profile.initial()), n)};
}

std::vector<QueueDistribution> solve(const RateProfile& profile, const QueueDistribution& initial,
                                     std::span<const double> output_times,
                                     const SolverSettings& settings) {
  if (initial.size() < 2) throw DomainError("kolmogorov solve: need at least two states");
  initial.check_invariants();

  std::vector<QueueDistribution> out;
  out.reserve(output_times.size());
  auto f = [&profile](double t, std::span<const double> p, std::span<double> dp) {
    rhs(profile.at(t), p, dp);
  };
  auto observe = [&out](double t, std::span<const double> p) {
    QueueDistribution d{t, std::vector<double>(p.begin(), p.end())};
    d.check_invariants();
    out.push_back(std::move(d));
  };
  integrate_rk23(f, initial.t, initial.p, output_times, settings, observe);
  return out;
}

std::vector<QueueDistribution> solve(const RateProfile& profile, const QueueDistribution& initial,
                                     double horizon, const SolverSettings& settings, double output_dt) {
  if (!(horizon > 0.0)) throw DomainError("kolmogorov solve: horizon must be > 0");
  auto times = uniform_times(horizon, output_dt);
  for (auto& t : times) t += initial.t;
  return solve(profile, initial, times, settings);
}

}  // namespace kolmogorov
}  // namespace mtq
