#include "mtq/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "mtq/errors.hpp"

namespace mtq::metrics {

double sup_error(std::span<const double> p, std::span<const double> q, std::size_t K) {
  if (p.size() < K || q.size() < K) throw DomainError("sup_error: vectors do not cover indices 0..K-1");
  double m = 0.0;
  for (std::size_t k = 0; k < K; ++k) m = std::max(m, std::abs(p[k] - q[k]));
  return m;
}

double l1_time_error(std::span<const double> a, std::span<const double> b, std::span<const double> times) {
  if (a.size() != times.size() || b.size() != times.size()) {
    throw DomainError("l1_time_error: series and time grid differ in length");
  }
  double s = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double dt = times[i] - times[i - 1];
    if (dt < 0.0) throw DomainError("l1_time_error: time grid must be nondecreasing");
    s += 0.5 * dt * (std::abs(a[i] - b[i]) + std::abs(a[i - 1] - b[i - 1]));
  }
  return s;
}

double max_abs_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("max_abs_error: series differ in length");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<double> interpolate(std::span<const double> x, std::span<const double> y,
                                std::span<const double> query) {
  if (x.size() != y.size() || x.empty()) throw DomainError("interpolate: need matching nonempty x and y");
  if (!std::is_sorted(x.begin(), x.end())) throw DomainError("interpolate: x must be nondecreasing");
  std::vector<double> out;
  out.reserve(query.size());
  for (double q : query) {
    if (q <= x.front()) {
      out.push_back(y.front());
      continue;
    }
    if (q >= x.back()) {
      out.push_back(y.back());
      continue;
    }
    const auto hi = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), q) - x.begin());
    const std::size_t lo = hi - 1;
    const double w = (q - x[lo]) / (x[hi] - x[lo]);
    out.push_back(y[lo] + w * (y[hi] - y[lo]));
  }
  return out;
}

ErrorReport pmf_error_report(std::string method, std::string baseline, std::size_t K,
                             std::span<const double> times, std::span<const std::vector<double>> method_p,
                             std::span<const std::vector<double>> baseline_p) {
  if (method_p.size() != times.size() || baseline_p.size() != times.size()) {
    throw DomainError("error report: per-time vectors do not match the time grid");
  }
  ErrorReport r{std::move(method), std::move(baseline), K, {times.begin(), times.end()}, {}};
  r.sup_errors.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    r.sup_errors.push_back(sup_error(method_p[i], baseline_p[i], K));
  }
  if (!r.sup_errors.empty()) r.max_sup_error = *std::max_element(r.sup_errors.begin(), r.sup_errors.end());
  return r;
}

}  // namespace mtq::metrics
