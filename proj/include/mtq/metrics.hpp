#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mtq::metrics {

// max_{k < K} |p_k - q_k|. Throws DomainError when either vector is shorter than K.
double sup_error(std::span<const double> p, std::span<const double> q, std::size_t K);

// Trapezoidal integral of |a - b| over the given time grid.
double l1_time_error(std::span<const double> a, std::span<const double> b, std::span<const double> times);

// max_i |a_i - b_i| on a shared grid.
double max_abs_error(std::span<const double> a, std::span<const double> b);

// Piecewise-linear interpolation of (x, y) onto query points; constant outside [x_0, x_n].
std::vector<double> interpolate(std::span<const double> x, std::span<const double> y,
                                std::span<const double> query);

struct ErrorReport {
  std::string method;
  std::string baseline;
  std::size_t K = 0;
  std::vector<double> times;
  std::vector<double> sup_errors;  // per time, over k < K
  double max_sup_error = 0.0;
  // Outflow errors; negative when the method has no outflow series.
  double outflow_sup_error = -1.0;
  double outflow_l1_error = -1.0;
};

// Fills times, sup_errors and max_sup_error from per-time probability vectors.
ErrorReport pmf_error_report(std::string method, std::string baseline, std::size_t K,
                             std::span<const double> times, std::span<const std::vector<double>> method_p,
                             std::span<const std::vector<double>> baseline_p);

}  // namespace mtq::metrics
