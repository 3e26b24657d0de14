#include "mtq/rk23.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mtq/errors.hpp"

namespace mtq {

void SolverSettings::validate() const {
  if (!(rtol > 0.0) || !(atol > 0.0)) throw DomainError("solver tolerances must be positive");
  if (!(dt_max > 0.0)) throw DomainError("solver dt_max must be positive");
}

namespace {

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

double error_norm(std::span<const double> err, std::span<const double> y, std::span<const double> ynew,
                  const SolverSettings& s) {
  double m = 0.0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    const double scale = s.atol + s.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
    m = std::max(m, std::abs(err[i]) / scale);
  }
  return m;
}

void hermite(double t0, double h, std::span<const double> y0, std::span<const double> f0,
             std::span<const double> y1, std::span<const double> f1, double t, std::span<double> out) {
  const double s = (t - t0) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
  }
}

}  // namespace

IntegrationStats integrate_rk23(const OdeRhs& rhs, double t0, std::vector<double> y0,
                                std::span<const double> output_times, const SolverSettings& settings,
                                const OdeObserver& observer) {
  settings.validate();
  IntegrationStats stats;
  if (output_times.empty()) return stats;
  for (std::size_t i = 0; i < output_times.size(); ++i) {
    if (output_times[i] < t0 || (i > 0 && output_times[i] < output_times[i - 1])) {
      throw DomainError("integrate_rk23: output times must be nondecreasing and >= t0");
    }
  }

  const std::size_t n = y0.size();
  std::vector<double> y = std::move(y0), ynew(n), tmp(n), err(n), dense(n);
  std::vector<double> k1(n), k2(n), k3(n), k4(n);

  auto eval = [&](double t, std::span<const double> state, std::span<double> out) {
    rhs(t, state, out);
    ++stats.rhs_evals;
  };

  double t = t0;
  eval(t, y, k1);

  std::size_t next_out = 0;
  while (next_out < output_times.size() && output_times[next_out] == t) {
    observer(t, y);
    ++next_out;
  }
  if (next_out == output_times.size()) return stats;

  const double t_end = output_times.back();
  double h = settings.dt_init;
  if (!(h > 0.0)) {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = settings.atol + settings.rtol * std::abs(y[i]);
      d0 = std::max(d0, std::abs(y[i]) / sc);
      d1 = std::max(d1, std::abs(k1[i]) / sc);
    }
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  }
  h = std::min({h, settings.dt_max, t_end - t});

  while (next_out < output_times.size()) {
    if (h < kMinStep) {
      std::ostringstream msg;
      msg << "integrate_rk23: step size underflow (h=" << h << ") at t=" << t;
      throw StiffnessError(msg.str());
    }
    const bool last = t + h >= t_end - 1e-12 * std::max(1.0, std::abs(t_end));
    if (last) h = t_end - t;

    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    eval(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.75 * h * k2[i];
    eval(t + 0.75 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) {
      ynew[i] = y[i] + h * (2.0 / 9.0 * k1[i] + 1.0 / 3.0 * k2[i] + 4.0 / 9.0 * k3[i]);
    }
    const double t_new = last ? t_end : t + h;
    eval(t_new, ynew, k4);
    for (std::size_t i = 0; i < n; ++i) {
      err[i] = h * (-5.0 / 72.0 * k1[i] + 1.0 / 12.0 * k2[i] + 1.0 / 9.0 * k3[i] - 1.0 / 8.0 * k4[i]);
    }
    const double e = error_norm(err, y, ynew, settings);
    if (!std::isfinite(e)) {
      ++stats.rejected;
      h *= kMinFactor;
      continue;
    }
    if (e > 1.0) {
      ++stats.rejected;
      h *= std::max(kMinFactor, kSafety * std::cbrt(1.0 / e));
      continue;
    }

    ++stats.accepted;
    while (next_out < output_times.size() && output_times[next_out] <= t_new) {
      const double to = output_times[next_out];
      if (to == t_new) {
        observer(to, ynew);
      } else {
        hermite(t, t_new - t, y, k1, ynew, k4, to, dense);
        observer(to, dense);
      }
      ++next_out;
    }

    t = t_new;
    std::swap(y, ynew);
    std::swap(k1, k4);
    const double factor = e == 0.0 ? kMaxFactor : std::min(kMaxFactor, kSafety * std::cbrt(1.0 / e));
    h = std::min({h * std::max(kMinFactor, factor), settings.dt_max});
    if (t_end - t > 0.0) h = std::min(h, t_end - t);
  }
  return stats;
}

}  // namespace mtq
