#include "mtq/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mtq/errors.hpp"

namespace mtq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_rates(double lambda, double mu, const char* what) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError(std::string(what) + ": arrival rate must be finite and >= 0");
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw DomainError(std::string(what) + ": service rate must be finite and > 0");
  }
}

void require_knots(const std::vector<Knot>& knots, const char* name, bool positive) {
  if (knots.empty()) {
    throw DomainError(std::string("piecewise-linear profile: no knots for ") + name);
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const auto& k = knots[i];
    if (!std::isfinite(k.t) || !std::isfinite(k.value)) {
      throw DomainError(std::string("piecewise-linear profile: non-finite knot in ") + name);
    }
    if (positive ? !(k.value > 0.0) : !(k.value >= 0.0)) {
      throw DomainError(std::string("piecewise-linear profile: invalid rate value in ") + name);
    }
    if (i > 0 && !(k.t > knots[i - 1].t)) {
      throw DomainError(std::string("piecewise-linear profile: knot times not strictly increasing in ") +
                        name);
    }
  }
}

double interpolate(const std::vector<Knot>& knots, double t) {
  if (t <= knots.front().t) return knots.front().value;
  if (t >= knots.back().t) return knots.back().value;
  auto hi = std::upper_bound(knots.begin(), knots.end(), t,
                             [](double v, const Knot& k) { return v < k.t; });
  auto lo = hi - 1;
  const double w = (t - lo->t) / (hi->t - lo->t);
  return lo->value + w * (hi->value - lo->value);
}

double max_over(const std::vector<Knot>& knots, double horizon) {
  // Linear pieces attain their maxima at knots or at the horizon end point.
  double m = std::max(interpolate(knots, 0.0), interpolate(knots, horizon));
  for (const auto& k : knots) {
    if (k.t >= 0.0 && k.t <= horizon) m = std::max(m, k.value);
  }
  return m;
}

}  // namespace

TrafficIntensity::TrafficIntensity(double value) : value_(value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw DomainError("traffic intensity must be finite and >= 0");
  }
}

TrafficIntensity TrafficIntensity::of(Rates r) {
  require_rates(r.lambda, r.mu, "traffic intensity");
  return TrafficIntensity(r.lambda / r.mu);
}

RateProfile::RateProfile(Spec spec) : spec_(std::move(spec)) {
  std::visit(overloaded{
                 [](const ConstantRates& c) { require_rates(c.lambda, c.mu, "constant profile"); },
                 [](const StepRates& s) {
                   require_rates(s.lambda0, s.mu0, "step profile (initial)");
                   require_rates(s.lambda1, s.mu1, "step profile (final)");
                 },
                 [](const CyclicRates& c) {
                   require_rates(c.lambda0, c.mu, "cyclic profile");
                   require_rates(c.lambda1, c.mu, "cyclic profile");
                   if (!(c.period > 0.0) || !std::isfinite(c.period)) {
                     throw DomainError("cyclic profile: period must be > 0");
                   }
                 },
                 [](const PiecewiseLinearRates& p) {
                   require_knots(p.lambda, "lambda", false);
                   require_knots(p.mu, "mu", true);
                 },
             },
             spec_);
}

RateProfile RateProfile::constant(double lambda, double mu) {
  return RateProfile(ConstantRates{lambda, mu});
}

RateProfile RateProfile::step(double lambda0, double mu0, double lambda1, double mu1) {
  return RateProfile(StepRates{lambda0, mu0, lambda1, mu1});
}

RateProfile RateProfile::cyclic(double lambda0, double lambda1, double period, double mu) {
  return RateProfile(CyclicRates{lambda0, lambda1, period, mu});
}

RateProfile RateProfile::piecewise_linear(std::vector<Knot> lambda, std::vector<Knot> mu) {
  return RateProfile(PiecewiseLinearRates{std::move(lambda), std::move(mu)});
}

Rates RateProfile::at(double t) const {
  if (!(t >= 0.0)) throw DomainError("rate profile evaluated at negative time");
  return std::visit(
      overloaded{
          [](const ConstantRates& c) { return Rates{c.lambda, c.mu}; },
          [](const StepRates& s) { return Rates{s.lambda1, s.mu1}; },
          [t](const CyclicRates& c) {
            const double phase = 2.0 * std::numbers::pi * t / c.period;
            const double lambda =
                0.5 * (c.lambda0 - c.lambda1) * std::cos(phase) + 0.5 * (c.lambda0 + c.lambda1);
            return Rates{std::max(lambda, 0.0), c.mu};
          },
          [t](const PiecewiseLinearRates& p) {
            return Rates{interpolate(p.lambda, t), interpolate(p.mu, t)};
          },
      },
      spec_);
}

Rates RateProfile::initial() const {
  if (const auto* s = std::get_if<StepRates>(&spec_)) return Rates{s->lambda0, s->mu0};
  return at(0.0);
}

Rates RateProfile::upper_bounds(double horizon) const {
  if (!(horizon >= 0.0)) throw DomainError("negative horizon");
  return std::visit(
      overloaded{
          [](const ConstantRates& c) { return Rates{c.lambda, c.mu}; },
          [](const StepRates& s) { return Rates{s.lambda1, s.mu1}; },
          [this, horizon](const CyclicRates& c) {
            // Full cosine range is reached once horizon covers half a period; before that
            // lambda is monotone and the maximum sits at an end point.
            if (horizon >= 0.5 * c.period) return Rates{std::max(c.lambda0, c.lambda1), c.mu};
            return Rates{std::max(at(0.0).lambda, at(horizon).lambda), c.mu};
          },
          [horizon](const PiecewiseLinearRates& p) {
            return Rates{max_over(p.lambda, horizon), max_over(p.mu, horizon)};
          },
      },
      spec_);
}

bool RateProfile::piecewise_constant_in_time() const {
  return std::holds_alternative<ConstantRates>(spec_) || std::holds_alternative<StepRates>(spec_);
}

std::string_view RateProfile::kind() const {
  return std::visit(overloaded{
                        [](const ConstantRates&) { return std::string_view("constant"); },
                        [](const StepRates&) { return std::string_view("step"); },
                        [](const CyclicRates&) { return std::string_view("cyclic"); },
                        [](const PiecewiseLinearRates&) { return std::string_view("piecewise-linear"); },
                    },
                    spec_);
}

Rates eval_rates(const RateProfile& profile, double t) { return profile.at(t); }

Coefficients coefficients(double lambda, double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("coefficients: service rate must be > 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError("coefficients: arrival rate must be >= 0");
  }
  const double a = lambda - mu;
  const double lam = std::max(lambda, kLambdaEps);
  // b = (mu - lambda) / (ln mu - ln lambda) written as mu x / log1p(x), x = lambda/mu - 1,
  // which has no cancellation near lambda = mu.
  const double x = (lam - mu) / mu;
  if (std::abs(x) <= 1e-12) return {a, mu};
  return {a, mu * x / std::log1p(x)};
}

double steady_pmf(TrafficIntensity rho, std::size_t k) {
  if (!rho.stable()) throw NoSteadyStateError("steady_pmf: utilization >= 1 has no steady state");
  return (1.0 - rho.value()) * std::pow(rho.value(), static_cast<double>(k));
}

std::vector<double> truncated_steady_pmf(TrafficIntensity rho, double tail_tol) {
  if (!rho.stable()) throw NoSteadyStateError("steady pmf: utilization >= 1 has no steady state");
  const double r = rho.value();
  std::size_t n = 1;
  if (r > 0.0) {
    // Tail beyond n is r^n.
    n = static_cast<std::size_t>(std::ceil(std::log(tail_tol) / std::log(r)));
    n = std::max<std::size_t>(n, 1);
  }
  return steady_pmf_vector(rho, n);
}

std::vector<double> steady_pmf_vector(TrafficIntensity rho, std::size_t n) {
  if (n == 0) throw DomainError("steady pmf: zero length");
  std::vector<double> p(n);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    p[k] = steady_pmf(rho, k);
    sum += p[k];
  }
  for (auto& v : p) v /= sum;
  return p;
}

double steady_density(double a, double b, double x) {
  if (!(a < 0.0)) throw NoSteadyStateError("steady_density: drift must be negative");
  if (!(b > 0.0)) throw DomainError("steady_density: diffusion must be positive");
  const double c = a / b;
  return -c * std::exp(c * x);
}

double steady_cell_mass(Coefficients coef, std::size_t k) {
  if (!(coef.a < 0.0)) throw NoSteadyStateError("steady_cell_mass: drift must be negative");
  if (!(coef.b > 0.0)) throw DomainError("steady_cell_mass: diffusion must be positive");
  const double c = coef.a / coef.b;
  // e^{ck} - e^{c(k+1)} = -expm1(c) e^{ck}
  return -std::expm1(c) * std::exp(c * static_cast<double>(k));
}

double steady_expected_length(TrafficIntensity rho) {
  if (!rho.stable()) throw NoSteadyStateError("steady expected length: utilization >= 1");
  return rho.value() / (1.0 - rho.value());
}

}  // namespace mtq
