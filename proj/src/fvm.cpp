#include "mtq/fvm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mtq/errors.hpp"

namespace mtq::fvm {

namespace {

// Neumaier-compensated sum; mass conservation is checked at the 1e-12 level.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

std::size_t cell_count(double dx, double x_hi) {
  if (!(dx > 0.0) || !(x_hi > 0.0)) throw DomainError("grid: dx and x_hi must be > 0");
  const double n = x_hi / dx;
  const auto cells = static_cast<std::size_t>(std::llround(n));
  if (cells < 2 || std::abs(n - static_cast<double>(cells)) > 1e-8 * n) {
    throw ConfigError("grid: x_hi must be a multiple of dx with at least two cells");
  }
  return cells;
}

}  // namespace

double DensityGrid::mass() const {
  CompensatedSum s;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double w = (i == 0 || i + 1 == rho.size()) ? 0.5 : 1.0;
    s.add(w * rho[i]);
  }
  return s.value() * dx;
}

void DensityGrid::check_invariants(double mass_tol) const {
  if (!(dx > 0.0) || rho.size() != cells + 1) throw NumericalFailure("density grid: malformed");
  const auto it = std::min_element(rho.begin(), rho.end());
  if (*it < -1e-12) {
    std::ostringstream msg;
    msg << "density grid at t=" << t << ": rho_" << (it - rho.begin()) << " = " << *it;
    throw NumericalFailure(msg.str());
  }
  const double m = mass();
  if (!(std::abs(m - 1.0) <= mass_tol)) {
    std::ostringstream msg;
    msg << "density grid at t=" << t << ": mass " << m << " deviates from 1";
    throw NumericalFailure(msg.str());
  }
}

DensityGrid sample_grid(const std::function<double(double)>& f, double dx, double x_hi, double t) {
  DensityGrid g;
  g.dx = dx;
  g.cells = cell_count(dx, x_hi);
  g.t = t;
  g.rho.resize(g.cells + 1);
  for (std::size_t i = 0; i <= g.cells; ++i) g.rho[i] = f(dx * static_cast<double>(i));
  const double m = g.mass();
  if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("sample_grid: density has no mass on the grid");
  for (auto& v : g.rho) v /= m;
  return g;
}

DensityGrid initial_grid(const RateProfile& profile, double dx, double x_hi) {
  const auto coef = coefficients(profile.initial());
  if (!(coef.a < 0.0)) {
    throw NoSteadyStateError("initial grid: initial utilization must be < 1 for steady initial data");
  }
  return sample_grid([coef](double x) { return steady_density(coef, x); }, dx, x_hi);
}

double numerical_flux(Coefficients coef, double u, double v, double dx) {
  if (!(dx > 0.0)) throw DomainError("numerical_flux: dx must be > 0");
  return -coef.b * (v - u) / dx + coef.a * 0.5 * (u + v);
}

double numerical_flux(double t, double u, double v, double dx, const RateProfile& profile) {
  return numerical_flux(coefficients(profile.at(t)), u, v, dx);
}

double stable_dt(double t, double dx, const RateProfile& profile, double safety) {
  if (!(dx > 0.0)) throw DomainError("stable_dt: dx must be > 0");
  if (!(safety > 0.0 && safety <= 1.0)) throw DomainError("stable_dt: safety must lie in (0, 1]");
  const auto coef = coefficients(profile.at(t));
  return safety * dx * dx / (2.0 * coef.b);
}

void step_in_place(DensityGrid& grid, double dt, const RateProfile& profile) {
  if (!(dt > 0.0)) throw DomainError("fvm step: dt must be > 0");
  const double limit = stable_dt(grid.t, grid.dx, profile, 1.0);
  if (dt > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "fvm step: dt=" << dt << " exceeds the stability bound " << limit;
    throw StabilityError(msg.str());
  }
  const auto coef = coefficients(profile.at(grid.t));
  const double dx = grid.dx;
  const double diff = coef.b / dx;
  const double adv = 0.5 * coef.a;
  const double r = dt / dx;
  auto& rho = grid.rho;
  const std::size_t n = rho.size();

  // F_{i+1/2} uses old values of nodes i and i+1; node i is overwritten only
  // after its right flux is formed, so one pass suffices.
  double f_right = -diff * (rho[1] - rho[0]) + adv * (rho[0] + rho[1]);
  rho[0] -= 2.0 * r * f_right;
  double f_left = f_right;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    f_right = -diff * (rho[i + 1] - rho[i]) + adv * (rho[i] + rho[i + 1]);
    rho[i] -= r * (f_right - f_left);
    f_left = f_right;
  }
  rho[n - 1] += 2.0 * r * f_left;
  grid.t += dt;
}

DensityGrid step(const DensityGrid& grid, double dt, const RateProfile& profile) {
  DensityGrid out = grid;
  step_in_place(out, dt, profile);
  return out;
}

void solve_pde(const RateProfile& profile, DensityGrid grid, std::span<const double> output_times,
               const GridObserver& observer, double safety) {
  if (grid.rho.size() != grid.cells + 1 || grid.cells < 2) throw DomainError("solve_pde: malformed grid");
  const double m0 = grid.mass();
  if (!(std::abs(m0 - 1.0) <= 1e-10)) throw DomainError("solve_pde: initial density is not normalized");

  for (std::size_t j = 0; j < output_times.size(); ++j) {
    const double target = output_times[j];
    if (target < grid.t || (j > 0 && target < output_times[j - 1])) {
      throw DomainError("solve_pde: output times must be nondecreasing and >= initial time");
    }
    while (grid.t < target) {
      double dt = stable_dt(grid.t, grid.dx, profile, safety);
      const bool land = grid.t + dt >= target;
      if (land) dt = target - grid.t;
      if (dt <= 0.0) break;
      step_in_place(grid, dt, profile);
      if (land) grid.t = target;
    }
    const double drift = std::abs(grid.mass() - m0);
    if (!(drift <= kMassDriftTolerance)) {
      std::ostringstream msg;
      msg << "solve_pde: mass drift " << drift << " at t=" << grid.t;
      throw NumericalFailure(msg.str());
    }
    observer(grid);
  }
}

std::vector<DensityGrid> solve_pde(const RateProfile& profile, const DensityGrid& initial,
                                   std::span<const double> output_times, double safety) {
  std::vector<DensityGrid> out;
  out.reserve(output_times.size());
  solve_pde(profile, initial, output_times, [&out](const DensityGrid& g) { out.push_back(g); }, safety);
  return out;
}

std::size_t nodes_per_unit(double dx) {
  if (!(dx > 0.0)) throw DomainError("dx must be > 0");
  const double m = 1.0 / dx;
  const auto r = static_cast<std::size_t>(std::llround(m));
  if (r == 0 || std::abs(m - static_cast<double>(r)) > 1e-9 * m) {
    throw ConfigError("grid spacing must divide 1 so integer points are grid nodes");
  }
  return r;
}

std::vector<double> cell_probabilities(const DensityGrid& grid, std::size_t K) {
  if (static_cast<double>(K) > grid.x_hi() + 1e-9) {
    throw DomainError("cell_probabilities: K exceeds the grid extent");
  }
  const std::size_t m = nodes_per_unit(grid.dx);
  std::vector<double> p(K);
  for (std::size_t k = 0; k < K; ++k) {
    const std::size_t lo = k * m;
    double s = 0.5 * (grid.rho[lo] + grid.rho[lo + m]);
    for (std::size_t i = lo + 1; i < lo + m; ++i) s += grid.rho[i];
    p[k] = s * grid.dx;
  }
  return p;
}

double expected_length(const DensityGrid& grid) {
  CompensatedSum s;
  const std::size_t n = grid.rho.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = (i + 1 == n) ? 0.5 : 1.0;
    s.add(w * grid.dx * static_cast<double>(i) * grid.rho[i]);
  }
  return s.value() * grid.dx;
}

double expected_length_rate(const DensityGrid& grid, const RateProfile& profile) {
  const std::size_t m = nodes_per_unit(grid.dx);
  const auto coef = coefficients(profile.at(grid.t));
  double sum_rho = 0.0;
  double sum_grad = 0.0;
  for (std::size_t i = m; i + 1 < grid.rho.size(); i += m) {
    sum_rho += grid.rho[i];
    sum_grad += (grid.rho[i + 1] - grid.rho[i - 1]) / (2.0 * grid.dx);
  }
  return coef.a * sum_rho - coef.b * sum_grad;
}

}  // namespace mtq::fvm
