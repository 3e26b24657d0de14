#include "mtq/experiment.hpp"

#include <algorithm>
#include <string_view>

#include "mtq/des.hpp"
#include "mtq/errors.hpp"
#include "mtq/fvm.hpp"
#include "mtq/kolmogorov.hpp"
#include "mtq/smoluchowski.hpp"

namespace mtq::experiment {

namespace {

MethodOutput run_ode(const Scenario& s, const RunOptions& opt) {
  MethodOutput out{"ode", s.output_times()};
  const auto initial = kolmogorov::steady_initial(s.profile, s.grid.N);
  const auto dists = kolmogorov::solve(s.profile, initial, out.times, opt.ode);
  for (const auto& d : dists) {
    out.pmf.emplace_back(d.p.begin(), d.p.begin() + static_cast<std::ptrdiff_t>(s.grid.K));
    out.mean_length.push_back(d.expected_length());
  }
  out.outflow = approx::outflow_from_distributions(dists, s.profile, "ode");
  return out;
}

smoluchowski::StepChangeParams closed_form_params(const Scenario& s, const std::string& method) {
  if (!s.profile.piecewise_constant_in_time()) {
    throw ConfigError("method '" + method + "' needs a constant or step rate profile, scenario '" + s.name +
                      "' has kind " + std::string(s.profile.kind()));
  }
  try {
    return smoluchowski::StepChangeParams::from_profile(s.profile);
  } catch (const NoSteadyStateError& e) {
    throw ConfigError("method '" + method + "': " + e.what());
  }
}

MethodOutput run_closed_form(const Scenario& s, const std::string& method, bool midpoint) {
  const auto params = closed_form_params(s, method);
  MethodOutput out{method, s.output_times()};
  for (double t : out.times) {
    std::vector<double> p(s.grid.K);
    for (std::size_t k = 0; k < s.grid.K; ++k) {
      p[k] = midpoint ? smoluchowski::pk_midpoint(k, t, params) : smoluchowski::pk_closed_form(k, t, params);
    }
    out.pmf.push_back(std::move(p));
  }
  std::vector<double> p0;
  for (const auto& p : out.pmf) p0.push_back(p[0]);
  out.outflow = approx::outflow_from_idle_probabilities(out.times, p0, s.profile, method);
  return out;
}

MethodOutput run_pde(const Scenario& s, const RunOptions& opt) {
  MethodOutput out{"pde", s.output_times()};
  const auto grid = fvm::initial_grid(s.profile, s.grid.dx, s.grid.x_hi);
  std::vector<double> p0;
  fvm::solve_pde(
      s.profile, grid, out.times,
      [&](const fvm::DensityGrid& g) {
        out.pmf.push_back(fvm::cell_probabilities(g, s.grid.K));
        out.mean_length.push_back(fvm::expected_length(g));
        p0.push_back(out.pmf.back()[0]);
      },
      opt.pde_safety);
  out.outflow = approx::outflow_from_idle_probabilities(out.times, p0, s.profile, "pde");
  return out;
}

MethodOutput run_des(const Scenario& s, const RunOptions& opt) {
  MethodOutput out{"des", s.output_times()};
  auto cfg = des::SimConfig::with_profile_bounds(s.profile, s.horizon, s.des_paths, s.des_seed, out.times);
  cfg.threads = opt.des_threads;
  const auto res = des::simulate(cfg);
  std::vector<double> p0;
  for (std::size_t i = 0; i < out.times.size(); ++i) {
    std::vector<double> p(s.grid.K, 0.0);
    for (std::size_t k = 0; k < s.grid.K; ++k) p[k] = res.distribution.p_hat(i, k);
    p0.push_back(p[0]);
    out.pmf.push_back(std::move(p));
    out.mean_length.push_back(res.distribution.mean_length(i));
  }
  out.outflow = approx::outflow_from_idle_probabilities(out.times, p0, s.profile, "des");
  out.metadata["des.seed"] = std::to_string(res.seed);
  out.metadata["des.paths"] = std::to_string(s.des_paths);
  out.metadata["des.algorithm"] = std::string(res.algorithm);
  return out;
}

MethodOutput run_rider(const Scenario& s, const RunOptions& opt) {
  MethodOutput out{"rider", s.output_times()};
  std::vector<approx::RiderState> traj;
  try {
    traj = approx::rider_solve(s.profile, out.times, 0.0, std::nullopt, opt.ode);
  } catch (const ConfigError& e) {
    throw ConfigError("method 'rider' on scenario '" + s.name + "': " + e.what());
  }
  for (const auto& st : traj) out.mean_length.push_back(st.expected_parts);
  out.outflow = approx::rider_outflow(traj, s.profile);
  return out;
}

MethodOutput run_external(const Scenario& s, const std::string& method) {
  const auto& fn = approx::default_registry().get(method);
  MethodOutput out{method, s.output_times()};
  out.outflow = fn(s.profile, out.times);
  out.outflow.method = method;
  if (out.outflow.times.size() != out.outflow.values.size() || out.outflow.times.empty()) {
    throw NumericalFailure("approximator '" + method + "' returned a malformed series");
  }
  return out;
}

}  // namespace

MethodOutput evaluate(const Scenario& s, const std::string& method, const RunOptions& opt) {
  s.validate();
  if (method == "ode") return run_ode(s, opt);
  if (method == "closed-form") return run_closed_form(s, method, false);
  if (method == "midpoint") return run_closed_form(s, method, true);
  if (method == "pde") return run_pde(s, opt);
  if (method == "des") return run_des(s, opt);
  if (method == "rider") return run_rider(s, opt);
  return run_external(s, method);
}

ResultTable to_table(const Scenario& s, std::span<const MethodOutput> outputs) {
  ResultTable table;
  for (const auto& o : outputs) {
    for (std::size_t i = 0; i < o.pmf.size(); ++i) {
      for (std::size_t k = 0; k < o.pmf[i].size(); ++k) {
        table.add(o.times[i], std::to_string(k), o.pmf[i][k], o.method, s.name);
      }
    }
    for (std::size_t i = 0; i < o.mean_length.size(); ++i) {
      table.add(o.times[i], "mean_length", o.mean_length[i], o.method, s.name);
    }
    for (std::size_t i = 0; i < o.outflow.values.size(); ++i) {
      table.add(o.outflow.times[i], "outflow", o.outflow.values[i], o.method, s.name);
    }
    for (const auto& [k, v] : o.metadata) table.metadata[k] = v;
  }
  return table;
}

ResultTable run(const Scenario& s, std::span<const std::string> methods, const RunOptions& opt) {
  std::vector<MethodOutput> outputs;
  for (const auto& m : methods) outputs.push_back(evaluate(s, m, opt));
  return to_table(s, outputs);
}

metrics::ErrorReport compare_outputs(const MethodOutput& method, const MethodOutput& baseline, std::size_t K) {
  metrics::ErrorReport r{method.method, baseline.method, K, baseline.times, {}};
  if (!method.pmf.empty() && !baseline.pmf.empty()) {
    if (method.times != baseline.times) {
      throw ConfigError("compare: '" + method.method + "' and '" + baseline.method + "' use different time grids");
    }
    r = metrics::pmf_error_report(method.method, baseline.method, K, baseline.times, method.pmf, baseline.pmf);
  }
  if (!method.outflow.values.empty() && !baseline.outflow.values.empty()) {
    const auto& bt = baseline.outflow.times;
    const auto a = metrics::interpolate(method.outflow.times, method.outflow.values, bt);
    r.outflow_sup_error = metrics::max_abs_error(a, baseline.outflow.values);
    r.outflow_l1_error = metrics::l1_time_error(a, baseline.outflow.values, bt);
  }
  return r;
}

std::vector<metrics::ErrorReport> compare(const Scenario& s, std::span<const std::string> methods,
                                          const std::string& baseline, const RunOptions& opt) {
  const auto base = evaluate(s, baseline, opt);
  std::vector<metrics::ErrorReport> reports;
  for (const auto& m : methods) {
    if (m == baseline) continue;
    reports.push_back(compare_outputs(evaluate(s, m, opt), base, s.grid.K));
  }
  return reports;
}

ResultTable reports_to_table(const Scenario& s, std::span<const metrics::ErrorReport> reports) {
  ResultTable table;
  for (const auto& r : reports) {
    const std::string label = r.method + "-vs-" + r.baseline;
    for (std::size_t i = 0; i < r.sup_errors.size(); ++i) {
      table.add(r.times[i], "sup_error", r.sup_errors[i], label, s.name);
    }
    const double t_end = s.horizon;
    if (!r.sup_errors.empty()) table.add(t_end, "max_sup_error", r.max_sup_error, label, s.name);
    if (r.outflow_sup_error >= 0.0) {
      table.add(t_end, "outflow_sup_error", r.outflow_sup_error, label, s.name);
      table.add(t_end, "outflow_l1_error", r.outflow_l1_error, label, s.name);
    }
  }
  return table;
}

}  // namespace mtq::experiment
