#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "mtq/approx.hpp"
#include "mtq/metrics.hpp"
#include "mtq/result_table.hpp"
#include "mtq/rk23.hpp"
#include "mtq/scenario.hpp"

namespace mtq::experiment {

// Built-in method names; anything else is looked up in approx::default_registry().
inline constexpr const char* kBuiltinMethods[] = {"ode", "closed-form", "midpoint", "pde", "des", "rider"};

struct RunOptions {
  SolverSettings ode;
  double pde_safety = 0.9;
  std::size_t des_threads = 0;
};

// One method evaluated on the scenario's output times. Fields a method cannot
// produce are left empty (external approximators only give an outflow).
struct MethodOutput {
  std::string method;
  std::vector<double> times;
  std::vector<std::vector<double>> pmf;  // first K probabilities per time
  std::vector<double> mean_length;
  approx::OutflowSeries outflow;
  std::map<std::string, std::string> metadata;
};

// Throws ConfigError for unknown methods or a method the profile does not admit.
MethodOutput evaluate(const Scenario& s, const std::string& method, const RunOptions& opt = {});

ResultTable to_table(const Scenario& s, std::span<const MethodOutput> outputs);
ResultTable run(const Scenario& s, std::span<const std::string> methods, const RunOptions& opt = {});

// Per-method errors against the baseline, interpolated onto the baseline's times.
metrics::ErrorReport compare_outputs(const MethodOutput& method, const MethodOutput& baseline, std::size_t K);
std::vector<metrics::ErrorReport> compare(const Scenario& s, std::span<const std::string> methods,
                                          const std::string& baseline = "ode", const RunOptions& opt = {});

ResultTable reports_to_table(const Scenario& s, std::span<const metrics::ErrorReport> reports);

}  // namespace mtq::experiment
