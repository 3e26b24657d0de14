#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mtq/rates.hpp"

namespace mtq {

struct GridParams {
  double dx = 0.01;      // finite-volume spacing
  double x_hi = 200.0;   // finite-volume domain [0, x_hi]
  std::size_t N = 1000;  // Kolmogorov truncation
  std::size_t K = 100;   // compared cell probabilities
};

struct Scenario {
  std::string name;
  RateProfile profile;
  GridParams grid;
  double horizon = 100.0;
  double output_dt = 0.1;
  std::size_t des_paths = 10000;
  std::uint64_t des_seed = 1;

  // output_dt, 2 output_dt, ..., horizon.
  std::vector<double> output_times() const;
  void validate() const;
};

// Methods applicable to the scenario's profile: closed-form and midpoint need a
// constant or step profile with initial utilization below one.
std::vector<std::string> default_methods(const Scenario& s);

// Five step changes (T = 100, dx = 0.01) and fifteen cyclic cases (T = 25,
// dx = 0.02), all with mu = 1 and steady initial data.
std::vector<Scenario> builtin_scenarios();
Scenario find_builtin(const std::string& name);

// JSON configuration. Keys: scenario.name, rates.kind, rates.{lambda0, lambda1,
// mu0, mu1, period, knots}, grid.{dx, x_hi, N, K}, time.{horizon, output_dt},
// des.{paths, seed}. Unknown keys are rejected; errors name the key path.
Scenario parse_config_text(const std::string& text);
Scenario parse_config(const std::filesystem::path& path);
std::string serialize_config(const Scenario& s);

}  // namespace mtq
