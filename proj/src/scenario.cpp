#include "mtq/scenario.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "mtq/errors.hpp"
#include "mtq/kolmogorov.hpp"

namespace mtq {

namespace {

using nlohmann::json;

std::string key_path(std::string_view section, std::string_view key) {
  return std::string(section) + "." + std::string(key);
}

void reject_unknown(const json& obj, std::string_view section, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) {
      throw ConfigError("unknown key '" + (section.empty() ? key : key_path(section, key)) + "'");
    }
  }
}

const json* section_of(const json& root, const char* name, bool required) {
  const auto it = root.find(name);
  if (it == root.end()) {
    if (required) throw ConfigError(std::string("missing key '") + name + "'");
    return nullptr;
  }
  if (!it->is_object()) throw ConfigError(std::string("key '") + name + "' must be an object");
  return &*it;
}

double number(const json& obj, std::string_view section, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError("missing key '" + key_path(section, key) + "'");
  if (!it->is_number()) throw ConfigError("key '" + key_path(section, key) + "' must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ConfigError("key '" + key_path(section, key) + "' must be finite");
  return v;
}

double number_or(const json& obj, std::string_view section, const char* key, double fallback) {
  return obj.contains(key) ? number(obj, section, key) : fallback;
}

std::uint64_t count_or(const json& obj, std::string_view section, const char* key, std::uint64_t fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<std::int64_t>() >= 0)) {
    throw ConfigError("key '" + key_path(section, key) + "' must be a nonnegative integer");
  }
  return it->get<std::uint64_t>();
}

std::vector<Knot> knots_of(const json& obj, const char* which) {
  const std::string path = std::string("rates.knots.") + which;
  const auto it = obj.find(which);
  if (it == obj.end()) throw ConfigError("missing key '" + path + "'");
  if (!it->is_array()) throw ConfigError("key '" + path + "' must be an array of [t, value] pairs");
  std::vector<Knot> out;
  for (const auto& pair : *it) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw ConfigError("key '" + path + "' must be an array of [t, value] pairs");
    }
    out.push_back({pair[0].get<double>(), pair[1].get<double>()});
  }
  return out;
}

RateProfile parse_rates(const json& r) {
  const auto kind_it = r.find("kind");
  if (kind_it == r.end()) throw ConfigError("missing key 'rates.kind'");
  if (!kind_it->is_string()) throw ConfigError("key 'rates.kind' must be a string");
  const auto kind = kind_it->get<std::string>();
  try {
    if (kind == "constant") {
      reject_unknown(r, "rates", {"kind", "lambda0", "mu0"});
      return RateProfile::constant(number(r, "rates", "lambda0"), number(r, "rates", "mu0"));
    }
    if (kind == "step") {
      reject_unknown(r, "rates", {"kind", "lambda0", "mu0", "lambda1", "mu1"});
      return RateProfile::step(number(r, "rates", "lambda0"), number(r, "rates", "mu0"),
                               number(r, "rates", "lambda1"), number(r, "rates", "mu1"));
    }
    if (kind == "cyclic") {
      reject_unknown(r, "rates", {"kind", "lambda0", "lambda1", "period", "mu0"});
      return RateProfile::cyclic(number(r, "rates", "lambda0"), number(r, "rates", "lambda1"),
                                 number(r, "rates", "period"), number(r, "rates", "mu0"));
    }
    if (kind == "piecewise-linear") {
      reject_unknown(r, "rates", {"kind", "knots"});
      const auto it = r.find("knots");
      if (it == r.end()) throw ConfigError("missing key 'rates.knots'");
      if (!it->is_object()) throw ConfigError("key 'rates.knots' must be an object");
      reject_unknown(*it, "rates.knots", {"lambda", "mu"});
      return RateProfile::piecewise_linear(knots_of(*it, "lambda"), knots_of(*it, "mu"));
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("rates: ") + e.what());
  }
  throw ConfigError("key 'rates.kind' must be one of constant, step, cyclic, piecewise-linear");
}

json knots_json(const std::vector<Knot>& knots) {
  json a = json::array();
  for (const auto& k : knots) a.push_back({k.t, k.value});
  return a;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

json rates_json(const RateProfile& p) {
  return std::visit(
      overloaded{
          [](const ConstantRates& c) { return json{{"kind", "constant"}, {"lambda0", c.lambda}, {"mu0", c.mu}}; },
          [](const StepRates& s) {
            return json{{"kind", "step"}, {"lambda0", s.lambda0}, {"mu0", s.mu0}, {"lambda1", s.lambda1}, {"mu1", s.mu1}};
          },
          [](const CyclicRates& c) {
            return json{{"kind", "cyclic"}, {"lambda0", c.lambda0}, {"lambda1", c.lambda1}, {"period", c.period}, {"mu0", c.mu}};
          },
          [](const PiecewiseLinearRates& pl) {
            return json{{"kind", "piecewise-linear"},
                        {"knots", {{"lambda", knots_json(pl.lambda)}, {"mu", knots_json(pl.mu)}}}};
          },
      },
      p.spec());
}

Scenario make_step(std::string name, double lambda0, double lambda1) {
  Scenario s{std::move(name), RateProfile::step(lambda0, 1.0, lambda1, 1.0)};
  s.grid = {0.01, 200.0, 1000, 100};
  s.horizon = 100.0;
  return s;
}

Scenario make_cyclic(std::string name, double lambda0, double lambda1, double period) {
  Scenario s{std::move(name), RateProfile::cyclic(lambda0, lambda1, period, 1.0)};
  s.grid = {0.02, 200.0, 1000, 100};
  s.horizon = 25.0;
  return s;
}

}  // namespace

std::vector<double> Scenario::output_times() const { return uniform_times(horizon, output_dt); }

void Scenario::validate() const {
  if (name.empty()) throw ConfigError("key 'scenario.name' must not be empty");
  if (!(grid.dx > 0.0)) throw ConfigError("key 'grid.dx' must be > 0");
  if (!(grid.x_hi > grid.dx)) throw ConfigError("key 'grid.x_hi' must exceed grid.dx");
  if (grid.N < 2) throw ConfigError("key 'grid.N' must be >= 2");
  if (grid.K == 0 || grid.K > grid.N) throw ConfigError("key 'grid.K' must lie in [1, grid.N]");
  if (static_cast<double>(grid.K) > grid.x_hi) throw ConfigError("key 'grid.K' must not exceed grid.x_hi");
  if (!(horizon > 0.0)) throw ConfigError("key 'time.horizon' must be > 0");
  if (!(output_dt > 0.0)) throw ConfigError("key 'time.output_dt' must be > 0");
  try {
    (void)output_times();
  } catch (const DomainError&) {
    throw ConfigError("key 'time.horizon' must be a multiple of time.output_dt");
  }
  if (des_paths == 0) throw ConfigError("key 'des.paths' must be >= 1");
}

std::vector<std::string> default_methods(const Scenario& s) {
  std::vector<std::string> m{"ode"};
  if (s.profile.piecewise_constant_in_time() && TrafficIntensity::of(s.profile.initial()).stable()) {
    m.push_back("closed-form");
    m.push_back("midpoint");
  }
  m.push_back("pde");
  m.push_back("rider");
  return m;
}

std::vector<Scenario> builtin_scenarios() {
  std::vector<Scenario> out;
  out.push_back(make_step("moderate-up", 0.5, 0.8));
  out.push_back(make_step("strong-up", 0.2, 0.99));
  out.push_back(make_step("very-strong-up", 0.2, 2.0));
  out.push_back(make_step("moderate-down", 0.8, 0.5));
  out.push_back(make_step("strong-down", 0.99, 0.2));
  const struct {
    const char* label;
    double lambda0;
    double lambda1;
  } cases[] = {{"moderate", 0.5, 0.8}, {"strong", 0.2, 0.99}, {"very-strong", 0.2, 2.0}};
  for (const auto& c : cases) {
    for (int period : {25, 10, 5, 2, 1}) {
      out.push_back(make_cyclic(std::string("cyclic-") + c.label + "-T" + std::to_string(period), c.lambda0,
                                c.lambda1, period));
    }
  }
  return out;
}

Scenario find_builtin(const std::string& name) {
  for (auto& s : builtin_scenarios()) {
    if (s.name == name) return s;
  }
  throw ConfigError("unknown scenario '" + name + "'");
}

Scenario parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");
  reject_unknown(root, "", {"scenario", "rates", "grid", "time", "des"});

  std::string name = "custom";
  if (const auto* sec = section_of(root, "scenario", false)) {
    reject_unknown(*sec, "scenario", {"name"});
    if (sec->contains("name")) {
      if (!(*sec)["name"].is_string()) throw ConfigError("key 'scenario.name' must be a string");
      name = (*sec)["name"].get<std::string>();
    }
  }
  const auto* rates = section_of(root, "rates", true);
  Scenario s{std::move(name), parse_rates(*rates)};
  if (const auto* g = section_of(root, "grid", false)) {
    reject_unknown(*g, "grid", {"dx", "x_hi", "N", "K"});
    s.grid.dx = number_or(*g, "grid", "dx", s.grid.dx);
    s.grid.x_hi = number_or(*g, "grid", "x_hi", s.grid.x_hi);
    s.grid.N = count_or(*g, "grid", "N", s.grid.N);
    s.grid.K = count_or(*g, "grid", "K", s.grid.K);
  }
  if (const auto* t = section_of(root, "time", false)) {
    reject_unknown(*t, "time", {"horizon", "output_dt"});
    s.horizon = number_or(*t, "time", "horizon", s.horizon);
    s.output_dt = number_or(*t, "time", "output_dt", s.output_dt);
  }
  if (const auto* d = section_of(root, "des", false)) {
    reject_unknown(*d, "des", {"paths", "seed"});
    s.des_paths = count_or(*d, "des", "paths", s.des_paths);
    s.des_seed = count_or(*d, "des", "seed", s.des_seed);
  }
  s.validate();
  return s;
}

Scenario parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string serialize_config(const Scenario& s) {
  json root;
  root["scenario"] = {{"name", s.name}};
  root["rates"] = rates_json(s.profile);
  root["grid"] = {{"dx", s.grid.dx}, {"x_hi", s.grid.x_hi}, {"N", s.grid.N}, {"K", s.grid.K}};
  root["time"] = {{"horizon", s.horizon}, {"output_dt", s.output_dt}};
  root["des"] = {{"paths", s.des_paths}, {"seed", s.des_seed}};
  return root.dump(2) + "\n";
}

}  // namespace mtq
