#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "mtq/errors.hpp"
#include "mtq/scenario.hpp"

using namespace mtq;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("built-in scenarios") {
    const auto all = builtin_scenarios();
    CHECK(all.size() == 20);
    std::set<std::string> names;
    for (const auto& s : all) {
      names.insert(s.name);
      CHECK_NOTHROW(s.validate());
      CHECK(s.profile.at(0.0).mu == 1.0);
      CHECK(TrafficIntensity::of(s.profile.initial()).stable());
    }
    CHECK(names.size() == 20);

    const struct {
      const char* name;
      double rho0, rho1;
    } steps[] = {{"moderate-up", 0.5, 0.8},
                 {"strong-up", 0.2, 0.99},
                 {"very-strong-up", 0.2, 2.0},
                 {"moderate-down", 0.8, 0.5},
                 {"strong-down", 0.99, 0.2}};
    for (const auto& st : steps) {
      const auto s = find_builtin(st.name);
      CHECK(s.profile.kind() == "step");
      CHECK(s.profile.initial().lambda == st.rho0);
      CHECK(s.profile.at(1.0).lambda == st.rho1);
      CHECK(s.horizon == 100.0);
      CHECK(s.grid.K == 100);
      CHECK(s.grid.N == 1000);
      CHECK(s.grid.dx == 0.01);
      CHECK(s.grid.x_hi == 200.0);
    }

    for (const char* label : {"moderate", "strong", "very-strong"}) {
      for (int period : {25, 10, 5, 2, 1}) {
        const auto s = find_builtin(std::string("cyclic-") + label + "-T" + std::to_string(period));
        const auto& c = std::get<CyclicRates>(s.profile.spec());
        CHECK(c.period == period);
        CHECK(c.mu == 1.0);
        CHECK(s.horizon == 25.0);
        CHECK(s.grid.dx == 0.02);
        CHECK(s.grid.x_hi == 200.0);
        CHECK(s.output_dt == 0.1);
      }
    }
    const auto& m = std::get<CyclicRates>(find_builtin("cyclic-moderate-T5").profile.spec());
    CHECK(m.lambda0 == 0.5);
    CHECK(m.lambda1 == 0.8);
    const auto& st = std::get<CyclicRates>(find_builtin("cyclic-strong-T5").profile.spec());
    CHECK(st.lambda0 == 0.2);
    CHECK(st.lambda1 == 0.99);

    // Very strong cycles spend time overloaded.
    const auto vs = find_builtin("cyclic-very-strong-T10");
    bool overloaded = false;
    for (double t = 0; t <= 25; t += 0.1) overloaded = overloaded || vs.profile.at(t).lambda >= 1.0;
    CHECK(overloaded);
    CHECK_THROWS_AS(find_builtin("nope"), ConfigError);
  }

  TEST_CASE("default methods follow the profile") {
    CHECK(default_methods(find_builtin("moderate-up")) ==
          std::vector<std::string>{"ode", "closed-form", "midpoint", "pde", "rider"});
    CHECK(default_methods(find_builtin("cyclic-strong-T5")) == std::vector<std::string>{"ode", "pde", "rider"});
  }

  TEST_CASE("minimal constant config parses") {
    const auto s = parse_config_text(R"({"rates": {"kind": "constant", "lambda0": 0.5, "mu0": 1.0}})");
    CHECK(s.name == "custom");
    CHECK(s.profile.at(3.0).lambda == 0.5);
    CHECK(s.horizon == 100.0);
  }

  TEST_CASE("errors name the key path") {
    CHECK(error_of(R"({"rates": {"kind": "step", "lambda0": 0.5, "lambda1": 0.8, "mu1": 1}})").find("rates.mu0") !=
          std::string::npos);
    CHECK(error_of(R"({"rates": {"kind": "constant", "lambda0": 0.5, "mu0": 1, "speed": 2}})").find("rates.speed") !=
          std::string::npos);
    CHECK(error_of(R"({"rates": {"kind": "constant", "lambda0": 0.5, "mu0": 1}, "grid": {"dy": 1}})")
              .find("grid.dy") != std::string::npos);
    CHECK(error_of(R"({"rates": {"kind": "constant", "lambda0": 0.5, "mu0": 1}, "extra": 1})").find("extra") !=
          std::string::npos);
    CHECK(error_of(R"({"rates": {"kind": "constant", "lambda0": "x", "mu0": 1}})").find("rates.lambda0") !=
          std::string::npos);
    CHECK(error_of(R"({"rates": {"kind": "constant", "lambda0": 0.5, "mu0": 1}, "des": {"paths": -3}})")
              .find("des.paths") != std::string::npos);
    CHECK(error_of(R"({"rates": {"kind": "constant", "lambda0": 0.5, "mu0": 1}, "time": {"output_dt": 0.3}})")
              .find("time.") != std::string::npos);
    CHECK(error_of(R"({"rates": {"kind": "warp"}})").find("rates.kind") != std::string::npos);
    CHECK(error_of(R"({"rates": {"kind": "constant", "lambda0": -1, "mu0": 1}})").find("rates") != std::string::npos);
    CHECK(error_of("{not json").find("JSON") != std::string::npos);
    CHECK_THROWS_AS(parse_config("/nonexistent/dir/x.json"), IoError);
  }

  TEST_CASE("serialize then parse is the identity") {
    auto all = builtin_scenarios();
    auto custom = parse_config_text(R"({"scenario": {"name": "rider-like"},
      "rates": {"kind": "piecewise-linear", "knots": {"lambda": [[0, 0.3], [10, 1.2], [20, 0.3]], "mu": [[0, 1]]}},
      "grid": {"dx": 0.05, "x_hi": 50, "N": 300, "K": 40}, "time": {"horizon": 20, "output_dt": 0.5},
      "des": {"paths": 123, "seed": 18446744073709551615}})");
    CHECK(custom.des_seed == 18446744073709551615ull);
    all.push_back(custom);
    for (const auto& s : all) {
      const auto text = serialize_config(s);
      const auto back = parse_config_text(text);
      CHECK(serialize_config(back) == text);
      CHECK(back.name == s.name);
      CHECK(back.grid.dx == s.grid.dx);
      CHECK(back.horizon == s.horizon);
      CHECK(back.profile.at(3.3).lambda == s.profile.at(3.3).lambda);
    }
  }

  TEST_CASE("config files") {
    const auto path = std::filesystem::temp_directory_path() / "mtq_scenario_test.json";
    {
      std::ofstream out(path);
      out << serialize_config(find_builtin("strong-down"));
    }
    CHECK(parse_config(path).name == "strong-down");
    std::filesystem::remove(path);
  }
}
