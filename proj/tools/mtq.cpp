#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mtq/des.hpp"
#include "mtq/errors.hpp"
#include "mtq/experiment.hpp"
#include "mtq/result_table.hpp"
#include "mtq/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct ScenarioArgs {
  std::string name;
  std::string config;
};

void add_scenario_options(CLI::App* cmd, ScenarioArgs& args) {
  auto* by_name = cmd->add_option("-s,--scenario", args.name, "Built-in scenario name");
  auto* by_file = cmd->add_option("-c,--config", args.config, "JSON scenario file");
  by_name->excludes(by_file);
  by_file->excludes(by_name);
}

mtq::Scenario resolve(const ScenarioArgs& args) {
  if (!args.config.empty()) return mtq::parse_config(args.config);
  if (!args.name.empty()) return mtq::find_builtin(args.name);
  throw mtq::ConfigError("one of --scenario or --config is required");
}

std::vector<std::string> methods_or_default(const std::vector<std::string>& given, const mtq::Scenario& s) {
  return given.empty() ? mtq::default_methods(s) : given;
}

void print_reports(const std::vector<mtq::metrics::ErrorReport>& reports) {
  std::printf("%-14s %-10s %16s %18s %18s\n", "method", "baseline", "max_sup_error", "outflow_sup_error",
              "outflow_l1_error");
  for (const auto& r : reports) {
    auto cell = [](double v) { return v >= 0.0 ? std::to_string(v) : std::string("-"); };
    std::printf("%-14s %-10s %16s %18s %18s\n", r.method.c_str(), r.baseline.c_str(),
                r.sup_errors.empty() ? "-" : cell(r.max_sup_error).c_str(), cell(r.outflow_sup_error).c_str(),
                cell(r.outflow_l1_error).c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transient M_t/M_t/1 queue solvers and comparisons"};
  app.require_subcommand(1);

  auto* scenario_cmd = app.add_subcommand("scenario", "Inspect built-in scenarios");
  scenario_cmd->require_subcommand(1);
  auto* list_cmd = scenario_cmd->add_subcommand("list", "List built-in scenario names");
  std::string show_name;
  auto* show_cmd = scenario_cmd->add_subcommand("show", "Print a built-in scenario as a config file");
  show_cmd->add_option("name", show_name, "Scenario name")->required();

  ScenarioArgs run_args;
  std::vector<std::string> run_methods;
  std::string run_out;
  std::string run_plot;
  auto* run_cmd = app.add_subcommand("run", "Run methods on a scenario and write long-format CSV");
  add_scenario_options(run_cmd, run_args);
  run_cmd->add_option("-m,--methods", run_methods, "Methods (default: all applicable)")->delimiter(',');
  run_cmd->add_option("-o,--out", run_out, "Output CSV path")->required();
  run_cmd->add_option("--plot", run_plot, "Also write plot data to this path");

  ScenarioArgs cmp_args;
  std::vector<std::string> cmp_methods;
  std::string cmp_baseline = "ode";
  std::string cmp_out;
  auto* cmp_cmd = app.add_subcommand("compare", "Error of each method against a baseline");
  add_scenario_options(cmp_cmd, cmp_args);
  cmp_cmd->add_option("-m,--methods", cmp_methods, "Methods (default: all applicable)")->delimiter(',');
  cmp_cmd->add_option("-b,--baseline", cmp_baseline, "Baseline method")->capture_default_str();
  cmp_cmd->add_option("-o,--out", cmp_out, "Write per-time errors as CSV");

  ScenarioArgs sim_args;
  std::optional<std::size_t> sim_paths;
  std::optional<std::uint64_t> sim_seed;
  std::size_t sim_threads = 0;
  std::string sim_out;
  auto* sim_cmd = app.add_subcommand("simulate", "Discrete-event simulation of a scenario");
  add_scenario_options(sim_cmd, sim_args);
  sim_cmd->add_option("-n,--paths", sim_paths, "Number of sample paths");
  sim_cmd->add_option("--seed", sim_seed, "Random seed");
  sim_cmd->add_option("-j,--threads", sim_threads, "Worker threads (0: hardware)");
  sim_cmd->add_option("-o,--out", sim_out, "Output CSV path")->required();

  std::string emit_in;
  std::string emit_out;
  auto* emit_cmd = app.add_subcommand("emit", "Convert a results CSV into plot data blocks");
  emit_cmd->add_option("input", emit_in, "Results CSV")->required();
  emit_cmd->add_option("-o,--out", emit_out, "Plot data path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (list_cmd->parsed()) {
      for (const auto& s : mtq::builtin_scenarios()) {
        std::printf("%-26s %-8s T=%g dx=%g\n", s.name.c_str(), std::string(s.profile.kind()).c_str(), s.horizon,
                    s.grid.dx);
      }
    } else if (show_cmd->parsed()) {
      std::cout << mtq::serialize_config(mtq::find_builtin(show_name));
    } else if (run_cmd->parsed()) {
      const auto s = resolve(run_args);
      const auto table = mtq::experiment::run(s, methods_or_default(run_methods, s));
      mtq::emit_csv(table, run_out);
      if (!run_plot.empty()) mtq::emit_plot_data(table, run_plot);
      std::cerr << "wrote " << table.size() << " records to " << run_out << "\n";
    } else if (cmp_cmd->parsed()) {
      const auto s = resolve(cmp_args);
      const auto reports = mtq::experiment::compare(s, methods_or_default(cmp_methods, s), cmp_baseline);
      print_reports(reports);
      if (!cmp_out.empty()) mtq::emit_csv(mtq::experiment::reports_to_table(s, reports), cmp_out);
    } else if (sim_cmd->parsed()) {
      auto s = resolve(sim_args);
      if (sim_paths) s.des_paths = *sim_paths;
      if (sim_seed) s.des_seed = *sim_seed;
      mtq::experiment::RunOptions opt;
      opt.des_threads = sim_threads;
      const auto out = mtq::experiment::evaluate(s, "des", opt);
      const auto table = mtq::experiment::to_table(s, std::span(&out, 1));
      mtq::emit_csv(table, sim_out);
      std::cerr << "seed " << s.des_seed << ", " << s.des_paths << " paths, generator "
                << mtq::des::kAlgorithmId << "\n";
    } else if (emit_cmd->parsed()) {
      mtq::emit_plot_data(mtq::read_csv(emit_in), emit_out);
    }
  } catch (const mtq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const mtq::NoSteadyStateError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const mtq::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const mtq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
