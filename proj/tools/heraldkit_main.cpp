#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "heraldkit/config.hpp"
#include "heraldkit/event_log.hpp"
#include "heraldkit/experiments.hpp"
#include "heraldkit/version.hpp"

namespace {

using namespace heraldkit;

ScenarioConfig config_from_log_header(const EventLogFile& log) {
  std::ostringstream text;
  for (const auto& line : log.header_comments) {
    if (line.rfind("tool = ", 0) == 0) continue;
    if (line.rfind("config_hash = ", 0) == 0) continue;
    text << line << "\n";
  }
  return parse_config_text(text.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator and analysis toolkit for heralded entanglement of "
               "remote quantum memories emitting distinguishable photons"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  std::string config_path, out_dir, log_path, strategy_spec, scenario_name_arg;
  std::string sweep_param, sweep_values;
  int threads_override = 0;

  auto* simulate = app.add_subcommand(
      "simulate", "Generate heralded events and write events.csv");
  simulate->add_option("--config", config_path, "Config file (key = value)")
      ->required();
  simulate->add_option("--out", out_dir, "Output directory")->required();
  simulate->add_option("--threads", threads_override, "Worker thread count");

  auto* analyze = app.add_subcommand(
      "analyze", "Run the analysis pipeline on an event log");
  analyze->add_option("--log", log_path, "events.csv from `simulate`")
      ->required();
  analyze->add_option("--out", out_dir, "Output directory")->required();
  analyze->add_option("--strategy", strategy_spec,
                      "Strategy spec override (e.g. postselect:dt_max_ns=5)");
  analyze->add_option("--scenario", scenario_name_arg, "Scenario override");
  analyze->add_option("--config", config_path,
                      "Config file override (default: log header)");

  auto* sweep = app.add_subcommand(
      "sweep", "Sweep a parameter (currently dt_max_ns) over a value grid");
  sweep->add_option("--param", sweep_param, "Parameter name")->required();
  sweep->add_option("--values", sweep_values, "lo:hi:step or comma list")
      ->required();
  sweep->add_option("--config", config_path, "Config file")->required();
  sweep->add_option("--out", out_dir, "Output directory")->required();
  sweep->add_option("--threads", threads_override, "Worker thread count");

  auto* rates = app.add_subcommand(
      "rates", "Relative entanglement rates R/R0 for the standard strategies");
  rates->add_option("--config", config_path, "Config file")->required();
  rates->add_option("--out", out_dir, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      ScenarioConfig config = load_config_file(config_path);
      if (threads_override > 0) config.threads = threads_override;
      config.validate();
      ScenarioResult result = simulate_events(config);
      write_result_tables(result, out_dir);
      std::cout << "wrote " << out_dir << "/events.csv (" << config.n_events
                << " events, " << result.stats.attempts << " attempts)\n";
    } else if (analyze->parsed()) {
      const EventLogFile log = read_event_log_file(log_path);
      ScenarioConfig config = config_path.empty()
                                  ? config_from_log_header(log)
                                  : load_config_file(config_path);
      if (!strategy_spec.empty()) config.strategy = strategy_spec;
      if (!scenario_name_arg.empty())
        config.scenario = parse_scenario(scenario_name_arg);
      config.validate();
      const ScenarioResult result = analyze_records(log.records, config);
      write_result_tables(result, out_dir);
      for (const auto& [name, table] : result.tables) {
        std::cout << "wrote " << out_dir << "/" << name << "\n";
      }
    } else if (sweep->parsed()) {
      if (sweep_param != "dt_max_ns") {
        throw std::runtime_error("sweep: unsupported --param '" + sweep_param +
                                 "' (supported: dt_max_ns)");
      }
      ScenarioConfig config = load_config_file(config_path);
      if (threads_override > 0) config.threads = threads_override;
      config.scenario = Scenario::FidelityVsDtmax;
      config.dt_max_values_ns = parse_values_spec(sweep_values);
      config.validate();
      const ScenarioResult result = run_scenario(config);
      write_result_tables(result, out_dir);
      std::cout << "wrote " << out_dir << "/fidelity_vs_dtmax.csv\n";
    } else if (rates->parsed()) {
      ScenarioConfig config = load_config_file(config_path);
      config.scenario = Scenario::Rates;
      config.validate();
      const ScenarioResult result = analyze_records({}, config);
      write_result_tables(result, out_dir);
      std::cout << "wrote " << out_dir << "/rates.csv\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
