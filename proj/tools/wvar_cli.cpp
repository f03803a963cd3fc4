// Scenario runner command line. Runs one named verification suite with a
// reproducible configuration and writes a machine-readable report.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "wvar/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"wvar: variational identities on the space of metrics"};
  app.get_formatter()->column_width(28);

  std::string scenario;
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  std::string grid;
  std::uint64_t seed = 0;
  bool seed_set = false, grid_set = false;
  double tol_scale = 0.0;

  app.add_option("--scenario", scenario, "suite to run (see --list)");
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--seed", seed, "base seed override")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("--grid", grid, "grid override, e.g. 2x32")
      ->each([&](const std::string&) { grid_set = true; });
  app.add_option("--out", out_path, "report path (default: stdout)");
  app.add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--tol-scale", tol_scale, "multiply all tolerances");
  bool list = false;
  app.add_flag("--list", list, "list scenario names and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (list) {
    for (const auto& name : wvar::scenario_names()) std::cout << name << "\n";
    return 0;
  }

  try {
    wvar::ScenarioConfig cfg;
    if (!config_path.empty()) cfg = wvar::parse_config_file(config_path);
    if (!scenario.empty()) cfg.scenario = scenario;
    if (seed_set) cfg.seed = seed;
    if (grid_set) wvar::apply_config_entry(cfg, "grid", grid);
    if (tol_scale > 0.0) cfg.tol_scale = tol_scale;
    if (cfg.scenario.empty()) {
      std::cerr << "error: no scenario given (use --scenario or a config file)\n";
      return 2;
    }

    const wvar::RunReport report = wvar::run_scenario(cfg);

    const auto fmt = format == "csv" ? wvar::ReportFormat::Csv
                                     : wvar::ReportFormat::Json;
    if (out_path.empty()) {
      std::cout << (fmt == wvar::ReportFormat::Json ? wvar::to_json(report)
                                                    : wvar::to_csv(report));
    } else {
      wvar::emit(report, fmt, out_path);
    }

    int passed = 0;
    for (const auto& c : report.checks) passed += c.pass ? 1 : 0;
    std::fprintf(stderr, "%s: %d/%zu checks passed in %.2f s\n",
                 report.scenario.c_str(), passed, report.checks.size(),
                 report.wall_time_s);
    return report.all_pass() ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
