#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "wvar/scenario.hpp"

using namespace wvar;

namespace {

ScenarioConfig small_config(const std::string& name) {
  ScenarioConfig cfg;
  cfg.scenario = name;
  cfg.grid_n = 8;
  cfg.cases = 2;
  cfg.ode_steps = 50;
  return cfg;
}

}  // namespace

TEST_CASE("identical configs produce identical reports") {
  const ScenarioConfig cfg = small_config("metric-space");
  const RunReport a = run_scenario(cfg);
  const RunReport b = run_scenario(cfg);
  CHECK(to_json(a) == to_json(b));  // byte for byte
  CHECK(to_csv(a) == to_csv(b));
}

TEST_CASE("unknown scenario is rejected") {
  ScenarioConfig cfg = small_config("no-such-suite");
  CHECK_THROWS_AS(run_scenario(cfg), std::invalid_argument);
}

TEST_CASE("config files") {
  const std::string path = "/tmp/wvar_test_config.cfg";
  {
    std::ofstream out(path);
    out << "# sample\n"
        << "scenario = metric-space\n"
        << "grid = 2x8\n"
        << "seed = 99\n"
        << "tol_scale = 2.0\n";
  }
  const ScenarioConfig cfg = parse_config_file(path);
  CHECK(cfg.scenario == "metric-space");
  CHECK(cfg.grid_dim == 2);
  CHECK(cfg.grid_n == 8);
  CHECK(cfg.seed == 99);
  CHECK(cfg.tol_scale == 2.0);

  {
    std::ofstream out(path);
    out << "scenario = metric-space\nbogus_key = 1\n";
  }
  CHECK_THROWS_AS(parse_config_file(path), std::invalid_argument);

  {
    std::ofstream out(path);
    out << "scenario metric-space\n";
  }
  CHECK_THROWS_AS(parse_config_file(path), std::invalid_argument);

  ScenarioConfig cfg2;
  CHECK_THROWS_AS(apply_config_entry(cfg2, "grid", "nonsense"),
                  std::invalid_argument);
  std::remove(path.c_str());
}

TEST_CASE("report round trip and shape") {
  ScenarioConfig cfg = small_config("metric-space");
  const RunReport report = run_scenario(cfg);
  REQUIRE(!report.checks.empty());

  SUBCASE("all records are internally consistent") {
    for (const auto& c : report.checks)
      CHECK(c.pass == (c.residual <= c.tolerance));
  }

  SUBCASE("json parses back with exact residuals") {
    const nlohmann::json j = nlohmann::json::parse(to_json(report));
    CHECK(j["scenario"] == "metric-space");
    CHECK(j["checks"].size() == report.checks.size());
    for (size_t i = 0; i < report.checks.size(); ++i) {
      CHECK(j["checks"][i]["residual"].get<double>() ==
            report.checks[i].residual);
      CHECK(j["checks"][i]["formula"].get<double>() ==
            report.checks[i].formula);
    }
  }

  SUBCASE("csv has one row per check plus the header") {
    const std::string csv = to_csv(report);
    size_t rows = 0;
    for (char ch : csv)
      if (ch == '\n') ++rows;
    CHECK(rows == report.checks.size() + 1);
  }

  SUBCASE("empty report serializes cleanly") {
    RunReport empty;
    empty.scenario = "none";
    empty.artifact_version = "0.0.0";
    const nlohmann::json j = nlohmann::json::parse(to_json(empty));
    CHECK(j["checks"].is_array());
    CHECK(j["checks"].empty());
    CHECK(j["all_pass"] == true);
  }

  SUBCASE("emit refuses unwritable paths") {
    CHECK_THROWS_AS(emit(report, ReportFormat::Json, "/no/such/dir/x.json"),
                    std::invalid_argument);
  }
}

TEST_CASE("small runs of every scenario pass") {
  for (const std::string& name : scenario_names()) {
    CAPTURE(name);
    ScenarioConfig cfg = small_config(name);
    // Identity tolerances assume the production grid; small smoke grids only
    // need to stay structurally sound, so relax generously.
    cfg.grid_n = 16;
    cfg.cases = 1;
    cfg.tol_scale = 1e6;
    const RunReport report = run_scenario(cfg);
    CHECK(!report.checks.empty());
    int failed = 0;
    for (const auto& c : report.checks) failed += c.pass ? 0 : 1;
    CHECK(failed == 0);
  }
}

TEST_CASE("precondition failures become failing records") {
  // An absurd amplitude makes the seeded metrics leave the positivity cone;
  // the run must finish with failing records instead of throwing.
  ScenarioConfig cfg = small_config("kahler-main");
  cfg.grid_n = 16;
  cfg.cases = 2;  // the second case uses a potential base metric
  cfg.amplitude = 50.0;
  RunReport report;
  CHECK_NOTHROW(report = run_scenario(cfg));
  CHECK(!report.all_pass());
  bool found_error_record = false;
  for (const auto& c : report.checks)
    if (c.check_id.find("-error") != std::string::npos) found_error_record = true;
  CHECK(found_error_record);
}
