#pragma once

// Scenario runner: every verification suite as a reproducible command.
// Configs come from plain key = value files plus flag overrides; reports are
// machine readable (JSON or CSV) and byte-for-byte deterministic for
// identical configs.

#include <cstdint>
#include <string>
#include <vector>

namespace wvar {

struct ScenarioConfig {
  std::string scenario;
  int grid_dim = 2;
  int grid_n = 32;
  std::uint64_t seed = 7;
  double amplitude = 0.05;
  int max_freq = 2;
  double fd_step = 1e-3;
  int ode_steps = 200;
  double tol_scale = 1.0;
  int cases = 0;  // 0 means the scenario default
};

// Parses "key = value" lines; '#' starts a comment. Unknown keys are
// rejected with std::invalid_argument.
ScenarioConfig parse_config_file(const std::string& path);
void apply_config_entry(ScenarioConfig& cfg, const std::string& key,
                        const std::string& value);

struct CheckRecord {
  std::string check_id;
  std::string anchor;
  double formula = 0.0;
  double oracle = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct RunReport {
  std::string scenario;
  ScenarioConfig config;
  std::vector<CheckRecord> checks;
  double wall_time_s = 0.0;  // console diagnostics only, never serialized
  std::string artifact_version;
  bool all_pass() const;
};

const std::vector<std::string>& scenario_names();

// Executes the named suite; throws std::invalid_argument for unknown
// scenario names. Precondition failures inside checks surface as failing
// records, not exceptions.
RunReport run_scenario(const ScenarioConfig& cfg);

enum class ReportFormat { Json, Csv };

std::string to_json(const RunReport& report);
std::string to_csv(const RunReport& report);
void emit(const RunReport& report, ReportFormat format,
          const std::string& path);

}  // namespace wvar
