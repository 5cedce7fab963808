#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polariton/lindblad.hpp"
#include "polariton/noise_robustness.hpp"

namespace polariton {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr std::string_view kToolVersion = "1.0.0";

enum class ScenarioKind { spectrum, noise_scan, synthesize, simulate_gate, reproduce_fig2 };

std::string_view to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(std::string_view name);

/// Fully resolved scenario: every frequency in rad/s, every default filled.
struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::reproduce_fig2;
  SystemParams system = reference_system();
  GateSpec gate = GateSpec::hadamard();
  double xi = 0.0;
  std::optional<DriveConfig> drive_override;
  DecoherenceRates rates = DecoherenceRates::reference();
  std::vector<double> noise_amplitudes = default_noise_amplitudes();
  SimulationLevel level = SimulationLevel::interaction;
  double dt = 0.0;  // 0 selects ω_max·dt = 0.1
  std::size_t resolution = 201;
  std::string initial_state = "plus";  // plus | minus | ground
  FrameTag fidelity_frame = FrameTag::interaction;
  BasisTag basis = BasisTag::three_level;
  std::string output_dir;  // empty: caller decides
};

/// Parses and schema-checks a JSON scenario. `expected` is the scenario named
/// on the command line; a config naming a different one is rejected. Empty
/// text yields the defaults for `expected`.
/// Throws ConfigError (syntax, unknown keys, types, missing fields, bad
/// values) or PhysicsGuardError (e.g. ξ > g/10).
ScenarioConfig validate_config(std::string_view raw_text, std::optional<ScenarioKind> expected = std::nullopt);

/// The resolved config as JSON with rad/s units.
nlohmann::json echo_config(const ScenarioConfig& config);

/// {omega1_hz, omega2_hz, Omega1_hz, Omega2_hz, phi_rad}.
nlohmann::json drive_to_json(const DriveConfig& drive);
DriveConfig drive_from_json(const nlohmann::json& fragment);

struct OutputArtifact {
  std::string path;
  std::string sha256;
};

struct RunReport {
  nlohmann::json config;
  std::string tool_version{kToolVersion};
  double wall_seconds = 0.0;
  std::vector<OutputArtifact> outputs;
  nlohmann::json summary;

  nlohmann::json to_json() const;
};

/// Runs one scenario, writing its CSV/JSON artifacts and report.json into
/// config.output_dir (created if needed).
RunReport run_scenario(const ScenarioConfig& config);

struct ColumnDeviation {
  std::string column;
  double max_deviation = 0.0;
  std::size_t worst_row = 0;  // 1-based data row
};

struct GoldenComparison {
  bool pass = false;
  std::vector<ColumnDeviation> columns;
  std::vector<std::string> problems;  // schema differences and failing cells
};

/// Numeric cells are compared by |a − b| / max(1, |golden|), i.e. absolute
/// for values of order one and relative for large frequencies. Text cells
/// must match exactly.
GoldenComparison compare_golden(const std::string& produced_path, const std::string& golden_path,
                                double tolerance);

std::string sha256_file(const std::string& path);

/// Exit statuses shared by every CLI subcommand.
enum class ExitCode : int {
  ok = 0,
  failure = 1,  // golden mismatch, I/O and other errors
  config_error = 2,
  physics_guard = 3,
  numerical_failure = 4,
};

}  // namespace polariton
