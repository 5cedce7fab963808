#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "polariton/scenario.hpp"

namespace {

using polariton::ExitCode;
using polariton::ScenarioKind;

struct RunOptions {
  std::string config_path;
  std::string out_dir;
  double dt = -1.0;
  std::string level;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw polariton::ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int code(ExitCode c) { return static_cast<int>(c); }

int run(ScenarioKind kind, const RunOptions& opts) {
  const std::string text = opts.config_path.empty() ? std::string{} : read_file(opts.config_path);
  auto config = polariton::validate_config(text, kind);
  if (!opts.out_dir.empty()) {
    config.output_dir = opts.out_dir;
  } else if (config.output_dir.empty()) {
    const char* env = std::getenv("POLARITON_OUT_DIR");
    config.output_dir = (env && *env) ? env : "polariton-out";
  }
  if (opts.dt >= 0.0) config.dt = opts.dt;
  if (!opts.level.empty()) config.level = polariton::simulation_level_from_string(opts.level);

  const auto report = polariton::run_scenario(config);
  std::cout << report.summary.dump(2) << '\n';
  for (const auto& out : report.outputs) std::cout << out.sha256 << "  " << config.output_dir << '/' << out.path << '\n';
  return code(ExitCode::ok);
}

void add_run_flags(CLI::App* cmd, RunOptions& opts, bool with_level) {
  cmd->add_option("--config", opts.config_path, "JSON scenario file")->check(CLI::ExistingFile);
  cmd->add_option("--out", opts.out_dir, "output directory (default: $POLARITON_OUT_DIR or ./polariton-out)");
  cmd->add_option("--dt", opts.dt, "fixed integrator step in seconds (default: omega_max*dt = 0.1)")
      ->check(CLI::NonNegativeNumber);
  if (with_level) {
    cmd->add_option("--level", opts.level, "simulation level")
        ->check(CLI::IsMember({"lab", "interaction", "effective"}));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polariton qubit simulator: JC spectrum, noise shifts, holonomic gates, open-system fidelity"};
  app.set_version_flag("--version", std::string(polariton::kToolVersion));
  app.require_subcommand(1);

  struct Entry {
    const char* name;
    const char* help;
    ScenarioKind kind;
    bool level;
  };
  const Entry entries[] = {
      {"spectrum", "dressed-state energies and transition frequencies", ScenarioKind::spectrum, false},
      {"noise-scan", "polariton level shifts under transverse qubit noise", ScenarioKind::noise_scan, false},
      {"synth", "synthesize the two-tone pulse for a holonomic gate", ScenarioKind::synthesize, false},
      {"simulate", "simulate one gate at the chosen level", ScenarioKind::simulate_gate, true},
      {"fig2", "Hadamard fidelity with and without decoherence", ScenarioKind::reproduce_fig2, false},
  };
  RunOptions opts;
  std::vector<std::pair<CLI::App*, ScenarioKind>> commands;
  for (const auto& e : entries) {
    auto* cmd = app.add_subcommand(e.name, e.help);
    add_run_flags(cmd, opts, e.level);
    commands.emplace_back(cmd, e.kind);
  }

  std::string produced, golden;
  double tolerance = 1e-6;
  auto* check = app.add_subcommand("check", "compare a produced CSV against a golden file");
  check->add_option("produced", produced, "produced CSV")->required()->check(CLI::ExistingFile);
  check->add_option("golden", golden, "golden CSV")->required()->check(CLI::ExistingFile);
  check->add_option("--tolerance", tolerance, "absolute tolerance per numeric cell")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? 0 : code(ExitCode::config_error);
  }

  try {
    if (check->parsed()) {
      const auto result = polariton::compare_golden(produced, golden, tolerance);
      for (const auto& col : result.columns) {
        std::cout << col.column << ": max deviation " << col.max_deviation << '\n';
      }
      for (const auto& p : result.problems) std::cout << "FAIL " << p << '\n';
      std::cout << (result.pass ? "PASS" : "FAIL") << '\n';
      return code(result.pass ? ExitCode::ok : ExitCode::failure);
    }
    for (const auto& [cmd, kind] : commands) {
      if (cmd->parsed()) return run(kind, opts);
    }
  } catch (const polariton::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return code(ExitCode::config_error);
  } catch (const polariton::PhysicsGuardError& e) {
    std::cerr << "physics guard: " << e.what() << '\n';
    return code(ExitCode::physics_guard);
  } catch (const polariton::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return code(ExitCode::numerical_failure);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return code(ExitCode::failure);
  }
  return code(ExitCode::failure);
}
