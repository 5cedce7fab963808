#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "polariton/csv.hpp"
#include "polariton/scenario.hpp"
#include "polariton/units.hpp"

using namespace polariton;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("polariton_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

std::string error_of(std::string_view text, std::optional<ScenarioKind> kind = std::nullopt) {
  try {
    validate_config(text, kind);
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(POLARITON_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("minimal fig2 config resolves to the reference parameters") {
  const auto c = validate_config(R"({"scenario": "reproduce_fig2"})");
  CHECK(c.kind == ScenarioKind::reproduce_fig2);
  CHECK(c.system.omega_r == doctest::Approx(kTwoPi * 8e9));
  CHECK(c.system.omega_a == c.system.omega_r);
  CHECK(c.system.g == doctest::Approx(c.system.omega_r / 20));
  CHECK(c.xi == doctest::Approx(c.system.g / 20));
  CHECK(c.gate.theta == doctest::Approx(std::numbers::pi / 4));
  CHECK(c.gate.phi == 0.0);
  CHECK(c.rates.kappa == doctest::Approx(kTwoPi * 8e3));
  CHECK(c.rates.gamma1 == c.rates.kappa);
  CHECK(c.rates.gamma2 == c.rates.kappa);
  CHECK(c.resolution == 201);
  const auto echo = echo_config(c);
  CHECK(echo["units"]["system"] == "rad/s");
  CHECK(echo["schema_version"] == kConfigSchemaVersion);
  CHECK(echo["system"]["omega_r"].get<double>() == c.system.omega_r);

  const auto bare = validate_config("", ScenarioKind::reproduce_fig2);
  CHECK(echo_config(bare) == echo);
}

TEST_CASE("config errors name the offending field") {
  CHECK(error_of("{}").find("scenario") != std::string::npos);
  CHECK(error_of(R"({"scenario": ""})").find("scenario") != std::string::npos);
  CHECK(error_of(R"({"scenario": "spectrum", "sytem": {}})").find("sytem") != std::string::npos);
  CHECK(error_of(R"({"scenario": "spectrum", "system": {}})").find("system.omega_r") != std::string::npos);
  CHECK(error_of(R"({"scenario": "spectrum", "system": {"omega_r": 8e9, "gg": 1}})").find("system.gg") !=
        std::string::npos);
  CHECK(error_of(R"({"scenario": "spectrum", "system": {"omega_r": "8e9"}})").find("must be a number") !=
        std::string::npos);
  CHECK(error_of(R"({"scenario": "spectrum", "system": {"omega_r": -1}})").find("positive") != std::string::npos);
  CHECK(error_of(R"({"scenario": "spectrum", "units": {"system": "GHz"}})").find("units.system") !=
        std::string::npos);
  CHECK(error_of(R"({"scenario": "reproduce_fig2", "rates": {"kappa": 1}})").find("rates.gamma1") !=
        std::string::npos);
  CHECK(error_of(R"({"scenario": "noise_scan", "noise": {}})").find("noise.a_x") != std::string::npos);
  CHECK(error_of(R"({"scenario": "bogus"})").find("bogus") != std::string::npos);
  CHECK(error_of(R"({"scenario": "spectrum",)").find("JSON") != std::string::npos);
  CHECK(error_of(R"({"scenario": "spectrum", "schema_version": 7})").find("schema_version") != std::string::npos);
  CHECK(error_of(R"({"scenario": "spectrum"})", ScenarioKind::reproduce_fig2).find("requested") !=
        std::string::npos);
  CHECK_THROWS_AS(validate_config(R"({"scenario": "spectrum", "extra": 1})"), ConfigError);
}

TEST_CASE("physics guards reject large xi and detuned gate scenarios") {
  const double g_hz = 8e9 / 20;
  std::ostringstream cfg;
  cfg << R"({"scenario": "reproduce_fig2", "pulse": {"xi": )" << g_hz / 5 << "}}";
  CHECK_THROWS_AS(validate_config(cfg.str()), PhysicsGuardError);
  CHECK(error_of(cfg.str()).find("g ≫ (Ω₁, Ω₂)") != std::string::npos);
  CHECK_THROWS_AS(validate_config(R"({"scenario": "synthesize", "system": {"omega_r": 8e9, "omega_a": 8.1e9}})"),
                  PhysicsGuardError);
  CHECK_NOTHROW(validate_config(R"({"scenario": "spectrum", "system": {"omega_r": 8e9, "omega_a": 8.1e9}})"));
  CHECK_THROWS_AS(validate_config(R"({"scenario": "spectrum", "system": {"omega_r": 8e9, "g": 9e9}})"),
                  PhysicsGuardError);
}

TEST_CASE("units round-trip from Hz through rad/s back to Hz") {
  const auto c = validate_config(R"({"scenario": "spectrum", "system": {"omega_r": 7.123456789e9, "g": 3.21e8}})");
  CHECK(std::abs(hz_from_angular(c.system.omega_r) - 7.123456789e9) <= 1e-12 * 7.123456789e9);
  CHECK(std::abs(hz_from_angular(c.system.g) - 3.21e8) <= 1e-12 * 3.21e8);
  const auto r = validate_config(
      R"({"scenario": "spectrum", "units": {"system": "rad/s"}, "system": {"omega_r": 5.0e10, "g": 1.0e9}})");
  CHECK(r.system.omega_r == 5.0e10);

  const auto d = drive_from_json(nlohmann::json{
      {"omega1_hz", 7.6e9}, {"omega2_hz", 8.4e9}, {"Omega1_hz", 1.8e7}, {"Omega2_hz", 7.6e6}, {"phi_rad", 0.25}});
  const auto back = drive_to_json(d);
  CHECK(std::abs(back["omega1_hz"].get<double>() - 7.6e9) <= 1e-12 * 7.6e9);
  CHECK(std::abs(back["Omega2_hz"].get<double>() - 7.6e6) <= 1e-12 * 7.6e6);
  CHECK(back["phi_rad"].get<double>() == 0.25);
  CHECK_THROWS_AS(drive_from_json(nlohmann::json{{"omega1_hz", 1.0}}), ConfigError);
}

TEST_CASE("golden comparison") {
  const auto dir = scratch("golden");
  const std::string header = "# schema=polariton.fidelity version=1\nx,y\n";
  write_text(dir / "a.csv", header + "0,1.0\n1,2.0\n");
  write_text(dir / "b.csv", header + "0,1.0\n1,2.0000001\n");
  write_text(dir / "c.csv", "# schema=polariton.fidelity version=1\nx,z\n0,1.0\n1,2.0\n");

  auto same = compare_golden((dir / "a.csv").string(), (dir / "a.csv").string(), 1e-6);
  CHECK(same.pass);
  CHECK(same.columns.size() == 2);

  auto off = compare_golden((dir / "b.csv").string(), (dir / "a.csv").string(), 1e-9);
  CHECK_FALSE(off.pass);
  REQUIRE(off.problems.size() == 1);
  CHECK(off.problems[0].find("row 2") != std::string::npos);
  CHECK(off.problems[0].find("column y") != std::string::npos);
  CHECK(compare_golden((dir / "b.csv").string(), (dir / "a.csv").string(), 1e-6).pass);

  auto schema = compare_golden((dir / "c.csv").string(), (dir / "a.csv").string(), 1e-6);
  CHECK_FALSE(schema.pass);
  CHECK(schema.problems[0].find("column mismatch") != std::string::npos);

  CHECK(sha256_file((dir / "a.csv").string()).size() == 64);
  write_text(dir / "empty", "");
  CHECK(sha256_file((dir / "empty").string()) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("spectrum scenario matches the golden file") {
  const auto dir = scratch("spectrum");
  auto c = validate_config(R"({"scenario": "spectrum"})");
  c.output_dir = dir.string();
  const auto report = run_scenario(c);
  REQUIRE(report.outputs.size() == 1);
  CHECK(report.outputs[0].sha256 == sha256_file((dir / "spectrum.csv").string()));
  const auto cmp = compare_golden((dir / "spectrum.csv").string(), std::string(GOLDEN_DIR) + "/spectrum.csv", 1e-6);
  CHECK(cmp.pass);
  const auto json = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(json["tool_version"] == std::string(kToolVersion));
  CHECK(json["outputs"][0]["path"] == "spectrum.csv");
}

TEST_CASE("noise scan output has slope 2 in log-log") {
  const auto dir = scratch("noise");
  auto c = validate_config(R"({"scenario": "noise_scan", "noise": {"a_x": [1e6, 3e6, 1e7]}})");
  c.output_dir = dir.string();
  const auto report = run_scenario(c);
  CHECK(report.summary["splitting_loglog_slope"].get<double>() == doctest::Approx(2.0).epsilon(1e-6));
  const auto table = read_csv((dir / "noise_scan.csv").string());
  CHECK(table.columns.front() == "a_x_Hz_over_2pi");
  CHECK(table.rows.size() == 3 * 5);
}

TEST_CASE("gate scenarios write a gate report") {
  const auto dir = scratch("gate");
  auto c = validate_config(R"({"scenario": "simulate_gate", "simulation": {"level": "effective"}})");
  c.output_dir = dir.string();
  run_scenario(c);
  const auto gate = nlohmann::json::parse(slurp(dir / "gate_report.json"));
  CHECK(gate["schema_version"] == kConfigSchemaVersion);
  CHECK(gate["fidelity"].get<double>() == doctest::Approx(1.0));
  CHECK(gate["pulse_area"].get<double>() == doctest::Approx(kTwoPi));
  CHECK(gate["gate"]["theta"].get<double>() == doctest::Approx(std::numbers::pi / 4));
}

TEST_CASE("CLI exit codes") {
  const auto dir = scratch("cli");
  write_text(dir / "bad.json", R"({"scenario": "spectrum", "nope": 1})");
  write_text(dir / "guard.json", R"({"pulse": {"xi": 1e8}})");
  write_text(dir / "fine_dt.json", R"({"simulation": {"dt": 1e-9}})");
  CHECK(run_cli("spectrum --out " + (dir / "s").string()) == 0);
  CHECK(fs::exists(dir / "s" / "spectrum.csv"));
  CHECK(run_cli("spectrum --config " + (dir / "bad.json").string()) == 2);
  CHECK(run_cli("fig2 --config " + (dir / "guard.json").string()) == 3);
  CHECK(run_cli("fig2 --out " + (dir / "f").string() + " --config " + (dir / "fine_dt.json").string()) == 4);
  CHECK(run_cli("simulate --level sideways") == 2);
  CHECK(run_cli("check " + (dir / "s" / "spectrum.csv").string() + " " + std::string(GOLDEN_DIR) +
                "/spectrum.csv") == 0);
  CHECK(run_cli("check " + (dir / "bad.json").string() + " " + std::string(GOLDEN_DIR) + "/spectrum.csv") == 1);

  // The environment variable supplies the default output directory.
  const std::string env_dir = (dir / "from_env").string();
  CHECK(std::system(("POLARITON_OUT_DIR=" + env_dir + " " + POLARITON_CLI + " spectrum > /dev/null").c_str()) == 0);
  CHECK(fs::exists(fs::path(env_dir) / "spectrum.csv"));
}
