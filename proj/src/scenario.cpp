#include "polariton/scenario.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "polariton/csv.hpp"
#include "polariton/units.hpp"

namespace polariton {

using nlohmann::json;

namespace {

// Walks one JSON object, remembering which keys were read so leftovers can be
// reported as unknown.
class Block {
 public:
  Block(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError("'" + display() + "' must be a JSON object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  std::optional<double> number(const std::string& key) {
    if (!take(key)) return std::nullopt;
    const auto& v = node_.at(key);
    if (!v.is_number()) throw ConfigError("field '" + field(key) + "' must be a number");
    return v.get<double>();
  }

  double required_number(const std::string& key) {
    auto v = number(key);
    if (!v) throw ConfigError("missing required field '" + field(key) + "'");
    return *v;
  }

  std::optional<long long> integer(const std::string& key) {
    if (!take(key)) return std::nullopt;
    const auto& v = node_.at(key);
    if (!v.is_number_integer()) throw ConfigError("field '" + field(key) + "' must be an integer");
    return v.get<long long>();
  }

  std::optional<std::string> string(const std::string& key) {
    if (!take(key)) return std::nullopt;
    const auto& v = node_.at(key);
    if (!v.is_string()) throw ConfigError("field '" + field(key) + "' must be a string");
    return v.get<std::string>();
  }

  std::optional<std::vector<double>> numbers(const std::string& key) {
    if (!take(key)) return std::nullopt;
    const auto& v = node_.at(key);
    if (!v.is_array() || v.empty()) throw ConfigError("field '" + field(key) + "' must be a non-empty array");
    std::vector<double> out;
    for (const auto& item : v) {
      if (!item.is_number()) throw ConfigError("field '" + field(key) + "' must contain only numbers");
      out.push_back(item.get<double>());
    }
    return out;
  }

  std::optional<Block> child(const std::string& key) {
    if (!take(key)) return std::nullopt;
    return Block(node_.at(key), field(key));
  }

  void finish() const {
    for (const auto& item : node_.items()) {
      if (!seen_.count(item.key())) throw ConfigError("unknown key '" + field(item.key()) + "'");
    }
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  bool take(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key) && !node_.at(key).is_null();
  }
  std::string display() const { return path_.empty() ? "<root>" : path_; }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

struct UnitScales {
  double system = kTwoPi;
  double pulse = kTwoPi;
  double rates = kTwoPi;
  double noise = kTwoPi;
};

double unit_scale(const std::string& unit, const std::string& field) {
  if (unit == "hz") return kTwoPi;
  if (unit == "rad/s") return 1.0;
  throw ConfigError("field '" + field + "' must be \"hz\" or \"rad/s\"");
}

void require_positive(double value, const std::string& field) {
  if (!(value > 0.0)) throw ConfigError("field '" + field + "' must be positive");
}

void require_non_negative(double value, const std::string& field) {
  if (!(value >= 0.0)) throw ConfigError("field '" + field + "' must be non-negative");
}

FrameTag frame_from_string(const std::string& name) {
  if (name == "interaction") return FrameTag::interaction;
  if (name == "lab") return FrameTag::lab;
  throw ConfigError("field 'simulation.fidelity_frame' must be \"interaction\" or \"lab\"");
}

BasisTag basis_from_string(const std::string& name) {
  if (name == "three_level") return BasisTag::three_level;
  if (name == "product") return BasisTag::product;
  throw ConfigError("field 'simulation.basis' must be \"three_level\" or \"product\"");
}

std::string_view frame_name(FrameTag f) { return f == FrameTag::interaction ? "interaction" : "lab"; }
std::string_view basis_name(BasisTag b) { return b == BasisTag::three_level ? "three_level" : "product"; }

ComplexVector initial_state_vector(const std::string& name) {
  ComplexVector v = ComplexVector::Zero(3);
  if (name == "plus") {
    v(kPlus) = 1.0;
  } else if (name == "minus") {
    v(kMinus) = 1.0;
  } else {
    v(kGround) = 1.0;
  }
  return v;
}

StepPolicy policy_for(const ScenarioConfig& config) {
  StepPolicy policy;
  policy.max_dt = config.dt;
  return policy;
}

PulseProgram program_for(const ScenarioConfig& config) {
  if (!config.drive_override) return synthesize_pulse(config.system, config.gate, config.xi);
  const auto& drive = *config.drive_override;
  const double xi = std::hypot(drive.amplitude1, drive.amplitude2);
  return PulseProgram{drive, kTwoPi / xi, xi};
}

json gate_report(const PulseProgram& program, SimulationLevel level, double fidelity, double leakage) {
  const GateSpec gate = implemented_gate(program);
  json pulse = drive_to_json(program.drive);
  pulse["tau_s"] = program.tau;
  pulse["xi_hz"] = hz_from_angular(program.xi);
  return json{{"schema_version", kConfigSchemaVersion},
              {"gate", {{"theta", gate.theta}, {"phi", gate.phi}}},
              {"pulse", pulse},
              {"level", std::string(to_string(level))},
              {"fidelity", fidelity},
              {"leakage", leakage},
              {"pulse_area", cyclic_check(program).area}};
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) continue;
    const double x = std::log(xs[i]);
    const double y = std::log(ys[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  template <typename Fn>
  void write(const std::string& name, Fn&& body, RunReport& report) {
    const auto path = dir_ / name;
    {
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + path.string());
      body(out);
    }
    report.outputs.push_back({name, sha256_file(path.string())});
  }

  std::filesystem::path path(const std::string& name) const { return dir_ / name; }

 private:
  std::filesystem::path dir_;
};

std::optional<double> parse_number(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size()) return std::nullopt;
  return v;
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::spectrum: return "spectrum";
    case ScenarioKind::noise_scan: return "noise_scan";
    case ScenarioKind::synthesize: return "synthesize";
    case ScenarioKind::simulate_gate: return "simulate_gate";
    case ScenarioKind::reproduce_fig2: return "reproduce_fig2";
  }
  return "unknown";
}

ScenarioKind scenario_kind_from_string(std::string_view name) {
  for (auto kind : {ScenarioKind::spectrum, ScenarioKind::noise_scan, ScenarioKind::synthesize,
                    ScenarioKind::simulate_gate, ScenarioKind::reproduce_fig2}) {
    if (name == to_string(kind)) return kind;
  }
  throw ConfigError("unknown scenario '" + std::string(name) +
                    "' (expected spectrum, noise_scan, synthesize, simulate_gate or reproduce_fig2)");
}

json drive_to_json(const DriveConfig& drive) {
  return json{{"omega1_hz", hz_from_angular(drive.carrier1)},  {"omega2_hz", hz_from_angular(drive.carrier2)},
              {"Omega1_hz", hz_from_angular(drive.amplitude1)}, {"Omega2_hz", hz_from_angular(drive.amplitude2)},
              {"phi_rad", drive.phase}};
}

DriveConfig drive_from_json(const json& fragment) {
  Block block(fragment, "drive");
  DriveConfig drive;
  drive.carrier1 = angular_from_hz(block.required_number("omega1_hz"));
  drive.carrier2 = angular_from_hz(block.required_number("omega2_hz"));
  drive.amplitude1 = angular_from_hz(block.required_number("Omega1_hz"));
  drive.amplitude2 = angular_from_hz(block.required_number("Omega2_hz"));
  drive.phase = block.required_number("phi_rad");
  block.finish();
  require_positive(drive.carrier1, "drive.omega1_hz");
  require_positive(drive.carrier2, "drive.omega2_hz");
  require_non_negative(drive.amplitude1, "drive.Omega1_hz");
  require_non_negative(drive.amplitude2, "drive.Omega2_hz");
  if (!(std::hypot(drive.amplitude1, drive.amplitude2) > 0.0)) {
    throw ConfigError("drive amplitudes 'drive.Omega1_hz' and 'drive.Omega2_hz' cannot both be zero");
  }
  return drive;
}

ScenarioConfig validate_config(std::string_view raw_text, std::optional<ScenarioKind> expected) {
  json root = json::object();
  const bool blank = raw_text.find_first_not_of(" \t\r\n") == std::string_view::npos;
  if (!blank) {
    try {
      root = json::parse(raw_text.begin(), raw_text.end());
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
  }
  Block top(root, "");
  ScenarioConfig config;

  if (auto version = top.integer("schema_version"); version && *version != kConfigSchemaVersion) {
    throw ConfigError("unsupported schema_version " + std::to_string(*version) + " (this tool reads " +
                      std::to_string(kConfigSchemaVersion) + ")");
  }
  if (auto name = top.string("scenario")) {
    if (name->empty()) throw ConfigError("field 'scenario' is empty");
    config.kind = scenario_kind_from_string(*name);
    if (expected && *expected != config.kind) {
      throw ConfigError("config describes scenario '" + *name + "' but '" + std::string(to_string(*expected)) +
                        "' was requested");
    }
  } else if (expected) {
    config.kind = *expected;
  } else {
    throw ConfigError("missing required field 'scenario'");
  }

  UnitScales units;
  if (auto block = top.child("units")) {
    if (auto u = block->string("system")) units.system = unit_scale(*u, "units.system");
    if (auto u = block->string("pulse")) units.pulse = unit_scale(*u, "units.pulse");
    if (auto u = block->string("rates")) units.rates = unit_scale(*u, "units.rates");
    if (auto u = block->string("noise")) units.noise = unit_scale(*u, "units.noise");
    block->finish();
  }

  if (auto block = top.child("system")) {
    SystemParams s;
    s.omega_r = block->required_number("omega_r") * units.system;
    require_positive(s.omega_r, "system.omega_r");
    s.omega_a = block->number("omega_a").value_or(s.omega_r / units.system) * units.system;
    s.g = block->number("g").value_or(s.omega_r / 20.0 / units.system) * units.system;
    require_positive(s.omega_a, "system.omega_a");
    require_positive(s.g, "system.g");
    if (auto n = block->integer("n_max")) {
      if (*n < 2 || *n > 30) throw ConfigError("field 'system.n_max' must lie in [2, 30]");
      s.n_max = static_cast<int>(*n);
    }
    block->finish();
    config.system = s;
  }
  if (!(config.system.g < config.system.omega_r)) {
    throw PhysicsGuardError("coupling g must stay below omega_r (dispersive-to-resonant regime)");
  }

  if (auto block = top.child("gate")) {
    config.gate.theta = block->required_number("theta");
    config.gate.phi = block->number("phi").value_or(0.0);
    block->finish();
    try {
      config.gate.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("gate: ") + e.what());
    }
  }

  config.xi = config.system.g / 20.0;
  if (auto block = top.child("pulse")) {
    config.xi = block->required_number("xi") * units.pulse;
    require_positive(config.xi, "pulse.xi");
    block->finish();
  }

  if (top.has("drive")) {
    config.drive_override = drive_from_json(root.at("drive"));
    top.child("drive");
  }

  if (auto block = top.child("rates")) {
    config.rates.kappa = block->required_number("kappa") * units.rates;
    config.rates.gamma1 = block->required_number("gamma1") * units.rates;
    config.rates.gamma2 = block->required_number("gamma2") * units.rates;
    block->finish();
    require_non_negative(config.rates.kappa, "rates.kappa");
    require_non_negative(config.rates.gamma1, "rates.gamma1");
    require_non_negative(config.rates.gamma2, "rates.gamma2");
  }

  if (auto block = top.child("noise")) {
    auto amplitudes = block->numbers("a_x");
    if (!amplitudes) throw ConfigError("missing required field 'noise.a_x'");
    config.noise_amplitudes.clear();
    for (double a : *amplitudes) {
      require_non_negative(a, "noise.a_x");
      config.noise_amplitudes.push_back(a * units.noise);
    }
    block->finish();
  }

  if (auto block = top.child("simulation")) {
    if (auto level = block->string("level")) {
      try {
        config.level = simulation_level_from_string(*level);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("simulation.level: ") + e.what());
      }
    }
    if (auto dt = block->number("dt")) {
      require_non_negative(*dt, "simulation.dt");
      config.dt = *dt;
    }
    if (auto res = block->integer("resolution")) {
      if (*res < 2 || *res > 100001) throw ConfigError("field 'simulation.resolution' must lie in [2, 100001]");
      config.resolution = static_cast<std::size_t>(*res);
    }
    if (auto init = block->string("initial_state")) {
      if (*init != "plus" && *init != "minus" && *init != "ground") {
        throw ConfigError("field 'simulation.initial_state' must be \"plus\", \"minus\" or \"ground\"");
      }
      config.initial_state = *init;
    }
    if (auto frame = block->string("fidelity_frame")) config.fidelity_frame = frame_from_string(*frame);
    if (auto basis = block->string("basis")) config.basis = basis_from_string(*basis);
    block->finish();
  }

  if (auto block = top.child("output")) {
    if (auto dir = block->string("dir")) config.output_dir = *dir;
    block->finish();
  }
  top.finish();

  // Physics guards, checked before any computation.
  const bool driven = config.kind == ScenarioKind::synthesize || config.kind == ScenarioKind::simulate_gate ||
                      config.kind == ScenarioKind::reproduce_fig2;
  if (driven) {
    if (!config.system.resonant(1e-9)) {
      throw PhysicsGuardError("gate scenarios assume zero qubit-cavity detuning (omega_a = omega_r)");
    }
    const double xi = config.drive_override ? std::hypot(config.drive_override->amplitude1,
                                                         config.drive_override->amplitude2)
                                            : config.xi;
    if (xi > config.system.g / 10.0 * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "xi = 2pi x " << hz_from_angular(xi) << " Hz violates the g ≫ (Ω₁, Ω₂) assumption (limit g/10 = 2pi x "
          << hz_from_angular(config.system.g / 10.0) << " Hz)";
      throw PhysicsGuardError(msg.str());
    }
  }
  return config;
}

json echo_config(const ScenarioConfig& c) {
  json out{{"schema_version", kConfigSchemaVersion},
           {"scenario", std::string(to_string(c.kind))},
           {"units", {{"system", "rad/s"}, {"pulse", "rad/s"}, {"rates", "rad/s"}, {"noise", "rad/s"}}},
           {"system", {{"omega_a", c.system.omega_a}, {"omega_r", c.system.omega_r}, {"g", c.system.g},
                       {"n_max", c.system.n_max}}},
           {"gate", {{"theta", c.gate.theta}, {"phi", c.gate.phi}}},
           {"pulse", {{"xi", c.xi}}},
           {"rates", {{"kappa", c.rates.kappa}, {"gamma1", c.rates.gamma1}, {"gamma2", c.rates.gamma2}}},
           {"noise", {{"a_x", c.noise_amplitudes}}},
           {"simulation", {{"level", std::string(to_string(c.level))},
                           {"dt", c.dt},
                           {"resolution", c.resolution},
                           {"initial_state", c.initial_state},
                           {"fidelity_frame", std::string(frame_name(c.fidelity_frame))},
                           {"basis", std::string(basis_name(c.basis))}}},
           {"output", {{"dir", c.output_dir}}}};
  if (c.drive_override) out["drive"] = drive_to_json(*c.drive_override);
  return out;
}

json RunReport::to_json() const {
  json files = json::array();
  for (const auto& o : outputs) files.push_back({{"path", o.path}, {"sha256", o.sha256}});
  return json{{"schema_version", kConfigSchemaVersion},
              {"tool", "polariton"},
              {"tool_version", tool_version},
              {"wall_time_s", wall_seconds},
              {"config", config},
              {"outputs", files},
              {"summary", summary}};
}

RunReport run_scenario(const ScenarioConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  RunReport report;
  report.config = echo_config(config);
  ArtifactWriter writer(config.output_dir.empty() ? std::filesystem::path("polariton-out")
                                                  : std::filesystem::path(config.output_dir));

  switch (config.kind) {
    case ScenarioKind::spectrum: {
      const auto levels = spectrum_table(config.system);
      writer.write("spectrum.csv", [&](std::ostream& os) { write_spectrum_csv(os, levels); }, report);
      json transitions = json::array();
      for (int n = 0; n + 1 <= config.system.n_max; ++n) {
        const auto t = transition_frequencies(config.system, n);
        transitions.push_back({{"n", n},
                               {"minus_hz", hz_from_angular(t.minus)},
                               {"plus_hz", hz_from_angular(t.plus)},
                               {"up_hz", hz_from_angular(t.up)},
                               {"down_hz", hz_from_angular(t.down)}});
      }
      report.summary = {{"levels", levels.size()}, {"transitions", transitions}};
      break;
    }
    case ScenarioKind::noise_scan: {
      const auto rows = noise_scan(config.system, config.noise_amplitudes);
      writer.write("noise_scan.csv", [&](std::ostream& os) { write_noise_csv(os, rows); }, report);
      std::vector<double> xs, ys;
      for (const auto& row : rows) {
        if (row.method == "series") {
          xs.push_back(row.a_x);
          ys.push_back(row.report.splitting_correction);
        }
      }
      report.summary = {{"splitting_loglog_slope", loglog_slope(xs, ys)},
                        {"weak_coupling", weak_coupling(config.system)}};
      break;
    }
    case ScenarioKind::synthesize: {
      const auto program = program_for(config);
      const auto block = simulated_qubit_block(config.system, program, SimulationLevel::effective);
      const double fidelity = gate_fidelity(block, gate_matrix(implemented_gate(program)));
      const json gate = gate_report(program, SimulationLevel::effective, fidelity, 0.0);
      writer.write("gate_report.json", [&](std::ostream& os) { os << gate.dump(2) << '\n'; }, report);
      report.summary = {{"fidelity", fidelity}, {"tau_s", program.tau}};
      break;
    }
    case ScenarioKind::simulate_gate: {
      const auto program = program_for(config);
      const auto result = simulate_gate(config.system, program, config.level,
                                        initial_state_vector(config.initial_state), policy_for(config));
      json gate = gate_report(program, config.level, result.fidelity, result.leakage);
      gate["initial_state"] = config.initial_state;
      writer.write("gate_report.json", [&](std::ostream& os) { os << gate.dump(2) << '\n'; }, report);
      report.summary = {{"fidelity", result.fidelity}, {"leakage", result.leakage}};
      break;
    }
    case ScenarioKind::reproduce_fig2: {
      HadamardOptions options;
      options.basis = config.basis;
      options.fidelity_frame = config.fidelity_frame;
      options.policy = policy_for(config);
      const auto experiment = hadamard_experiment(config.system, config.rates, config.xi, config.resolution, options);
      writer.write("fig2_fidelity.csv", [&](std::ostream& os) { write_fidelity_csv(os, experiment); }, report);
      report.summary = {{"fidelity_with_decoherence_end", experiment.with_decoherence.fidelity.back()},
                        {"fidelity_without_end", experiment.without_decoherence.fidelity.back()},
                        {"fidelity_start", experiment.with_decoherence.fidelity.front()},
                        {"dt_s", experiment.dt},
                        {"max_trace_error", experiment.max_trace_error},
                        {"min_eigenvalue", experiment.min_eigenvalue}};
      break;
    }
  }

  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::ofstream out(writer.path("report.json"), std::ios::binary | std::ios::trunc);
  out << report.to_json().dump(2) << '\n';
  return report;
}

GoldenComparison compare_golden(const std::string& produced_path, const std::string& golden_path,
                                double tolerance) {
  GoldenComparison result;
  CsvTable produced, golden;
  try {
    produced = read_csv(produced_path);
    golden = read_csv(golden_path);
  } catch (const std::exception& e) {
    result.problems.push_back(e.what());
    return result;
  }
  if (produced.schema != golden.schema) {
    result.problems.push_back("schema line differs: '" + produced.schema + "' vs '" + golden.schema + "'");
  }
  if (produced.columns != golden.columns) {
    std::ostringstream msg;
    msg << "column mismatch: produced [";
    for (const auto& c : produced.columns) msg << ' ' << c;
    msg << " ] vs golden [";
    for (const auto& c : golden.columns) msg << ' ' << c;
    msg << " ]";
    result.problems.push_back(msg.str());
    return result;
  }
  if (produced.rows.size() != golden.rows.size()) {
    result.problems.push_back("row count differs: " + std::to_string(produced.rows.size()) + " vs " +
                              std::to_string(golden.rows.size()));
    return result;
  }

  for (std::size_t c = 0; c < golden.columns.size(); ++c) {
    ColumnDeviation dev{golden.columns[c], 0.0, 0};
    for (std::size_t r = 0; r < golden.rows.size(); ++r) {
      const auto& a = produced.rows[r][c];
      const auto& b = golden.rows[r][c];
      const auto x = parse_number(a);
      const auto y = parse_number(b);
      const double d = (x && y) ? std::abs(*x - *y) / std::max(1.0, std::abs(*y)) : (a == b ? 0.0 : std::numeric_limits<double>::infinity());
      if (d > dev.max_deviation || std::isnan(d)) {
        dev.max_deviation = std::isnan(d) ? std::numeric_limits<double>::infinity() : d;
        dev.worst_row = r + 1;
      }
    }
    if (dev.max_deviation > tolerance) {
      std::ostringstream msg;
      msg << "row " << dev.worst_row << ", column " << dev.column << ": deviation " << dev.max_deviation
          << " exceeds tolerance " << tolerance;
      result.problems.push_back(msg.str());
    }
    result.columns.push_back(dev);
  }
  result.pass = result.problems.empty();
  return result;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  char buf[1 << 14];
  while (in) {
    in.read(buf, sizeof buf);
    EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

}  // namespace polariton
