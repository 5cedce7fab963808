// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "polariton/lindblad.hpp"
#include "polariton/noise_robustness.hpp"
#include "polariton/units.hpp"

using namespace polariton;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Report {
 public:
  void require(bool ok, const char* fmt, double value) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, value);
    outcome_.pass = outcome_.pass && ok;
    if (!outcome_.detail.empty()) outcome_.detail += "; ";
    outcome_.detail += buf;
  }
  Outcome take() { return std::move(outcome_); }

 private:
  Outcome outcome_;
};

SystemParams system_with(double omega_a, double omega_r, double g, int n_max) {
  SystemParams p;
  p.omega_a = omega_a;
  p.omega_r = omega_r;
  p.g = g;
  p.n_max = n_max;
  return p;
}

ComplexVector basis3(Eigen::Index k) {
  ComplexVector v = ComplexVector::Zero(3);
  v(k) = 1.0;
  return v;
}

Eigen::Matrix2cd gate_oracle(double theta, double phi) {
  Eigen::Matrix2cd u;
  u << std::cos(theta), std::sin(theta) * std::polar(1.0, -phi), std::sin(theta) * std::polar(1.0, phi),
      -std::cos(theta);
  return u;
}

oracle::Mat v_system_oracle(double xi, double theta, double phi) {
  oracle::Mat h = oracle::Mat::Zero(3, 3);
  h(kGround, kPlus) = xi / 2 * std::sin(theta / 2) * std::polar(1.0, phi);
  h(kGround, kMinus) = -xi / 2 * std::cos(theta / 2);
  h(kPlus, kGround) = std::conj(h(kGround, kPlus));
  h(kMinus, kGround) = std::conj(h(kGround, kMinus));
  return h;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const HadamardExperiment& fig2_run() {
  static const HadamardExperiment run = [] {
    const auto p = reference_system();
    return hadamard_experiment(p, DecoherenceRates::reference(), p.g / 20, 201);
  }();
  return run;
}

Outcome fig2_reproduction() {
  Report r;
  const auto& e = fig2_run();
  const double with = e.with_decoherence.fidelity.back();
  const double without = e.without_decoherence.fidelity.back();
  r.require(std::abs(with - 0.995) <= 0.003, "F_H(1) with decoherence = %.6f (target 0.995 +- 0.003)", with);
  r.require(without >= 0.995, "F_H(1) without = %.6f (>= 0.995)", without);
  r.require(e.with_decoherence.fidelity.front() == 0.5 && e.without_decoherence.fidelity.front() == 0.5,
            "F(0) = %.17g (exactly 0.5)", e.with_decoherence.fidelity.front());
  return r.take();
}

Outcome gate_exactness() {
  Report r;
  std::mt19937 rng(20240601);
  std::uniform_real_distribution<double> th(0.0, std::numbers::pi), ph(0.0, 2 * std::numbers::pi);
  const double xi = reference_system().g / 20;
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double theta = th(rng), phi = ph(rng);
    const oracle::Mat u_oracle = oracle::expm_taylor(v_system_oracle(xi, theta, phi), kTwoPi / xi);
    const Eigen::Matrix2cd target = gate_oracle(theta, phi);
    const Eigen::Matrix2cd from_library = qubit_block(ideal_holonomic_propagator({theta, phi}, xi));
    const Eigen::Matrix2cd from_oracle = qubit_block(u_oracle);
    worst = std::max(worst, 1.0 - gate_fidelity(from_library, target));
    worst = std::max(worst, 1.0 - gate_fidelity(from_oracle, target));
  }
  r.require(worst < 1e-10, "max infidelity over 50 random (theta, phi) = %.3e (< 1e-10)", worst);
  const Eigen::Matrix2cd h = (Eigen::Matrix2cd() << 1, 1, 1, -1).finished() / std::sqrt(2.0);
  const double dev = (qubit_block(ideal_holonomic_propagator(GateSpec::hadamard(), xi)) - h).cwiseAbs().maxCoeff();
  r.require(dev < 1e-12, "|U(pi/4, 0) - Hadamard|_max = %.3e", dev);
  return r.take();
}

Outcome spectrum_oracle() {
  Report r;
  std::mt19937 rng(8675309);
  std::uniform_real_distribution<double> wr(4e9, 10e9), det(-0.5, 0.5), cpl(0.005, 0.08);
  double worst_energy = 0.0, worst_sum = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double omega_r = kTwoPi * wr(rng);
    const double g = cpl(rng) * omega_r;
    const double omega_a = omega_r + det(rng) * 4 * g;
    const int n_max = 5;
    const auto p = system_with(omega_a, omega_r, g, n_max);
    Eigen::SelfAdjointEigenSolver<oracle::Mat> es(oracle::jc_matrix(omega_a, omega_r, g, n_max),
                                                  Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = es.eigenvalues();  // |0,0>, then (1,-), (1,+), (2,-), ...
    for (int n = 1; n <= 4; ++n) {
      for (Branch b : {Branch::minus, Branch::plus}) {
        const double exact = ev(2 * n - 1 + (b == Branch::plus ? 1 : 0));
        worst_energy = std::max(worst_energy, std::abs(eigen_energy(p, n, b) - exact) / std::abs(exact));
      }
    }
    for (int n = 0; n <= 4; ++n) {
      const auto t = transition_frequencies(p, n);
      worst_sum = std::max(worst_sum, std::abs(t.plus + t.minus - 2 * omega_r) / (2 * omega_r));
      worst_sum = std::max(worst_sum, std::abs(t.up + t.down - 2 * omega_r) / (2 * omega_r));
    }
  }
  r.require(worst_energy < 1e-10, "closed form vs diagonalization, max rel. error = %.3e (< 1e-10)", worst_energy);
  r.require(worst_sum < 1e-12, "sum rules, max rel. error = %.3e (< 1e-12)", worst_sum);
  return r.take();
}

// Shift of the |-,1> level from exact diagonalization, built without the library.
double diagonalized_shift_minus(double omega_r, double g, double a_x, int n_max) {
  oracle::Mat h = oracle::jc_matrix(omega_r, omega_r, g, n_max);
  const oracle::Mat sx = oracle::lowering(n_max) + oracle::lowering(n_max).adjoint();
  h += a_x * sx;
  Eigen::SelfAdjointEigenSolver<oracle::Mat> es(h);
  oracle::Vec minus = oracle::Vec::Zero(h.rows());
  minus(oracle::idx(0, 1, n_max)) = 1 / std::sqrt(2.0);
  minus(oracle::idx(1, 0, n_max)) = -1 / std::sqrt(2.0);
  Eigen::Index best = 0;
  (es.eigenvectors().adjoint() * minus).cwiseAbs2().maxCoeff(&best);
  return es.eigenvalues()(best) - (omega_r - g);
}

Outcome noise_agreement() {
  Report r;
  const auto p = reference_system();
  double worst = 0.0;
  for (double mhz : {1.0, 2.0, 5.0, 10.0, 20.0}) {
    const NoiseSpec noise{angular_from_hz(mhz * 1e6)};
    for (Branch b : {Branch::minus, Branch::plus}) {
      const double c = shift_closed_form(p, noise, b);
      worst = std::max(worst, std::abs(shift_series(p, noise, b) - c) / std::abs(c));
    }
  }
  r.require(worst < 1e-12, "series vs closed form, max rel. deviation = %.3e (< 1e-12)", worst);

  const NoiseSpec ten{angular_from_hz(10e6)};
  double approx_dev = 0.0;
  for (Branch b : {Branch::minus, Branch::plus}) {
    const double c = shift_closed_form(p, ten, b);
    approx_dev = std::max(approx_dev, std::abs(shift_approx(p, ten, b) - c) / std::abs(c));
  }
  r.require(approx_dev <= 3 * p.g / p.omega_r, "approximation rel. deviation = %.4f (<= 3 g/omega_r = 0.15)",
            approx_dev);

  std::vector<double> amps, residuals;
  for (double mhz : {4.0, 6.0, 10.0, 16.0, 25.0, 40.0}) {
    const double a = angular_from_hz(mhz * 1e6);
    amps.push_back(a);
    residuals.push_back(std::abs(diagonalized_shift_minus(p.omega_r, p.g, a, p.n_max) -
                                 shift_closed_form(p, NoiseSpec{a}, Branch::minus)));
  }
  const double slope = loglog_slope(amps, residuals);
  r.require(std::abs(slope - 4.0) <= 0.1, "oracle residual log-log slope over 4-40 MHz = %.4f (4 +- 0.1)", slope);
  return r.take();
}

Outcome rwa_trend() {
  Report r;
  const auto p = reference_system();
  std::vector<double> fidelities;
  for (double denominator : {10.0, 20.0, 40.0}) {
    const auto prog = synthesize_pulse(p, GateSpec::hadamard(), p.g / denominator);
    fidelities.push_back(simulate_gate(p, prog, SimulationLevel::interaction, basis3(kPlus)).fidelity);
  }
  const bool monotone = fidelities[0] <= fidelities[1] && fidelities[1] <= fidelities[2];
  char buf[160];
  std::snprintf(buf, sizeof buf, "interaction-level fidelity at xi/g = 1/10, 1/20, 1/40: %.6f, %.6f, %%.6f",
                fidelities[0], fidelities[1]);
  r.require(monotone, buf, fidelities[2]);
  const auto prog = synthesize_pulse(p, GateSpec::hadamard(), p.g / 20);
  const double leakage = simulate_gate(p, prog, SimulationLevel::lab, basis3(kPlus)).leakage;
  r.require(leakage < 0.01, "product-space leakage at xi = g/20: %.3e (< 1e-2)", leakage);
  return r.take();
}

Outcome open_system() {
  Report r;
  const auto& e = fig2_run();
  r.require(e.max_trace_error < 1e-8, "Hadamard-run trace drift = %.3e (< 1e-8)", e.max_trace_error);
  r.require(e.min_eigenvalue >= -1e-8, "Hadamard-run min eigenvalue = %.3e (>= -1e-8)", e.min_eigenvalue);

  const auto p = reference_system();
  const auto prog = synthesize_pulse(p, GateSpec::hadamard(), p.g / 20);
  const auto h = three_level_split_hamiltonian(p, prog.drive);
  StepPolicy policy;
  policy.samples = 51;
  policy.frequency_bound = prog.drive.max_carrier();
  const auto master = evolve_master(h, pure_density(basis3(kPlus), BasisTag::three_level, FrameTag::lab),
                                    DecoherenceRates{}, projected_collapse_operators(p), {0.0, prog.tau}, policy);
  const auto pure = integrate_schrodinger(h, basis3(kPlus), TimeSpan<double>{0.0, prog.tau}, policy);
  double worst = 0.0;
  for (std::size_t k = 0; k < pure.size(); ++k) {
    worst = std::max(worst, (master.states.state(k) - pure.state(k) * pure.state(k).adjoint()).cwiseAbs().maxCoeff());
  }
  r.require(worst < 1e-8, "zero-rate master vs pure state, max deviation = %.3e (< 1e-8)", worst);

  // Single channels under H = 0, each with its analytic decay law.
  const double rate = 1.0, t1 = 1.5, s = 1 / std::sqrt(2.0);
  const HamiltonianFn<double> zero = [](double) -> ComplexMatrix { return ComplexMatrix::Zero(3, 3); };
  StepPolicy fixed;
  fixed.max_dt = t1 / 2000;
  const auto ops = projected_collapse_operators(p);
  auto final_rho = [&](const DecoherenceRates& rates, const ComplexVector& psi) {
    return evolve_master(zero, pure_density(psi, BasisTag::three_level, FrameTag::lab), rates, ops, {0.0, t1}, fixed)
        .states.back();
  };
  ComplexVector bright_cavity = (basis3(kMinus) + basis3(kPlus)) * s;
  ComplexVector bright_decay = (basis3(kPlus) - basis3(kMinus)) * s;
  const double kappa = -std::log(1 - final_rho({rate, 0, 0}, bright_cavity)(kGround, kGround).real()) / t1;
  const double gamma1 = -std::log(1 - final_rho({0, rate, 0}, bright_decay)(kGround, kGround).real()) / t1;
  const double gamma2 = -std::log(2 * final_rho({0, 0, rate}, basis3(kPlus))(kPlus, kPlus).real() - 1) / (2 * t1);
  const double channel_err =
      std::max({std::abs(kappa - rate), std::abs(gamma1 - rate), std::abs(gamma2 - rate)}) / rate;
  r.require(channel_err < 0.01, "single-channel rates, max rel. error = %.3e (< 1%%)", channel_err);
  return r.take();
}

Outcome parallel_transport() {
  Report r;
  const double xi = reference_system().g / 20;
  const double library = parallel_transport_check(GateSpec::hadamard(), xi, 1001);
  // Independent check: evolve |+>, |-> under a Taylor exponential of H1v.
  const double theta = std::numbers::pi / 4;
  const oracle::Mat h = v_system_oracle(xi, theta, 0.0);
  double worst = 0.0;
  const int samples = 201;
  for (int k = 0; k < samples; ++k) {
    const double t = kTwoPi / xi * k / (samples - 1);
    const oracle::Mat u = oracle::expm_taylor(h, t);
    const oracle::Vec a = u.col(kPlus), b = u.col(kMinus);
    for (const auto* x : {&a, &b})
      for (const auto* y : {&a, &b}) worst = std::max(worst, std::abs(x->dot(h * *y)) / xi);
  }
  r.require(library < 1e-10, "max |<psi_a|H1v|psi_b>|/xi over 1001 samples = %.3e (< 1e-10)", library);
  r.require(worst < 1e-10, "independent Taylor-propagator check = %.3e (< 1e-10)", worst);
  return r.take();
}

Outcome determinism() {
  Report r;
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "polariton_acceptance_determinism";
  fs::remove_all(base);
  bool ran = true;
  for (const char* run : {"a", "b"}) {
    const std::string cmd = std::string(POLARITON_CLI) + " fig2 --out " + (base / run).string() + " > /dev/null";
    ran = ran && std::system(cmd.c_str()) == 0;
  }
  const std::string a = slurp(base / "a" / "fig2_fidelity.csv");
  const std::string b = slurp(base / "b" / "fig2_fidelity.csv");
  r.require(ran && !a.empty() && a == b, "two fig2 runs byte-identical: %.0f", ran && !a.empty() && a == b ? 1.0 : 0.0);
  r.require(ran, "CSV size %.0f bytes", double(a.size()));
  return r.take();
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "Hadamard fidelity curve", fig2_reproduction},
      {2, "gate exactness at the effective level", gate_exactness},
      {3, "spectrum oracle equivalence", spectrum_oracle},
      {4, "noise-shift triple agreement", noise_agreement},
      {5, "RWA validity trend", rwa_trend},
      {6, "open-system sanity", open_system},
      {7, "parallel transport", parallel_transport},
      {8, "determinism", determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
