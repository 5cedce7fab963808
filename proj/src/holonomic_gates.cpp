#include "polariton/holonomic_gates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "polariton/units.hpp"

namespace polariton {

namespace {

constexpr double kCyclicTolerance = 1e-9;

ComplexVector basis_state(Eigen::Index k) {
  ComplexVector v = ComplexVector::Zero(3);
  v(k) = 1.0;
  return v;
}

void require_three_level_state(const ComplexVector& psi0) {
  if (psi0.size() != 3) throw std::invalid_argument("initial state must live in the three-level space");
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw std::invalid_argument("initial state must be normalized");
}

// Largest explicit frequency in the three-level interaction-picture generator.
StepPolicy interaction_policy(const SystemParams& params, const PulseProgram& program, StepPolicy policy) {
  const double bound = program.drive.max_carrier() + eigen_energy(params, 1, Branch::plus);
  policy.frequency_bound = std::max(policy.frequency_bound, bound);
  return policy;
}

}  // namespace

void GateSpec::validate() const {
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) throw std::invalid_argument("gate theta must lie in [0, pi]");
  if (!(phi >= 0.0 && phi < kTwoPi)) throw std::invalid_argument("gate phi must lie in [0, 2 pi)");
}

GateSpec GateSpec::hadamard() noexcept { return GateSpec{std::numbers::pi / 4.0, 0.0}; }

Eigen::Matrix2cd gate_matrix(const GateSpec& spec) {
  const double c = std::cos(spec.theta);
  const double s = std::sin(spec.theta);
  Eigen::Matrix2cd u;
  u << c, s * std::polar(1.0, -spec.phi), s * std::polar(1.0, spec.phi), -c;
  return u;
}

PulseProgram synthesize_pulse(const SystemParams& params, const GateSpec& spec, double xi) {
  params.validate();
  spec.validate();
  if (!(xi > 0.0)) throw std::invalid_argument("effective Rabi frequency xi must be positive");
  if (xi > params.g / 10.0 * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "xi = " << xi << " rad/s exceeds g/10 = " << params.g / 10.0
        << " rad/s; the reduction to the V-system needs g ≫ (Ω₁, Ω₂)";
    throw PhysicsGuardError(msg.str());
  }
  const auto carriers = resonance_frequencies(params);
  const DriveConfig drive{carriers.lower, carriers.upper, xi * std::cos(spec.theta / 2.0),
                          xi * std::sin(spec.theta / 2.0), spec.phi};
  return PulseProgram{drive, kTwoPi / xi, xi};
}

GateSpec implemented_gate(const PulseProgram& program) {
  const auto v = VSystemParams::from_amplitudes(program.drive.amplitude1, program.drive.amplitude2,
                                                program.drive.phase);
  return GateSpec{v.theta, v.phi};
}

ComplexMatrix ideal_holonomic_propagator(const GateSpec& spec, double xi) {
  return ideal_holonomic_propagator(spec, xi, kTwoPi / xi);
}

ComplexMatrix ideal_holonomic_propagator(const GateSpec& spec, double xi, double tau) {
  const double area = xi * tau;
  if (std::abs(area - kTwoPi) > kCyclicTolerance) {
    std::ostringstream msg;
    msg << "pulse area " << area << " rad is not 2 pi; the evolution is not cyclic";
    throw PhysicsGuardError(msg.str());
  }
  return matrix_exp_unitary(v_system_hamiltonian(VSystemParams{xi, spec.theta, spec.phi}), tau);
}

Eigen::Matrix2cd qubit_block(const ComplexMatrix& three_level) {
  if (three_level.rows() != 3 || three_level.cols() != 3) throw std::invalid_argument("expected a 3x3 operator");
  Eigen::Matrix2cd block;
  block << three_level(kPlus, kPlus), three_level(kPlus, kMinus), three_level(kMinus, kPlus),
      three_level(kMinus, kMinus);
  return block;
}

CyclicCheck cyclic_check(const PulseProgram& program) {
  const double area = program.xi * program.tau;
  return CyclicCheck{area, std::abs(area - kTwoPi) <= kCyclicTolerance};
}

double parallel_transport_check(const GateSpec& spec, double xi, std::size_t n_samples) {
  if (n_samples < 2) throw std::invalid_argument("need at least two samples");
  const Hermitian<double> h(v_system_hamiltonian(VSystemParams{xi, spec.theta, spec.phi}));
  const double tau = kTwoPi / xi;
  const ComplexVector plus = basis_state(kPlus);
  const ComplexVector minus = basis_state(kMinus);
  double worst = 0.0;
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double t = tau * static_cast<double>(k) / static_cast<double>(n_samples - 1);
    const ComplexMatrix u = matrix_exp_unitary(h, t);
    const ComplexVector states[2] = {u * plus, u * minus};
    for (const auto& a : states) {
      for (const auto& b : states) worst = std::max(worst, std::abs(a.dot(h.matrix() * b)));
    }
  }
  return worst / xi;
}

double parallel_transport_residual(const SystemParams& params, const PulseProgram& program,
                                   std::size_t n_samples, const StepPolicy& policy) {
  StepPolicy p = interaction_policy(params, program, policy);
  p.samples = n_samples;
  const HamiltonianFn<double> h = [&](double t) { return interaction_picture_hamiltonian(params, program.drive, t); };
  const auto plus = integrate_schrodinger<double>(h, basis_state(kPlus), {0.0, program.tau}, p);
  const auto minus = integrate_schrodinger<double>(h, basis_state(kMinus), {0.0, program.tau}, p);
  double worst = 0.0;
  for (std::size_t i = 0; i < plus.size(); ++i) {
    const ComplexMatrix hi = h(plus.time(i));
    const ComplexVector* states[2] = {&plus.state(i), &minus.state(i)};
    for (const auto* a : states) {
      for (const auto* b : states) worst = std::max(worst, std::abs(a->dot(hi * *b)));
    }
  }
  return worst / program.xi;
}

std::string_view to_string(SimulationLevel level) {
  switch (level) {
    case SimulationLevel::lab: return "lab";
    case SimulationLevel::interaction: return "interaction";
    case SimulationLevel::effective: return "effective";
  }
  return "unknown";
}

SimulationLevel simulation_level_from_string(std::string_view name) {
  if (name == "lab") return SimulationLevel::lab;
  if (name == "interaction") return SimulationLevel::interaction;
  if (name == "effective") return SimulationLevel::effective;
  throw std::invalid_argument("unknown simulation level '" + std::string(name) +
                              "' (expected lab, interaction or effective)");
}

GateSimulation simulate_gate(const SystemParams& params, const PulseProgram& program, SimulationLevel level,
                             const ComplexVector& psi0, const StepPolicy& policy) {
  params.validate();
  require_three_level_state(psi0);
  const ComplexVector target =
      ideal_holonomic_propagator(implemented_gate(program), program.xi, program.tau) * psi0;

  GateSimulation out;
  switch (level) {
    case SimulationLevel::effective: {
      const auto effective = effective_v_hamiltonian(params, program.drive);
      out.final_state = matrix_exp_unitary(effective.hamiltonian, program.tau) * psi0;
      break;
    }
    case SimulationLevel::interaction: {
      const HamiltonianFn<double> h = [&](double t) {
        return interaction_picture_hamiltonian(params, program.drive, t);
      };
      out.final_state =
          integrate_schrodinger<double>(h, psi0, {0.0, program.tau}, interaction_policy(params, program, policy))
              .back();
      break;
    }
    case SimulationLevel::lab: {
      if (!params.resonant(1e-9)) throw PhysicsGuardError("gate simulation assumes zero detuning (delta = 0)");
      StepPolicy p = policy;
      p.frequency_bound = std::max(p.frequency_bound, program.drive.max_carrier());
      const ComplexMatrix iso = three_level_isometry(params);
      const ComplexVector psi_lab = iso * psi0;
      const auto traj = integrate_schrodinger(product_split_hamiltonian(params, program.drive), psi_lab,
                                              TimeSpan<double>{0.0, program.tau}, p);
      out.final_state = iso.adjoint() * traj.back();
      out.leakage = std::max(0.0, traj.back().squaredNorm() - out.final_state.squaredNorm());
      break;
    }
  }
  out.fidelity = std::norm(target.dot(out.final_state));
  return out;
}

Eigen::Matrix2cd simulated_qubit_block(const SystemParams& params, const PulseProgram& program,
                                       SimulationLevel level, const StepPolicy& policy) {
  const auto from_plus = simulate_gate(params, program, level, basis_state(kPlus), policy).final_state;
  const auto from_minus = simulate_gate(params, program, level, basis_state(kMinus), policy).final_state;
  Eigen::Matrix2cd block;
  block << from_plus(kPlus), from_minus(kPlus), from_plus(kMinus), from_minus(kMinus);
  return block;
}

double gate_fidelity(const Eigen::Matrix2cd& actual, const Eigen::Matrix2cd& target) {
  const auto identity = Eigen::Matrix2cd::Identity();
  if ((actual.adjoint() * actual - identity).cwiseAbs().maxCoeff() > 1e-6 ||
      (target.adjoint() * target - identity).cwiseAbs().maxCoeff() > 1e-6) {
    throw std::invalid_argument("gate_fidelity expects unitary matrices");
  }
  return std::abs((target.adjoint() * actual).trace()) / 2.0;
}

}  // namespace polariton
