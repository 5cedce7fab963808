#pragma once

#include <string_view>

#include "polariton/drive_model.hpp"

namespace polariton {

/// Target of U(θ,φ) = [[cosθ, sinθ e^{−iφ}], [sinθ e^{iφ}, −cosθ]] on {|+⟩, |−⟩}.
struct GateSpec {
  double theta = 0.0;  // [0, π]
  double phi = 0.0;    // [0, 2π)

  void validate() const;
  static GateSpec hadamard() noexcept;
};

Eigen::Matrix2cd gate_matrix(const GateSpec& spec);

/// A constant-amplitude two-tone pulse with area ξτ = 2π.
struct PulseProgram {
  DriveConfig drive;
  double tau = 0.0;  // s
  double xi = 0.0;   // rad/s
};

/// Resonant carriers, Ω₁ = ξcos(θ/2), Ω₂ = ξsin(θ/2), drive phase φ and
/// τ = 2π/ξ. Throws PhysicsGuardError unless ξ ≤ g/10.
PulseProgram synthesize_pulse(const SystemParams& params, const GateSpec& spec, double xi);

/// The (θ, φ) a program's amplitudes and phase encode.
GateSpec implemented_gate(const PulseProgram& program);

/// exp(−iH₁v τ) for τ = 2π/ξ. Throws PhysicsGuardError for any other area.
ComplexMatrix ideal_holonomic_propagator(const GateSpec& spec, double xi);
ComplexMatrix ideal_holonomic_propagator(const GateSpec& spec, double xi, double tau);

/// The {|+⟩, |−⟩} block of a three-level operator, ordered (+, −).
Eigen::Matrix2cd qubit_block(const ComplexMatrix& three_level);

struct CyclicCheck {
  double area = 0.0;  // ξτ, rad
  bool cyclic = false;  // |ξτ − 2π| ≤ 1e-9
};

CyclicCheck cyclic_check(const PulseProgram& program);

/// max |⟨ψ_a(t)|H₁v|ψ_b(t)⟩| / ξ over n_samples times in [0, τ] and
/// a, b ∈ {+, −}, with ψ_± evolved exactly under H₁v.
double parallel_transport_check(const GateSpec& spec, double xi, std::size_t n_samples);

/// The same quantity with ψ_± evolved under the interaction-picture
/// Hamiltonian (no rotating-wave approximation) and the matrix element taken
/// with that Hamiltonian. Nonzero by the size of the dropped terms.
double parallel_transport_residual(const SystemParams& params, const PulseProgram& program,
                                   std::size_t n_samples, const StepPolicy& policy = {});

enum class SimulationLevel {
  lab,          // H_JC + √2 f(t)σˣ on the full product space
  interaction,  // three-level interaction-picture Hamiltonian, no RWA
  effective,    // constant H₁v
};

std::string_view to_string(SimulationLevel level);
SimulationLevel simulation_level_from_string(std::string_view name);

struct GateSimulation {
  ComplexVector final_state;  // three-level amplitudes, interaction picture
  double leakage = 0.0;       // population outside span{|G⟩, |−⟩, |+⟩}
  double fidelity = 0.0;      // |⟨U_ideal ψ₀ | ψ(τ)⟩|²
};

/// Runs one pulse from a normalized three-level state psi0. Lab-level states
/// are taken to the interaction picture e^{iH_JC τ} before projection.
GateSimulation simulate_gate(const SystemParams& params, const PulseProgram& program, SimulationLevel level,
                             const ComplexVector& psi0, const StepPolicy& policy = {});

/// Projected {|+⟩, |−⟩} block of the simulated propagator.
Eigen::Matrix2cd simulated_qubit_block(const SystemParams& params, const PulseProgram& program,
                                       SimulationLevel level, const StepPolicy& policy = {});

/// |Tr(U_target† U_actual)|/2, insensitive to global phase. Both inputs must
/// be unitary within 1e-6.
double gate_fidelity(const Eigen::Matrix2cd& actual, const Eigen::Matrix2cd& target);

}  // namespace polariton
