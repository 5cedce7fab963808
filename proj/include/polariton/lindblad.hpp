#pragma once

#include <iosfwd>
#include <vector>

#include "polariton/holonomic_gates.hpp"

namespace polariton {

/// Dissipation rates (rad/s) entering
///   ρ̇ = i[ρ, H] + (κ/2)L(a) + (Γ₁/2)L(σ⁻) + (Γ₂/2)L(σᶻ),
///   L(A) = 2AρA† − A†Aρ − ρA†A.
struct DecoherenceRates {
  double kappa = 0.0;   // cavity decay
  double gamma1 = 0.0;  // qubit decay
  double gamma2 = 0.0;  // qubit dephasing

  void validate() const;
  bool any() const noexcept { return kappa > 0.0 || gamma1 > 0.0 || gamma2 > 0.0; }

  /// All three set to the common value 2π × 8 kHz.
  static DecoherenceRates reference() noexcept;
  /// κ = 2π × 7 kHz, Γ₁ = 2π × 8 kHz, Γ₂ = 2π × 3.5 kHz.
  static DecoherenceRates measured() noexcept;
};

enum class BasisTag { three_level, product };
enum class FrameTag { lab, interaction };

struct DensityMatrix {
  ComplexMatrix rho;
  BasisTag basis = BasisTag::three_level;
  FrameTag frame = FrameTag::lab;
};

struct DensityDiagnostics {
  double hermiticity = 0.0;   // ‖ρ − ρ†‖_F
  double trace_error = 0.0;   // |Tr ρ − 1|
  double min_eigenvalue = 0.0;
};

DensityDiagnostics diagnose(const ComplexMatrix& rho);

/// Checks Hermiticity (1e-10), unit trace (1e-8) and eigenvalues ≥ −1e-8.
DensityMatrix make_density_matrix(ComplexMatrix rho, BasisTag basis, FrameTag frame);
DensityMatrix pure_density(const ComplexVector& psi, BasisTag basis, FrameTag frame);

struct CollapseOperators {
  ComplexMatrix cavity;           // a
  ComplexMatrix qubit_decay;      // σ⁻
  ComplexMatrix qubit_dephasing;  // σᶻ
};

/// P a P, P σ⁻ P, P σᶻ P on {|G⟩, |−⟩, |+⟩}. Closed forms at resonance; the
/// projection is computed numerically from the dressed states otherwise.
CollapseOperators projected_collapse_operators(const SystemParams& params);

/// a, σ⁻, σᶻ on the truncated product basis.
CollapseOperators product_collapse_operators(const SystemParams& params);

/// Right-hand side of the master equation for a fixed Hamiltonian.
ComplexMatrix lindblad_rhs(const ComplexMatrix& hamiltonian, const ComplexMatrix& rho,
                           const DecoherenceRates& rates, const CollapseOperators& ops);

struct MasterTrajectory {
  Trajectory<ComplexMatrix> states;
  BasisTag basis = BasisTag::three_level;
  FrameTag frame = FrameTag::lab;
  double dt = 0.0;
  double max_trace_error = 0.0;
  double min_eigenvalue = 0.0;  // smallest eigenvalue over all samples
};

/// Lab-frame RK4. Aborts with NumericalError if a sample has an eigenvalue
/// below −1e-6.
MasterTrajectory evolve_master(const HamiltonianFn<double>& hamiltonian, const DensityMatrix& rho0,
                               const DecoherenceRates& rates, const CollapseOperators& ops, TimeSpan<double> span,
                               const StepPolicy& policy);

/// H0 propagated exactly, RK4 on the rest. rho0 is the lab state at
/// span.start; returned states are ρ_I(t) = e^{iH0t}ρ(t)e^{−iH0t}.
MasterTrajectory evolve_master(const SplitHamiltonian<double>& hamiltonian, const DensityMatrix& rho0,
                               const DecoherenceRates& rates, const CollapseOperators& ops, TimeSpan<double> span,
                               const StepPolicy& policy);

/// ⟨ψ|ρ|ψ⟩ / ⟨ψ|ψ⟩.
double state_fidelity(const ComplexMatrix& rho, const ComplexVector& psi);

struct FidelityCurve {
  std::vector<double> abscissa;  // ξt/2π
  std::vector<double> fidelity;
  bool decoherence_on = false;
};

struct HadamardOptions {
  BasisTag basis = BasisTag::three_level;
  FrameTag fidelity_frame = FrameTag::interaction;
  StepPolicy policy{};  // samples is overridden by the resolution
};

struct HadamardExperiment {
  FidelityCurve with_decoherence;
  FidelityCurve without_decoherence;
  double dt = 0.0;
  double max_trace_error = 0.0;
  double min_eigenvalue = 0.0;
};

/// Hadamard pulse (θ = π/4, φ = 0, area 2π) from |+⟩, scored against
/// (|+⟩ + |−⟩)/√2 at `resolution` equally spaced points of ξt/2π ∈ [0, 1].
/// Both curves are integrated concurrently.
HadamardExperiment hadamard_experiment(const SystemParams& params, const DecoherenceRates& rates, double xi,
                                       std::size_t resolution = 201, const HadamardOptions& options = {});

/// Header xi_t_over_2pi,fidelity_with_decoherence,fidelity_without.
void write_fidelity_csv(std::ostream& os, const HadamardExperiment& experiment);

}  // namespace polariton
