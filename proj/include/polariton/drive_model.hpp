#pragma once

#include "polariton/jc_spectrum.hpp"

namespace polariton {

// Ordering of the three-level basis {|G⟩, |−⟩, |+⟩} with |±⟩ ≡ |±,1⟩.
inline constexpr Eigen::Index kGround = 0;
inline constexpr Eigen::Index kMinus = 1;
inline constexpr Eigen::Index kPlus = 2;

/// Two-tone drive f(t) = Ω₁cos(ω₁t) + Ω₂cos(ω₂t + φ) on the transmon.
struct DriveConfig {
  double carrier1 = 0.0;    // ω₁, rad/s
  double carrier2 = 0.0;    // ω₂, rad/s
  double amplitude1 = 0.0;  // Ω₁, rad/s
  double amplitude2 = 0.0;  // Ω₂, rad/s
  double phase = 0.0;       // φ, rad

  /// max(Ω₁, Ω₂) ≤ g/10.
  bool rwa_valid(const SystemParams& params) const noexcept;
  double max_carrier() const noexcept;
};

/// Renormalized V-system parameters: ξ = √(Ω₁² + Ω₂²), tan(θ/2) = Ω₂/Ω₁.
struct VSystemParams {
  double xi = 0.0;
  double theta = 0.0;
  double phi = 0.0;

  static VSystemParams from_amplitudes(double amplitude1, double amplitude2, double phi);
  double amplitude1() const;  // ξcos(θ/2)
  double amplitude2() const;  // ξsin(θ/2)
};

/// Bright and dark states as amplitudes on {|+⟩, |−⟩}.
struct BrightDarkBasis {
  Eigen::Vector2cd bright;
  Eigen::Vector2cd dark;
};

double drive_waveform(const DriveConfig& config, double t);

struct Carriers {
  double lower;  // ω_{0,−}
  double upper;  // ω_{0,↗}
};

/// Carriers resonant with |G⟩ → |−⟩ and |G⟩ → |+⟩. Requires δ = 0.
Carriers resonance_frequencies(const SystemParams& params);

/// diag(0, E_{1,−}, E_{1,+}).
ComplexMatrix three_level_energies(const SystemParams& params);

/// Drive pattern in the three-level basis: ⟨G|·|−⟩ = −1, ⟨G|·|+⟩ = +1.
ComplexMatrix three_level_drive_coupling();

/// Lab-frame H₁(t) = diag(0, E_{1,−}, E_{1,+}) + f(t)·coupling. Requires δ = 0.
ComplexMatrix lab_frame_hamiltonian(const SystemParams& params, const DriveConfig& config, double t);

/// e^{iH_JC t}(H₁ − H_JC)e^{−iH_JC t} on the three-level basis, without any
/// rotating-wave approximation.
ComplexMatrix interaction_picture_hamiltonian(const SystemParams& params, const DriveConfig& config, double t);

/// H₁(t) as a stationary part plus one drive channel, for the frame integrator.
SplitHamiltonian<double> three_level_split_hamiltonian(const SystemParams& params, const DriveConfig& config);

/// H_JC + √2 f(t) σˣ on the full truncated product space.
SplitHamiltonian<double> product_split_hamiltonian(const SystemParams& params, const DriveConfig& config);

/// Columns |G⟩, |−,1⟩, |+,1⟩ embedded in the product basis.
ComplexMatrix three_level_isometry(const SystemParams& params);

/// H₁v = (ξ/2)(sin(θ/2)e^{iφ}|G⟩⟨+| − cos(θ/2)|G⟩⟨−| + h.c.).
ComplexMatrix v_system_hamiltonian(const VSystemParams& v);

struct EffectiveVSystem {
  ComplexMatrix hamiltonian;
  VSystemParams v;
};

/// Both rotating-wave steps applied. Throws PhysicsGuardError when a carrier
/// is detuned from its transition by more than ξ/10.
EffectiveVSystem effective_v_hamiltonian(const SystemParams& params, const DriveConfig& config);

BrightDarkBasis bright_dark_basis(const VSystemParams& v);

/// Qubit amplitudes over {|+⟩, |−⟩} placed into the three-level basis.
ComplexVector embed_qubit(const Eigen::Vector2cd& qubit);

}  // namespace polariton
