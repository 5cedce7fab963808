#pragma once

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "polariton/numerics.hpp"

namespace polariton {

enum class Branch { minus, plus };

std::string_view to_string(Branch b);

/// Physical constants of the qubit–cavity system, all angular (rad/s).
struct SystemParams {
  double omega_a = 0.0;  // qubit
  double omega_r = 0.0;  // cavity
  double g = 0.0;        // exchange coupling
  int n_max = 5;         // photon-number truncation of the product basis

  /// ω_a − ω_r. This is the sign under which the dressed-state formulas are
  /// eigenpairs of H_JC (|−,n⟩ → |0,n⟩ as the qubit is pushed far above).
  double detuning() const noexcept { return omega_a - omega_r; }

  bool resonant(double rel_tol = 1e-12) const noexcept;

  /// Throws std::invalid_argument on non-positive frequencies, g ≥ ω_r, or n_max < 2.
  void validate() const;

  static SystemParams resonant_with(double omega_r, double g, int n_max = 5);
};

/// Paper operating point: ω_r = 2π × 8 GHz, δ = 0, g = ω_r/20.
SystemParams reference_system(int n_max = 5);

/// Product-basis index of |q⟩ ⊗ |n⟩_r (qubit major).
Eigen::Index product_index(int qubit, int photons, int n_max);
Eigen::Index product_dimension(int n_max);

/// H_JC = ω_a|1⟩⟨1| + ω_r a†a + g(aσ⁺ + a†σ⁻) on the truncated product basis.
ComplexMatrix build_jc_hamiltonian(const SystemParams& params);

/// Qubit and cavity operators on the same product basis.
ComplexMatrix cavity_annihilation(int n_max);
ComplexMatrix qubit_lowering(int n_max);  // σ⁻ = |0⟩⟨1|
ComplexMatrix qubit_sigma_x(int n_max);
ComplexMatrix qubit_sigma_z(int n_max);   // |1⟩⟨1| − |0⟩⟨0|

struct DressedLevel {
  int n = 0;
  Branch branch = Branch::minus;
  double energy = 0.0;        // rad/s
  double mixing_angle = 0.0;  // α_n, radians
};

/// Coefficients of a dressed state on its two product-basis components.
struct DressedAmplitudes {
  double photon;  // on |0, n⟩
  double qubit;   // on |1, n−1⟩
};

/// α_n = atan2(2g√n, δ)/2, in (0, π/2) for g > 0 and exactly π/4 at resonance.
double mixing_angle(const SystemParams& params, int n);

/// E_{n,±} = nω_r + (δ ± √(δ² + 4ng²))/2.
double eigen_energy(const SystemParams& params, int n, Branch branch);

DressedLevel dressed_level(const SystemParams& params, int n, Branch branch);

/// |−,n⟩ = cos α|0,n⟩ − sin α|1,n−1⟩, |+,n⟩ = sin α|0,n⟩ + cos α|1,n−1⟩.
DressedAmplitudes dressed_state(const SystemParams& params, int n, Branch branch);

/// The dressed state embedded in the product basis.
ComplexVector dressed_state_vector(const SystemParams& params, int n, Branch branch);

/// |G⟩ = |0,0⟩.
ComplexVector ground_state_vector(const SystemParams& params);

struct TransitionSet {
  int n = 0;
  double minus = 0.0;  // ω_{n,−}
  double plus = 0.0;   // ω_{n,+}
  double up = 0.0;     // ω_{n,↗}, |−,n⟩ → |+,n+1⟩
  double down = 0.0;   // ω_{n,↘}, |+,n⟩ → |−,n+1⟩
};

TransitionSet transition_frequencies(const SystemParams& params, int n);

/// Both branches for n = 1..n_max, ordered by n then branch (minus first).
std::vector<DressedLevel> spectrum_table(const SystemParams& params);

/// CSV with header n,branch,energy_Hz_over_2pi,alpha_rad.
void write_spectrum_csv(std::ostream& os, const std::vector<DressedLevel>& levels);

}  // namespace polariton
