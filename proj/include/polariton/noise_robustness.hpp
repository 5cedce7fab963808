#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "polariton/jc_spectrum.hpp"

namespace polariton {

/// Which bare-qubit operator the static noise couples through.
enum class NoiseAxis {
  transverse,    // A σˣ
  longitudinal,  // A σᶻ
};

struct NoiseSpec {
  double a_x = 0.0;  // rad/s

  /// A_x < g/10.
  bool perturbative(const SystemParams& params) const noexcept { return a_x < params.g / 10.0; }
};

enum class ShiftMethod { series, closed_form, approx, oracle };

std::string_view to_string(ShiftMethod m);

struct ShiftReport {
  double shift_minus = 0.0;  // δE_{1,−}, rad/s
  double shift_plus = 0.0;   // δE_{1,+}, rad/s
  double splitting_correction = 0.0;  // |δE_{1,+} − δE_{1,−}|
  ShiftMethod method = ShiftMethod::series;
};

/// Second-order Rayleigh–Schrödinger shift of |±,1⟩ under A·O, O = σˣ or σᶻ.
/// Intermediate states are |G⟩, the other n = 1 branch and both n = 2 levels;
/// σˣ has no elements beyond n = 2. The first-order term is evaluated too and
/// vanishes identically for σˣ.
double shift_series(const SystemParams& params, const NoiseSpec& noise, Branch branch,
                    NoiseAxis axis = NoiseAxis::transverse);

/// Resonant closed forms in ω_r and g. Throws PhysicsGuardError off resonance.
double shift_closed_form(const SystemParams& params, const NoiseSpec& noise, Branch branch);

/// δE_± ≈ ∓A²g/ω_a², valid for g ≪ ω_r.
double shift_approx(const SystemParams& params, const NoiseSpec& noise, Branch branch);

/// g/ω_r below 0.1, where shift_approx is meaningful.
bool weak_coupling(const SystemParams& params) noexcept;

struct OracleShifts {
  double minus = 0.0;
  double plus = 0.0;
  double min_overlap = 1.0;  // smallest |⟨eigvec|±,1⟩|² used for branch matching
};

/// Exact diagonalization of H_JC + A·O in the full truncated product space.
/// Branches are matched by maximal overlap with the unperturbed |±,1⟩, and
/// shifts are measured from the closed-form E_{1,±}. Requires n_max ≥ 4;
/// throws PhysicsGuardError when the best overlap drops below 0.9.
OracleShifts shift_oracle(const SystemParams& params, const NoiseSpec& noise,
                          NoiseAxis axis = NoiseAxis::transverse);

ShiftReport shift_report(const SystemParams& params, const NoiseSpec& noise, ShiftMethod method);

/// 2π × {1, 2, 5, 10, 20} MHz.
std::vector<double> default_noise_amplitudes();

struct NoiseScanRow {
  double a_x = 0.0;
  std::string_view method;  // "series", ..., or "oracle_longitudinal"
  ShiftReport report;
};

/// Every method at every amplitude (closed form only at resonance), plus the
/// longitudinal oracle. Amplitudes are evaluated concurrently; row order is
/// amplitude-major in input order.
std::vector<NoiseScanRow> noise_scan(const SystemParams& params, const std::vector<double>& amplitudes);

/// Header a_x_Hz_over_2pi,method,shift_minus,shift_plus,splitting_correction;
/// shifts are written in Hz as well.
void write_noise_csv(std::ostream& os, const std::vector<NoiseScanRow>& rows);

}  // namespace polariton
