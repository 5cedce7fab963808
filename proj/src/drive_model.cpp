#include "polariton/drive_model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace polariton {

namespace {

void require_resonance(const SystemParams& params) {
  if (!params.resonant(1e-9)) {
    throw PhysicsGuardError(
        "the three-level drive model is derived for zero qubit-cavity detuning (delta = 0)");
  }
}

}  // namespace

bool DriveConfig::rwa_valid(const SystemParams& params) const noexcept {
  return std::max(amplitude1, amplitude2) <= params.g / 10.0;
}

double DriveConfig::max_carrier() const noexcept { return std::max(carrier1, carrier2); }

VSystemParams VSystemParams::from_amplitudes(double amplitude1, double amplitude2, double phi) {
  if (amplitude1 < 0.0 || amplitude2 < 0.0) throw std::invalid_argument("drive amplitudes must be non-negative");
  const double xi = std::hypot(amplitude1, amplitude2);
  if (!(xi > 0.0)) throw std::invalid_argument("effective Rabi frequency must be positive");
  return VSystemParams{xi, 2.0 * std::atan2(amplitude2, amplitude1), phi};
}

double VSystemParams::amplitude1() const { return xi * std::cos(theta / 2.0); }
double VSystemParams::amplitude2() const { return xi * std::sin(theta / 2.0); }

double drive_waveform(const DriveConfig& config, double t) {
  return config.amplitude1 * std::cos(config.carrier1 * t) +
         config.amplitude2 * std::cos(config.carrier2 * t + config.phase);
}

Carriers resonance_frequencies(const SystemParams& params) {
  require_resonance(params);
  const auto transitions = transition_frequencies(params, 0);
  return Carriers{transitions.minus, transitions.up};
}

ComplexMatrix three_level_energies(const SystemParams& params) {
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(kMinus, kMinus) = eigen_energy(params, 1, Branch::minus);
  h(kPlus, kPlus) = eigen_energy(params, 1, Branch::plus);
  return h;
}

ComplexMatrix three_level_drive_coupling() {
  ComplexMatrix c = ComplexMatrix::Zero(3, 3);
  c(kGround, kMinus) = c(kMinus, kGround) = -1.0;
  c(kGround, kPlus) = c(kPlus, kGround) = 1.0;
  return c;
}

ComplexMatrix lab_frame_hamiltonian(const SystemParams& params, const DriveConfig& config, double t) {
  require_resonance(params);
  return three_level_energies(params) + drive_waveform(config, t) * three_level_drive_coupling();
}

ComplexMatrix interaction_picture_hamiltonian(const SystemParams& params, const DriveConfig& config, double t) {
  require_resonance(params);
  const double f = drive_waveform(config, t);
  const std::complex<double> to_minus = std::polar(1.0, -eigen_energy(params, 1, Branch::minus) * t);
  const std::complex<double> to_plus = std::polar(1.0, -eigen_energy(params, 1, Branch::plus) * t);
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(kGround, kMinus) = -f * to_minus;
  h(kGround, kPlus) = f * to_plus;
  h(kMinus, kGround) = std::conj(h(kGround, kMinus));
  h(kPlus, kGround) = std::conj(h(kGround, kPlus));
  return h;
}

SplitHamiltonian<double> three_level_split_hamiltonian(const SystemParams& params, const DriveConfig& config) {
  require_resonance(params);
  return SplitHamiltonian<double>{
      Hermitian<double>(three_level_energies(params)),
      {DriveTerm<double>{[config](double t) { return drive_waveform(config, t); },
                         Hermitian<double>(three_level_drive_coupling())}}};
}

SplitHamiltonian<double> product_split_hamiltonian(const SystemParams& params, const DriveConfig& config) {
  const ComplexMatrix coupling = std::numbers::sqrt2 * qubit_sigma_x(params.n_max);
  return SplitHamiltonian<double>{
      Hermitian<double>(build_jc_hamiltonian(params)),
      {DriveTerm<double>{[config](double t) { return drive_waveform(config, t); }, Hermitian<double>(coupling)}}};
}

ComplexMatrix three_level_isometry(const SystemParams& params) {
  ComplexMatrix iso(product_dimension(params.n_max), 3);
  iso.col(kGround) = ground_state_vector(params);
  iso.col(kMinus) = dressed_state_vector(params, 1, Branch::minus);
  iso.col(kPlus) = dressed_state_vector(params, 1, Branch::plus);
  return iso;
}

ComplexMatrix v_system_hamiltonian(const VSystemParams& v) {
  const double half = v.xi / 2.0;
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(kGround, kPlus) = half * std::sin(v.theta / 2.0) * std::polar(1.0, v.phi);
  h(kGround, kMinus) = -half * std::cos(v.theta / 2.0);
  h(kPlus, kGround) = std::conj(h(kGround, kPlus));
  h(kMinus, kGround) = h(kGround, kMinus);
  return h;
}

EffectiveVSystem effective_v_hamiltonian(const SystemParams& params, const DriveConfig& config) {
  const auto v = VSystemParams::from_amplitudes(config.amplitude1, config.amplitude2, config.phase);
  const auto resonant = resonance_frequencies(params);
  const double detune1 = std::abs(config.carrier1 - resonant.lower);
  const double detune2 = std::abs(config.carrier2 - resonant.upper);
  if (detune1 > v.xi / 10.0 || detune2 > v.xi / 10.0) {
    std::ostringstream msg;
    msg << "drive carriers are off resonance (|w1 - w_{0,-}| = " << detune1 << ", |w2 - w_{0,up}| = " << detune2
        << " rad/s, limit xi/10 = " << v.xi / 10.0 << "); the effective V-system assumes exact resonance";
    throw PhysicsGuardError(msg.str());
  }
  return EffectiveVSystem{v_system_hamiltonian(v), v};
}

BrightDarkBasis bright_dark_basis(const VSystemParams& v) {
  const double s = std::sin(v.theta / 2.0);
  const double c = std::cos(v.theta / 2.0);
  BrightDarkBasis out;
  out.bright << s * std::polar(1.0, -v.phi), -c;
  out.dark << c, s * std::polar(1.0, v.phi);
  return out;
}

ComplexVector embed_qubit(const Eigen::Vector2cd& qubit) {
  ComplexVector v = ComplexVector::Zero(3);
  v(kPlus) = qubit(0);
  v(kMinus) = qubit(1);
  return v;
}

}  // namespace polariton
