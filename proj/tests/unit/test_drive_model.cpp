#include <doctest.h>

#include <random>

#include "../oracles.hpp"
#include "polariton/drive_model.hpp"
#include "polariton/units.hpp"

using namespace polariton;

namespace {

DriveConfig hadamard_drive(const SystemParams& p) {
  const double xi = p.g / 20;
  const auto c = resonance_frequencies(p);
  return DriveConfig{c.lower, c.upper, xi * std::cos(std::numbers::pi / 8), xi * std::sin(std::numbers::pi / 8), 0.0};
}

}  // namespace

TEST_CASE("drive waveform") {
  DriveConfig d{2.0, 3.0, 0.5, 0.25, 0.0};
  CHECK(drive_waveform(d, 0.0) == doctest::Approx(0.75));
  d.amplitude2 = 0.0;
  CHECK(drive_waveform(d, 0.4) == doctest::Approx(0.5 * std::cos(0.8)));
  d = DriveConfig{2.0, 3.0, 0.5, 0.25, 0.3};
  CHECK(drive_waveform(d, 1.1) == doctest::Approx(0.5 * std::cos(2.2) + 0.25 * std::cos(3.3 + 0.3)));
}

TEST_CASE("resonant carriers at the reference point") {
  const auto p = reference_system();
  const auto c = resonance_frequencies(p);
  CHECK(hz_from_angular(c.lower) == doctest::Approx(7.6e9).epsilon(1e-14));
  CHECK(hz_from_angular(c.upper) == doctest::Approx(8.4e9).epsilon(1e-14));
  CHECK(c.upper - c.lower == doctest::Approx(2 * p.g));
  const auto t = transition_frequencies(p, 0);
  CHECK(c.lower == t.minus);
  CHECK(c.upper == t.up);
  auto detuned = p;
  detuned.omega_a *= 1.001;
  CHECK_THROWS_AS(resonance_frequencies(detuned), PhysicsGuardError);
}

TEST_CASE("VSystemParams round-trip and limits") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> theta(0.0, std::numbers::pi), xi(1.0, 100.0);
  for (int k = 0; k < 50; ++k) {
    const VSystemParams v{xi(rng), theta(rng), 0.3};
    const auto back = VSystemParams::from_amplitudes(v.amplitude1(), v.amplitude2(), v.phi);
    CHECK(std::abs(back.xi - v.xi) <= 1e-12 * v.xi);
    CHECK(std::abs(back.theta - v.theta) <= 1e-12);
  }
  CHECK(VSystemParams::from_amplitudes(1.0, 0.0, 0.0).theta == 0.0);
  const auto equal = VSystemParams::from_amplitudes(2.0, 2.0, 0.0);
  CHECK(equal.theta == doctest::Approx(std::numbers::pi / 2));
  CHECK(equal.xi == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK_THROWS_AS(VSystemParams::from_amplitudes(-1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(VSystemParams::from_amplitudes(0.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("lab-frame Hamiltonian equals the product-space projection") {
  const auto p = reference_system();
  const auto d = hadamard_drive(p);
  const ComplexMatrix zero_drive = lab_frame_hamiltonian(p, DriveConfig{d.carrier1, d.carrier2, 0, 0, 0}, 1e-9);
  CHECK(zero_drive(kMinus, kMinus).real() == doctest::Approx(p.omega_r - p.g));
  CHECK(zero_drive(kPlus, kPlus).real() == doctest::Approx(p.omega_r + p.g));
  CHECK(std::abs(zero_drive(kGround, kPlus)) == 0.0);

  const ComplexMatrix at0 = lab_frame_hamiltonian(p, d, 0.0);
  CHECK(at0(kGround, kMinus).real() == doctest::Approx(-(d.amplitude1 + d.amplitude2)));
  CHECK(at0(kGround, kPlus).real() == doctest::Approx(d.amplitude1 + d.amplitude2));

  const oracle::Mat iso = oracle::resonant_isometry(p.n_max);
  const oracle::Mat jc = oracle::jc_matrix(p.omega_a, p.omega_r, p.g, p.n_max);
  const oracle::Mat sx = oracle::lowering(p.n_max) + oracle::lowering(p.n_max).adjoint();
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> time(0.0, 50e-9);
  for (int k = 0; k < 50; ++k) {
    const double t = time(rng);
    const oracle::Mat projected = iso.adjoint() * (jc + std::sqrt(2.0) * drive_waveform(d, t) * sx) * iso;
    CHECK((lab_frame_hamiltonian(p, d, t) - projected).norm() <= 1e-12 * projected.norm());
  }
}

TEST_CASE("interaction-picture Hamiltonian is the rotated drive") {
  const auto p = reference_system();
  const auto d = hadamard_drive(p);
  const ComplexMatrix h0 = three_level_energies(p);
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> time(0.0, 50e-9);
  for (int k = 0; k < 20; ++k) {
    const double t = time(rng);
    const ComplexMatrix drive = lab_frame_hamiltonian(p, d, t) - h0;
    // e^{iH0 t} V e^{-iH0 t} with H0 diagonal.
    ComplexMatrix rotated = drive;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) rotated(i, j) *= std::polar(1.0, (h0(i, i).real() - h0(j, j).real()) * t);
    const ComplexMatrix hi = interaction_picture_hamiltonian(p, d, t);
    CHECK((hi - rotated).norm() <= 1e-9 * (1.0 + drive.norm()));
    const Eigen::JacobiSVD<ComplexMatrix> a(hi), b(drive);
    CHECK((a.singularValues() - b.singularValues()).norm() <= 1e-9 * (1.0 + drive.norm()));
  }
  const ComplexMatrix at0 = interaction_picture_hamiltonian(p, d, 0.0);
  CHECK(at0(kGround, kMinus).real() == doctest::Approx(-drive_waveform(d, 0.0)));
}

TEST_CASE("effective V-system") {
  const auto p = reference_system();
  auto d = hadamard_drive(p);
  const auto eff = effective_v_hamiltonian(p, d);
  CHECK(eff.v.theta == doctest::Approx(std::numbers::pi / 4).epsilon(1e-12));
  CHECK(d.amplitude1 / d.amplitude2 == doctest::Approx(2.41).epsilon(0.01));
  CHECK(d.amplitude1 / eff.v.xi == doctest::Approx(0.924).epsilon(0.001));
  CHECK((eff.hamiltonian - eff.hamiltonian.adjoint()).norm() == 0.0);

  auto single = d;
  single.amplitude2 = 0.0;
  const auto one = effective_v_hamiltonian(p, single);
  CHECK(one.v.theta == 0.0);
  CHECK(std::abs(one.hamiltonian(kGround, kPlus)) == 0.0);

  d.carrier1 += eff.v.xi;
  CHECK_THROWS_AS(effective_v_hamiltonian(p, d), PhysicsGuardError);
}

TEST_CASE("bright and dark states") {
  const auto zero = bright_dark_basis(VSystemParams{1.0, 0.0, 0.0});
  CHECK((zero.bright - Eigen::Vector2cd(0, -1)).norm() < 1e-15);
  CHECK((zero.dark - Eigen::Vector2cd(1, 0)).norm() < 1e-15);
  const auto pi = bright_dark_basis(VSystemParams{1.0, std::numbers::pi, 0.0});
  CHECK((pi.bright - Eigen::Vector2cd(1, 0)).norm() < 1e-15);
  CHECK((pi.dark - Eigen::Vector2cd(0, 1)).norm() < 1e-15);

  std::mt19937 rng(21);
  std::uniform_real_distribution<double> theta(0.0, std::numbers::pi), phi(0.0, 2 * std::numbers::pi);
  for (int k = 0; k < 50; ++k) {
    const VSystemParams v{3.0, theta(rng), phi(rng)};
    const auto bd = bright_dark_basis(v);
    CHECK(std::abs(bd.bright.dot(bd.dark)) < 1e-15);
    CHECK(bd.bright.norm() == doctest::Approx(1.0));
    const ComplexVector dark = embed_qubit(bd.dark);
    CHECK((v_system_hamiltonian(v) * dark).norm() < 1e-15);
  }
  const auto h = bright_dark_basis(VSystemParams{1.0, std::numbers::pi / 4, 0.0});
  CHECK(h.bright(0).real() == doctest::Approx(std::sin(std::numbers::pi / 8)));
  CHECK(h.bright(1).real() == doctest::Approx(-std::cos(std::numbers::pi / 8)));
  CHECK(h.dark(0).real() == doctest::Approx(std::cos(std::numbers::pi / 8)));
  CHECK(h.dark(1).real() == doctest::Approx(std::sin(std::numbers::pi / 8)));
}

TEST_CASE("RWA validity flag") {
  const auto p = reference_system();
  auto d = hadamard_drive(p);
  CHECK(d.rwa_valid(p));
  d.amplitude1 = p.g / 5;
  CHECK_FALSE(d.rwa_valid(p));
}
