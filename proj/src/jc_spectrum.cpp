#include "polariton/jc_spectrum.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "polariton/csv.hpp"
#include "polariton/units.hpp"

namespace polariton {

std::string_view to_string(Branch b) { return b == Branch::minus ? "minus" : "plus"; }

bool SystemParams::resonant(double rel_tol) const noexcept {
  return std::abs(detuning()) <= rel_tol * omega_r;
}

void SystemParams::validate() const {
  if (!(omega_a > 0.0) || !(omega_r > 0.0) || !(g > 0.0)) {
    throw std::invalid_argument("omega_a, omega_r and g must be positive");
  }
  if (!(g < omega_r)) throw std::invalid_argument("coupling g must be below omega_r");
  if (n_max < 2) {
    throw std::invalid_argument("n_max must be at least 2 (second-order sums reach n = 2)");
  }
}

SystemParams SystemParams::resonant_with(double omega_r, double g, int n_max) {
  return SystemParams{omega_r, omega_r, g, n_max};
}

SystemParams reference_system(int n_max) {
  const double omega_r = angular_from_hz(8e9);
  return SystemParams::resonant_with(omega_r, omega_r / 20.0, n_max);
}

Eigen::Index product_dimension(int n_max) { return 2 * (n_max + 1); }

Eigen::Index product_index(int qubit, int photons, int n_max) {
  if (qubit < 0 || qubit > 1 || photons < 0 || photons > n_max) {
    throw std::out_of_range("product basis label outside the truncated space");
  }
  return qubit * (n_max + 1) + photons;
}

ComplexMatrix build_jc_hamiltonian(const SystemParams& params) {
  params.validate();
  const int n_max = params.n_max;
  ComplexMatrix h = ComplexMatrix::Zero(product_dimension(n_max), product_dimension(n_max));
  for (int q = 0; q <= 1; ++q) {
    for (int n = 0; n <= n_max; ++n) {
      h(product_index(q, n, n_max), product_index(q, n, n_max)) = params.omega_a * q + params.omega_r * n;
    }
  }
  // g(aσ⁺ + a†σ⁻) couples |0,n⟩ ↔ |1,n−1⟩ with strength g√n.
  for (int n = 1; n <= n_max; ++n) {
    const auto i = product_index(0, n, n_max);
    const auto j = product_index(1, n - 1, n_max);
    h(i, j) = h(j, i) = params.g * std::sqrt(static_cast<double>(n));
  }
  return h;
}

ComplexMatrix cavity_annihilation(int n_max) {
  ComplexMatrix a = ComplexMatrix::Zero(product_dimension(n_max), product_dimension(n_max));
  for (int q = 0; q <= 1; ++q) {
    for (int n = 1; n <= n_max; ++n) {
      a(product_index(q, n - 1, n_max), product_index(q, n, n_max)) = std::sqrt(static_cast<double>(n));
    }
  }
  return a;
}

ComplexMatrix qubit_lowering(int n_max) {
  ComplexMatrix s = ComplexMatrix::Zero(product_dimension(n_max), product_dimension(n_max));
  for (int n = 0; n <= n_max; ++n) s(product_index(0, n, n_max), product_index(1, n, n_max)) = 1.0;
  return s;
}

ComplexMatrix qubit_sigma_x(int n_max) {
  const ComplexMatrix lower = qubit_lowering(n_max);
  return lower + lower.adjoint();
}

ComplexMatrix qubit_sigma_z(int n_max) {
  ComplexMatrix z = ComplexMatrix::Zero(product_dimension(n_max), product_dimension(n_max));
  for (int n = 0; n <= n_max; ++n) {
    z(product_index(0, n, n_max), product_index(0, n, n_max)) = -1.0;
    z(product_index(1, n, n_max), product_index(1, n, n_max)) = 1.0;
  }
  return z;
}

double mixing_angle(const SystemParams& params, int n) {
  if (n < 1) throw std::invalid_argument("mixing angle is defined for n >= 1");
  return 0.5 * std::atan2(2.0 * params.g * std::sqrt(static_cast<double>(n)), params.detuning());
}

double eigen_energy(const SystemParams& params, int n, Branch branch) {
  if (n < 1) throw std::invalid_argument("dressed energies are defined for n >= 1");
  const double delta = params.detuning();
  const double root = std::sqrt(delta * delta + 4.0 * n * params.g * params.g);
  const double sign = branch == Branch::plus ? 1.0 : -1.0;
  return n * params.omega_r + 0.5 * (delta + sign * root);
}

DressedLevel dressed_level(const SystemParams& params, int n, Branch branch) {
  return DressedLevel{n, branch, eigen_energy(params, n, branch), mixing_angle(params, n)};
}

DressedAmplitudes dressed_state(const SystemParams& params, int n, Branch branch) {
  if (n < 1) {
    throw std::invalid_argument("n = 0 is the ground state |G> = |0,0>, not a dressed doublet");
  }
  if (n > params.n_max) throw std::invalid_argument("n exceeds the photon truncation n_max");
  const double alpha = mixing_angle(params, n);
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  return branch == Branch::minus ? DressedAmplitudes{c, -s} : DressedAmplitudes{s, c};
}

ComplexVector dressed_state_vector(const SystemParams& params, int n, Branch branch) {
  const auto amp = dressed_state(params, n, branch);
  ComplexVector v = ComplexVector::Zero(product_dimension(params.n_max));
  v(product_index(0, n, params.n_max)) = amp.photon;
  v(product_index(1, n - 1, params.n_max)) = amp.qubit;
  return v;
}

ComplexVector ground_state_vector(const SystemParams& params) {
  ComplexVector v = ComplexVector::Zero(product_dimension(params.n_max));
  v(product_index(0, 0, params.n_max)) = 1.0;
  return v;
}

TransitionSet transition_frequencies(const SystemParams& params, int n) {
  if (n < 0) throw std::invalid_argument("ladder index must be non-negative");
  if (n + 1 > params.n_max) throw std::invalid_argument("n + 1 exceeds the photon truncation n_max");
  const double delta = params.detuning();
  const double g2 = params.g * params.g;
  const double lower = std::sqrt(delta * delta + 4.0 * n * g2);
  const double upper = std::sqrt(delta * delta + 4.0 * (n + 1) * g2);
  const double wr = params.omega_r;
  return TransitionSet{n, wr - 0.5 * (upper - lower), wr + 0.5 * (upper - lower),
                       wr + 0.5 * (upper + lower), wr - 0.5 * (upper + lower)};
}

std::vector<DressedLevel> spectrum_table(const SystemParams& params) {
  params.validate();
  std::vector<DressedLevel> out;
  for (int n = 1; n <= params.n_max; ++n) {
    out.push_back(dressed_level(params, n, Branch::minus));
    out.push_back(dressed_level(params, n, Branch::plus));
  }
  return out;
}

void write_spectrum_csv(std::ostream& os, const std::vector<DressedLevel>& levels) {
  write_csv_preamble(os, "spectrum", {"n", "branch", "energy_Hz_over_2pi", "alpha_rad"});
  for (const auto& level : levels) {
    os << level.n << ',' << to_string(level.branch) << ',' << format_number(hz_from_angular(level.energy))
       << ',' << format_number(level.mixing_angle) << '\n';
  }
}

}  // namespace polariton
