#include "polariton/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "polariton/csv.hpp"
#include "polariton/units.hpp"

namespace polariton {

namespace {

// (κ/2)L(A) with L(A) = 2AρA† − A†Aρ − ρA†A, accumulated into `out`.
void add_dissipator(ComplexMatrix& out, double rate, const ComplexMatrix& a, const ComplexMatrix& rho) {
  if (rate == 0.0) return;
  const ComplexMatrix ad = a.adjoint();
  const ComplexMatrix ada = ad * a;
  out += (rate / 2.0) * (2.0 * a * rho * ad - ada * rho - rho * ada);
}

void require_dims(const ComplexMatrix& h, const ComplexMatrix& rho, const CollapseOperators& ops) {
  const auto n = rho.rows();
  auto bad = [n](const ComplexMatrix& m) { return m.rows() != n || m.cols() != n; };
  if (rho.cols() != n || bad(h) || bad(ops.cavity) || bad(ops.qubit_decay) || bad(ops.qubit_dephasing)) {
    throw std::invalid_argument("Hamiltonian, density matrix and collapse operators must share one dimension");
  }
}

void dissipate(ComplexMatrix& out, const ComplexMatrix& rho, const DecoherenceRates& rates,
               const CollapseOperators& ops) {
  add_dissipator(out, rates.kappa, ops.cavity, rho);
  add_dissipator(out, rates.gamma1, ops.qubit_decay, rho);
  add_dissipator(out, rates.gamma2, ops.qubit_dephasing, rho);
}

// Records diagnostics on every stored sample and enforces the positivity guard.
void audit(MasterTrajectory& traj) {
  traj.min_eigenvalue = 1.0;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const auto d = diagnose(traj.states.state(i));
    traj.max_trace_error = std::max(traj.max_trace_error, d.trace_error);
    traj.min_eigenvalue = std::min(traj.min_eigenvalue, d.min_eigenvalue);
    if (d.min_eigenvalue < -1e-6) {
      std::ostringstream msg;
      msg << "density matrix lost positivity at t = " << traj.states.time(i)
          << " s (min eigenvalue " << d.min_eigenvalue << ") with dt = " << traj.dt << " s; reduce the step";
      throw NumericalError(msg.str());
    }
  }
}

void require_valid_start(const DensityMatrix& rho0) {
  const auto d = diagnose(rho0.rho);
  if (d.hermiticity > 1e-10 || d.trace_error > 1e-8 || d.min_eigenvalue < -1e-8) {
    throw std::invalid_argument("initial density matrix violates Hermiticity, trace or positivity");
  }
}

}  // namespace

void DecoherenceRates::validate() const {
  if (kappa < 0.0 || gamma1 < 0.0 || gamma2 < 0.0) throw std::invalid_argument("decoherence rates must be >= 0");
}

DecoherenceRates DecoherenceRates::reference() noexcept {
  const double rate = angular_from_hz(8e3);
  return DecoherenceRates{rate, rate, rate};
}

DecoherenceRates DecoherenceRates::measured() noexcept {
  return DecoherenceRates{angular_from_hz(7e3), angular_from_hz(8e3), angular_from_hz(3.5e3)};
}

DensityDiagnostics diagnose(const ComplexMatrix& rho) {
  DensityDiagnostics d;
  d.hermiticity = hermiticity_defect(rho);
  d.trace_error = std::abs(rho.trace() - 1.0);
  const ComplexMatrix symmetric = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(symmetric, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = solver.eigenvalues().minCoeff();
  return d;
}

DensityMatrix make_density_matrix(ComplexMatrix rho, BasisTag basis, FrameTag frame) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("density matrix must be square");
  DensityMatrix out{std::move(rho), basis, frame};
  require_valid_start(out);
  return out;
}

DensityMatrix pure_density(const ComplexVector& psi, BasisTag basis, FrameTag frame) {
  return make_density_matrix(psi * psi.adjoint(), basis, frame);
}

CollapseOperators projected_collapse_operators(const SystemParams& params) {
  if (!params.resonant(1e-9)) {
    const ComplexMatrix iso = three_level_isometry(params);
    const auto full = product_collapse_operators(params);
    return CollapseOperators{iso.adjoint() * full.cavity * iso, iso.adjoint() * full.qubit_decay * iso,
                             iso.adjoint() * full.qubit_dephasing * iso};
  }
  const double r = std::numbers::sqrt2 / 2.0;
  CollapseOperators ops{ComplexMatrix::Zero(3, 3), ComplexMatrix::Zero(3, 3), ComplexMatrix::Zero(3, 3)};
  ops.cavity(kGround, kMinus) = r;
  ops.cavity(kGround, kPlus) = r;
  ops.qubit_decay(kGround, kMinus) = -r;
  ops.qubit_decay(kGround, kPlus) = r;
  ops.qubit_dephasing(kGround, kGround) = -1.0;
  ops.qubit_dephasing(kPlus, kMinus) = -1.0;
  ops.qubit_dephasing(kMinus, kPlus) = -1.0;
  return ops;
}

CollapseOperators product_collapse_operators(const SystemParams& params) {
  return CollapseOperators{cavity_annihilation(params.n_max), qubit_lowering(params.n_max),
                           qubit_sigma_z(params.n_max)};
}

ComplexMatrix lindblad_rhs(const ComplexMatrix& hamiltonian, const ComplexMatrix& rho,
                           const DecoherenceRates& rates, const CollapseOperators& ops) {
  require_dims(hamiltonian, rho, ops);
  const std::complex<double> i(0.0, 1.0);
  ComplexMatrix out = i * (rho * hamiltonian - hamiltonian * rho);
  dissipate(out, rho, rates, ops);
  return out;
}

MasterTrajectory evolve_master(const HamiltonianFn<double>& hamiltonian, const DensityMatrix& rho0,
                               const DecoherenceRates& rates, const CollapseOperators& ops, TimeSpan<double> span,
                               const StepPolicy& policy) {
  rates.validate();
  require_valid_start(rho0);
  double radius = 0.0;
  for (double t : {span.start, 0.5 * (span.start + span.stop), span.stop}) {
    const ComplexMatrix h = hamiltonian(t);
    require_dims(h, rho0.rho, ops);
    radius = std::max(radius, spectral_radius(h));
  }
  // Liouvillian frequencies reach twice the spectral radius.
  const auto plan = plan_steps(span.stop - span.start, policy, policy.frequency_bound + 2.0 * radius);
  auto rhs = [&](double t, const ComplexMatrix& rho) -> ComplexMatrix {
    return lindblad_rhs(hamiltonian(t), rho, rates, ops);
  };
  MasterTrajectory out{integrate_fixed_step(rhs, rho0.rho, span.start, plan), rho0.basis, rho0.frame, plan.dt};
  audit(out);
  return out;
}

MasterTrajectory evolve_master(const SplitHamiltonian<double>& hamiltonian, const DensityMatrix& rho0,
                               const DecoherenceRates& rates, const CollapseOperators& ops, TimeSpan<double> span,
                               const StepPolicy& policy) {
  rates.validate();
  require_valid_start(rho0);
  require_dims(hamiltonian.stationary.matrix(), rho0.rho, ops);
  const InteractionFrame<double> frame(hamiltonian.stationary);
  const double drive_radius = detail::drive_radius(hamiltonian, span);
  const double omega_max = policy.frequency_bound + frame.spread() + 2.0 * drive_radius;
  const auto plan = plan_steps(span.stop - span.start, policy, omega_max);

  std::vector<ComplexMatrix> couplings;
  for (const auto& term : hamiltonian.drives) couplings.push_back(frame.to_eigenbasis(term.coupling.matrix()));
  const CollapseOperators eig_ops{frame.to_eigenbasis(ops.cavity), frame.to_eigenbasis(ops.qubit_decay),
                                  frame.to_eigenbasis(ops.qubit_dephasing)};
  const std::complex<double> i(0.0, 1.0);
  const auto n = frame.dim();

  // ρ̃ = P ρ P† in the H0 eigenbasis with P = diag(e^{iEt}); the drive and the
  // dissipators act on the lab-frame ρ = P† ρ̃ P.
  auto rhs = [&](double t, const ComplexMatrix& rho_int) -> ComplexMatrix {
    const ComplexVector p = frame.phases(t);
    const ComplexMatrix to_lab = p.conjugate() * p.transpose();
    const ComplexMatrix rho = (rho_int.array() * to_lab.array()).matrix();
    ComplexMatrix v = ComplexMatrix::Zero(n, n);
    for (std::size_t k = 0; k < couplings.size(); ++k) v += hamiltonian.drives[k].envelope(t) * couplings[k];
    ComplexMatrix d = i * (rho * v - v * rho);
    dissipate(d, rho, rates, eig_ops);
    return (d.array() * to_lab.conjugate().array()).matrix();
  };

  const ComplexMatrix start = frame.to_eigenbasis(frame.operator_to_interaction(rho0.rho, span.start));
  const auto eig_traj = integrate_fixed_step(rhs, start, span.start, plan);
  MasterTrajectory out{{}, rho0.basis, FrameTag::interaction, plan.dt};
  for (std::size_t k = 0; k < eig_traj.size(); ++k) {
    out.states.append(eig_traj.time(k), frame.from_eigenbasis(eig_traj.state(k)));
  }
  audit(out);
  return out;
}

double state_fidelity(const ComplexMatrix& rho, const ComplexVector& psi) {
  if (rho.rows() != psi.size()) throw std::invalid_argument("state and density matrix dimensions differ");
  return psi.dot(rho * psi).real() / psi.squaredNorm();
}

HadamardExperiment hadamard_experiment(const SystemParams& params, const DecoherenceRates& rates, double xi,
                                       std::size_t resolution, const HadamardOptions& options) {
  params.validate();
  rates.validate();
  if (resolution < 2) throw std::invalid_argument("resolution must be at least 2");
  const auto program = synthesize_pulse(params, GateSpec::hadamard(), xi);

  const bool product = options.basis == BasisTag::product;
  const ComplexMatrix iso = product ? three_level_isometry(params) : ComplexMatrix::Identity(3, 3);
  ComplexVector plus = ComplexVector::Zero(3);
  plus(kPlus) = 1.0;
  ComplexVector target = ComplexVector::Zero(3);
  target(kPlus) = 1.0;
  target(kMinus) = 1.0;  // normalized inside state_fidelity
  const ComplexVector psi0 = iso * plus;
  const ComplexVector psi_f = iso * target;

  const auto hamiltonian = product ? product_split_hamiltonian(params, program.drive)
                                   : three_level_split_hamiltonian(params, program.drive);
  const auto ops = product ? product_collapse_operators(params) : projected_collapse_operators(params);
  const InteractionFrame<double> frame(hamiltonian.stationary);

  StepPolicy policy = options.policy;
  policy.samples = resolution;
  policy.frequency_bound = std::max(policy.frequency_bound, program.drive.max_carrier());
  const DensityMatrix rho0 = pure_density(psi0, options.basis, FrameTag::lab);

  auto run = [&](const DecoherenceRates& r) {
    return evolve_master(hamiltonian, rho0, r, ops, TimeSpan<double>{0.0, program.tau}, policy);
  };
  auto noisy = std::async(std::launch::async, run, rates);
  auto clean = std::async(std::launch::async, run, DecoherenceRates{});

  HadamardExperiment out;
  out.min_eigenvalue = 1.0;
  auto fill = [&](const MasterTrajectory& traj, FidelityCurve& curve, bool decoherence_on) {
    curve.decoherence_on = decoherence_on;
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      curve.abscissa.push_back(static_cast<double>(k) / static_cast<double>(resolution - 1));
      const ComplexMatrix& rho_int = traj.states.state(k);
      const ComplexMatrix rho = options.fidelity_frame == FrameTag::interaction
                                    ? rho_int
                                    : frame.operator_to_lab(rho_int, traj.states.time(k));
      curve.fidelity.push_back(state_fidelity(rho, psi_f));
    }
    out.dt = traj.dt;
    out.max_trace_error = std::max(out.max_trace_error, traj.max_trace_error);
    out.min_eigenvalue = std::min(out.min_eigenvalue, traj.min_eigenvalue);
  };
  fill(noisy.get(), out.with_decoherence, true);
  fill(clean.get(), out.without_decoherence, false);
  return out;
}

void write_fidelity_csv(std::ostream& os, const HadamardExperiment& experiment) {
  write_csv_preamble(os, "fidelity", {"xi_t_over_2pi", "fidelity_with_decoherence", "fidelity_without"});
  const auto& with = experiment.with_decoherence;
  const auto& without = experiment.without_decoherence;
  for (std::size_t k = 0; k < with.abscissa.size(); ++k) {
    os << format_number(with.abscissa[k]) << ',' << format_number(with.fidelity[k]) << ','
       << format_number(without.fidelity[k]) << '\n';
  }
}

}  // namespace polariton
