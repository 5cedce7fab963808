#pragma once

// Dense complex linear algebra and fixed-step time integration shared by all
// physics modules. Everything here is templated on the real scalar type so the
// oracles can be rerun in extended precision; the physics layers use double.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "polariton/errors.hpp"

namespace polariton {

template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using ComplexMatrix = CMatrix<double>;
using ComplexVector = CVector<double>;
using RealVector = RVector<double>;

inline constexpr double kHermitianTolerance = 1e-12;

template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).norm();
}

/// Throws NotHermitianError unless ‖M − M†‖_F ≤ rel_tol·‖M‖_F.
template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& m,
                       typename Derived::RealScalar rel_tol = kHermitianTolerance) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("Hermitian matrix must be square");
  }
  const auto defect = hermiticity_defect(m);
  if (defect > rel_tol * m.norm()) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian: ||M - M^dagger|| = " << static_cast<double>(defect)
        << " (||M|| = " << static_cast<double>(m.norm()) << ")";
    throw NotHermitianError(msg.str(), static_cast<double>(defect));
  }
}

/// A square complex matrix whose Hermiticity was checked on construction.
template <typename Scalar>
class Hermitian {
 public:
  explicit Hermitian(CMatrix<Scalar> m, Scalar rel_tol = Scalar(kHermitianTolerance))
      : m_(std::move(m)) {
    require_hermitian(m_, rel_tol);
  }

  const CMatrix<Scalar>& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

 private:
  CMatrix<Scalar> m_;
};

template <typename Derived>
auto make_hermitian(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  return Hermitian<Real>(m.template cast<std::complex<Real>>().eval());
}

template <typename Scalar>
struct EigenSystem {
  RVector<Scalar> values;   // ascending
  CMatrix<Scalar> vectors;  // orthonormal columns, same order as values
};

namespace detail {

// First component above the noise floor of each column becomes real positive.
template <typename Scalar>
void fix_eigenvector_phases(CMatrix<Scalar>& vectors) {
  const Scalar floor_rel = Scalar(1e-10);
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    auto col = vectors.col(c);
    const Scalar peak = col.cwiseAbs().maxCoeff();
    for (Eigen::Index r = 0; r < col.size(); ++r) {
      const Scalar mag = std::abs(col(r));
      if (mag > floor_rel * peak) {
        col *= std::conj(col(r)) / mag;
        col(r) = std::complex<Scalar>(mag, Scalar(0));
        break;
      }
    }
  }
}

}  // namespace detail

template <typename Scalar>
EigenSystem<Scalar> hermitian_eig(const Hermitian<Scalar>& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigendecomposition did not converge");
  }
  EigenSystem<Scalar> out{solver.eigenvalues(), solver.eigenvectors()};
  detail::fix_eigenvector_phases(out.vectors);
  return out;
}

template <typename Derived>
auto hermitian_eig(const Eigen::MatrixBase<Derived>& m) {
  return hermitian_eig(make_hermitian(m));
}

/// e^{−iHt} through the eigendecomposition of H.
template <typename Scalar>
CMatrix<Scalar> matrix_exp_unitary(const Hermitian<Scalar>& h, Scalar t) {
  const auto eig = hermitian_eig(h);
  CVector<Scalar> phases(eig.values.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases(k) = std::polar(Scalar(1), -eig.values(k) * t);
  }
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

template <typename Derived>
auto matrix_exp_unitary(const Eigen::MatrixBase<Derived>& m, typename Derived::RealScalar t) {
  return matrix_exp_unitary(make_hermitian(m), t);
}

template <typename Derived>
typename Derived::RealScalar spectral_radius(const Eigen::MatrixBase<Derived>& hermitian) {
  const auto eig = hermitian_eig(hermitian);
  return std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
}

/// Time-ordered samples of a state. Times strictly increase and every state
/// has the shape of the first one.
template <typename State, typename Time = double>
class Trajectory {
 public:
  void append(Time t, State state) {
    if (!times_.empty()) {
      if (!(t > times_.back())) {
        throw std::invalid_argument("trajectory times must be strictly increasing");
      }
      if (state.rows() != states_.front().rows() || state.cols() != states_.front().cols()) {
        throw std::invalid_argument("trajectory states must share one dimension");
      }
    }
    times_.push_back(t);
    states_.push_back(std::move(state));
  }

  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }
  const std::vector<Time>& times() const noexcept { return times_; }
  const std::vector<State>& states() const noexcept { return states_; }
  const State& state(std::size_t i) const { return states_.at(i); }
  Time time(std::size_t i) const { return times_.at(i); }
  const State& back() const { return states_.back(); }

 private:
  std::vector<Time> times_;
  std::vector<State> states_;
};

template <typename Time = double>
struct TimeSpan {
  Time start;
  Time stop;
};

/// Controls the fixed-step integrators. The number of steps is rounded up so
/// that `samples` equally spaced records (both endpoints included) fall on
/// step boundaries.
struct StepPolicy {
  double max_dt = 0.0;           // seconds; 0 derives dt from `resolution`
  std::size_t samples = 2;
  double frequency_bound = 0.0;  // rad/s, fastest explicit carrier in H(t)
  double resolution = 0.1;       // ω_max·dt used when max_dt == 0
};

/// Steps with ω_max·dt above this are refused.
inline constexpr double kMaxPhasePerStep = 0.5;

struct StepPlan {
  std::size_t steps = 0;
  std::size_t stride = 0;  // steps between recorded samples
  double dt = 0.0;
  double omega_max = 0.0;
};

inline StepPlan plan_steps(double span, const StepPolicy& policy, double omega_max) {
  if (!(span > 0.0)) throw std::invalid_argument("time span must be positive");
  if (policy.samples < 2) throw std::invalid_argument("at least two samples are required");
  double target = policy.max_dt;
  if (target <= 0.0) {
    if (!(omega_max > 0.0)) {
      throw std::invalid_argument("step size undetermined: no max_dt and no frequency scale");
    }
    target = policy.resolution / omega_max;
  }
  const std::size_t segments = policy.samples - 1;
  auto steps = static_cast<std::size_t>(std::ceil(span / target - 1e-9));
  steps = std::max<std::size_t>(steps, 1);
  steps = ((steps + segments - 1) / segments) * segments;
  StepPlan plan{steps, steps / segments, span / static_cast<double>(steps), omega_max};
  if (omega_max * plan.dt > kMaxPhasePerStep) {
    std::ostringstream msg;
    msg << "step policy under-resolves the fastest frequency: omega_max*dt = "
        << omega_max * plan.dt << " > " << kMaxPhasePerStep << " (dt = " << plan.dt
        << " s, omega_max = " << omega_max << " rad/s)";
    throw NumericalError(msg.str());
  }
  return plan;
}

/// Classical RK4 for y' = rhs(t, y) on a precomputed plan. Sample times are
/// computed as start + k·dt, never accumulated.
template <typename State, typename Time, typename Rhs>
Trajectory<State, Time> integrate_fixed_step(Rhs&& rhs, State y, Time start, const StepPlan& plan) {
  Trajectory<State, Time> out;
  out.append(start, y);
  const Time dt = Time(plan.dt);
  const Time half = dt / Time(2);
  for (std::size_t k = 0; k < plan.steps; ++k) {
    const Time t = start + Time(k) * dt;
    const State k1 = rhs(t, y);
    const State k2 = rhs(t + half, (y + half * k1).eval());
    const State k3 = rhs(t + half, (y + half * k2).eval());
    const State k4 = rhs(t + dt, (y + dt * k3).eval());
    y += (dt / Time(6)) * (k1 + Time(2) * k2 + Time(2) * k3 + k4);
    if ((k + 1) % plan.stride == 0) out.append(start + Time(k + 1) * dt, y);
  }
  return out;
}

template <typename Scalar>
using HamiltonianFn = std::function<CMatrix<Scalar>(Scalar)>;

/// One drive channel f(t)·O with a real envelope and a Hermitian coupling.
template <typename Scalar>
struct DriveTerm {
  std::function<Scalar(Scalar)> envelope;
  Hermitian<Scalar> coupling;
};

/// H(t) = H0 + Σ_k f_k(t)·O_k: a large stationary part plus drive channels.
template <typename Scalar>
struct SplitHamiltonian {
  Hermitian<Scalar> stationary;
  std::vector<DriveTerm<Scalar>> drives;

  CMatrix<Scalar> driven(Scalar t) const {
    CMatrix<Scalar> v = CMatrix<Scalar>::Zero(stationary.dim(), stationary.dim());
    for (const auto& term : drives) v += term.envelope(t) * term.coupling.matrix();
    return v;
  }
  CMatrix<Scalar> total(Scalar t) const { return stationary.matrix() + driven(t); }
};

/// The frame co-rotating with a stationary Hamiltonian H0. Interaction-picture
/// objects are X_I(t) = e^{iH0 t} X e^{−iH0 t}, with t measured from zero.
template <typename Scalar>
class InteractionFrame {
 public:
  explicit InteractionFrame(const Hermitian<Scalar>& h0) : eig_(hermitian_eig(h0)) {}

  Eigen::Index dim() const noexcept { return eig_.values.size(); }
  const EigenSystem<Scalar>& eigensystem() const noexcept { return eig_; }

  /// Largest Bohr frequency of H0.
  Scalar spread() const { return eig_.values(dim() - 1) - eig_.values(0); }

  /// e^{iE_k t} for each eigenvalue.
  CVector<Scalar> phases(Scalar t) const {
    CVector<Scalar> p(dim());
    for (Eigen::Index k = 0; k < dim(); ++k) p(k) = std::polar(Scalar(1), eig_.values(k) * t);
    return p;
  }

  CMatrix<Scalar> to_eigenbasis(const CMatrix<Scalar>& op) const {
    return eig_.vectors.adjoint() * op * eig_.vectors;
  }
  CVector<Scalar> vector_to_eigenbasis(const CVector<Scalar>& v) const {
    return eig_.vectors.adjoint() * v;
  }
  CMatrix<Scalar> from_eigenbasis(const CMatrix<Scalar>& op) const {
    return eig_.vectors * op * eig_.vectors.adjoint();
  }
  CVector<Scalar> vector_from_eigenbasis(const CVector<Scalar>& v) const {
    return eig_.vectors * v;
  }

  /// P(t)·X·P(t)† for an operator already expressed in the eigenbasis.
  static CMatrix<Scalar> rotate(const CMatrix<Scalar>& op_eig, const CVector<Scalar>& phases) {
    return phases.asDiagonal() * op_eig * phases.conjugate().asDiagonal();
  }

  CVector<Scalar> state_to_interaction(const CVector<Scalar>& psi_lab, Scalar t) const {
    return vector_from_eigenbasis((phases(t).array() * vector_to_eigenbasis(psi_lab).array()).matrix());
  }
  CVector<Scalar> state_to_lab(const CVector<Scalar>& psi_int, Scalar t) const {
    return vector_from_eigenbasis(
        (phases(t).conjugate().array() * vector_to_eigenbasis(psi_int).array()).matrix());
  }
  CMatrix<Scalar> operator_to_interaction(const CMatrix<Scalar>& op_lab, Scalar t) const {
    return from_eigenbasis(rotate(to_eigenbasis(op_lab), phases(t)));
  }
  CMatrix<Scalar> operator_to_lab(const CMatrix<Scalar>& op_int, Scalar t) const {
    return from_eigenbasis(rotate(to_eigenbasis(op_int), phases(t).conjugate().eval()));
  }

 private:
  EigenSystem<Scalar> eig_;
};

namespace detail {

template <typename Scalar>
std::vector<Scalar> probe_times(const TimeSpan<Scalar>& span) {
  return {span.start, (span.start + span.stop) / Scalar(2), span.stop};
}

template <typename Scalar>
Scalar drive_radius(const SplitHamiltonian<Scalar>& h, const TimeSpan<Scalar>& span) {
  Scalar radius(0);
  for (Scalar t : probe_times(span)) {
    if (h.drives.empty()) break;
    radius = std::max(radius, spectral_radius(h.driven(t)));
  }
  return radius;
}

template <typename Scalar>
void require_normalized(const CVector<Scalar>& psi) {
  if (std::abs(psi.norm() - Scalar(1)) > Scalar(1e-10)) {
    throw std::invalid_argument("initial state must be normalized");
  }
}

}  // namespace detail

/// Integrates iψ' = H(t)ψ with lab-frame RK4. Suitable when the eigenvalues
/// of H(t) are not much larger than 1/dt; see the split overload otherwise.
template <typename Scalar>
Trajectory<CVector<Scalar>, Scalar> integrate_schrodinger(
    const std::type_identity_t<HamiltonianFn<Scalar>>& hamiltonian, const CVector<Scalar>& psi0,
    TimeSpan<Scalar> span, const StepPolicy& policy) {
  detail::require_normalized(psi0);
  Scalar radius(0);
  for (Scalar t : detail::probe_times(span)) {
    const CMatrix<Scalar> h = hamiltonian(t);
    if (h.rows() != psi0.size()) throw std::invalid_argument("H(t) and psi0 dimensions differ");
    radius = std::max(radius, spectral_radius(h));
  }
  const double omega_max = policy.frequency_bound + static_cast<double>(radius);
  const auto plan = plan_steps(static_cast<double>(span.stop - span.start), policy, omega_max);
  const std::complex<Scalar> minus_i(0, -1);
  auto rhs = [&](Scalar t, const CVector<Scalar>& y) -> CVector<Scalar> {
    return minus_i * (hamiltonian(t) * y);
  };
  return integrate_fixed_step(rhs, psi0, span.start, plan);
}

/// Integrates iψ' = (H0 + V(t))ψ by propagating H0 exactly and applying RK4
/// to the interaction-picture generator e^{iH0t}V(t)e^{−iH0t}. Returned states
/// are interaction-picture states ψ_I(t) = e^{iH0 t}ψ(t) in the original
/// basis; psi0 is taken as the lab state at span.start.
template <typename Scalar>
Trajectory<CVector<Scalar>, Scalar> integrate_schrodinger(const SplitHamiltonian<Scalar>& hamiltonian,
                                                          const CVector<Scalar>& psi0,
                                                          TimeSpan<Scalar> span,
                                                          const StepPolicy& policy) {
  detail::require_normalized(psi0);
  const InteractionFrame<Scalar> frame(hamiltonian.stationary);
  if (psi0.size() != frame.dim()) throw std::invalid_argument("H0 and psi0 dimensions differ");
  const double omega_max = policy.frequency_bound + static_cast<double>(frame.spread()) +
                           static_cast<double>(detail::drive_radius(hamiltonian, span));
  const auto plan = plan_steps(static_cast<double>(span.stop - span.start), policy, omega_max);

  std::vector<CMatrix<Scalar>> couplings;
  for (const auto& term : hamiltonian.drives) couplings.push_back(frame.to_eigenbasis(term.coupling.matrix()));
  const std::complex<Scalar> minus_i(0, -1);
  auto rhs = [&](Scalar t, const CVector<Scalar>& y) -> CVector<Scalar> {
    const CVector<Scalar> p = frame.phases(t);
    const CVector<Scalar> lab = (p.conjugate().array() * y.array()).matrix();
    CVector<Scalar> acc = CVector<Scalar>::Zero(y.size());
    for (std::size_t k = 0; k < couplings.size(); ++k) {
      acc.noalias() += hamiltonian.drives[k].envelope(t) * (couplings[k] * lab);
    }
    return minus_i * (p.array() * acc.array()).matrix();
  };
  CVector<Scalar> y0 = frame.vector_to_eigenbasis(frame.state_to_interaction(psi0, span.start));
  const auto eig_traj = integrate_fixed_step(rhs, std::move(y0), span.start, plan);

  Trajectory<CVector<Scalar>, Scalar> out;
  for (std::size_t i = 0; i < eig_traj.size(); ++i) {
    out.append(eig_traj.time(i), frame.vector_from_eigenbasis(eig_traj.state(i)));
  }
  return out;
}

}  // namespace polariton
