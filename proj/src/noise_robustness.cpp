#include "polariton/noise_robustness.hpp"

#include <cmath>
#include <future>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "polariton/csv.hpp"
#include "polariton/units.hpp"

namespace polariton {

namespace {

ComplexMatrix noise_operator(int n_max, NoiseAxis axis) {
  return axis == NoiseAxis::transverse ? qubit_sigma_x(n_max) : qubit_sigma_z(n_max);
}

Branch other(Branch b) { return b == Branch::minus ? Branch::plus : Branch::minus; }

ShiftReport make_report(double minus, double plus, ShiftMethod method) {
  return ShiftReport{minus, plus, std::abs(plus - minus), method};
}

}  // namespace

std::string_view to_string(ShiftMethod m) {
  switch (m) {
    case ShiftMethod::series: return "series";
    case ShiftMethod::closed_form: return "closed_form";
    case ShiftMethod::approx: return "approx";
    case ShiftMethod::oracle: return "oracle";
  }
  return "unknown";
}

double shift_series(const SystemParams& params, const NoiseSpec& noise, Branch branch, NoiseAxis axis) {
  params.validate();
  const ComplexMatrix op = noise_operator(params.n_max, axis);
  const ComplexVector target = dressed_state_vector(params, 1, branch);
  const double e_target = eigen_energy(params, 1, branch);

  struct Intermediate {
    ComplexVector state;
    double energy;
  };
  const std::vector<Intermediate> intermediates{
      {ground_state_vector(params), 0.0},
      {dressed_state_vector(params, 1, other(branch)), eigen_energy(params, 1, other(branch))},
      {dressed_state_vector(params, 2, Branch::minus), eigen_energy(params, 2, Branch::minus)},
      {dressed_state_vector(params, 2, Branch::plus), eigen_energy(params, 2, Branch::plus)},
  };

  const ComplexVector coupled = op * target;
  const double first_order = noise.a_x * target.dot(coupled).real();
  double second_order = 0.0;
  for (const auto& m : intermediates) {
    const double element = std::norm(m.state.dot(coupled));
    second_order += element / (e_target - m.energy);
  }
  return first_order + noise.a_x * noise.a_x * second_order;
}

double shift_closed_form(const SystemParams& params, const NoiseSpec& noise, Branch branch) {
  if (!params.resonant(1e-9)) {
    throw PhysicsGuardError(
        "closed-form noise shifts assume zero detuning; use shift_series for detuned systems");
  }
  const double wr = params.omega_r;
  const double g = branch == Branch::minus ? params.g : -params.g;
  const double a2 = noise.a_x * noise.a_x;
  return 0.5 * a2 * (1.0 / (wr - g) - 1.0 / (wr + g - 2.0 * g * g / (wr + g)));
}

double shift_approx(const SystemParams& params, const NoiseSpec& noise, Branch branch) {
  const double magnitude = noise.a_x * noise.a_x * params.g / (params.omega_a * params.omega_a);
  return branch == Branch::minus ? magnitude : -magnitude;
}

bool weak_coupling(const SystemParams& params) noexcept { return params.g / params.omega_r < 0.1; }

OracleShifts shift_oracle(const SystemParams& params, const NoiseSpec& noise, NoiseAxis axis) {
  params.validate();
  if (params.n_max < 4) throw std::invalid_argument("shift_oracle needs n_max >= 4 to bound truncation error");
  const ComplexMatrix h = build_jc_hamiltonian(params) + noise.a_x * noise_operator(params.n_max, axis);
  const auto eig = hermitian_eig(h);

  OracleShifts out;
  for (Branch b : {Branch::minus, Branch::plus}) {
    const ComplexVector target = dressed_state_vector(params, 1, b);
    const RealVector overlaps = (eig.vectors.adjoint() * target).cwiseAbs2();
    Eigen::Index best = 0;
    const double overlap = overlaps.maxCoeff(&best);
    if (overlap < 0.9) {
      std::ostringstream msg;
      msg << "cannot identify the perturbed |" << to_string(b) << ",1> level (best overlap " << overlap
          << "); noise amplitude is outside the perturbative regime";
      throw PhysicsGuardError(msg.str());
    }
    const double shift = eig.values(best) - eigen_energy(params, 1, b);
    (b == Branch::minus ? out.minus : out.plus) = shift;
    out.min_overlap = std::min(out.min_overlap, overlap);
  }
  return out;
}

ShiftReport shift_report(const SystemParams& params, const NoiseSpec& noise, ShiftMethod method) {
  switch (method) {
    case ShiftMethod::series:
      return make_report(shift_series(params, noise, Branch::minus), shift_series(params, noise, Branch::plus),
                         method);
    case ShiftMethod::closed_form:
      return make_report(shift_closed_form(params, noise, Branch::minus),
                         shift_closed_form(params, noise, Branch::plus), method);
    case ShiftMethod::approx:
      return make_report(shift_approx(params, noise, Branch::minus), shift_approx(params, noise, Branch::plus),
                         method);
    case ShiftMethod::oracle: {
      const auto o = shift_oracle(params, noise);
      return make_report(o.minus, o.plus, method);
    }
  }
  throw std::invalid_argument("unknown shift method");
}

std::vector<double> default_noise_amplitudes() {
  return {angular_from_hz(1e6), angular_from_hz(2e6), angular_from_hz(5e6), angular_from_hz(10e6),
          angular_from_hz(20e6)};
}

std::vector<NoiseScanRow> noise_scan(const SystemParams& params, const std::vector<double>& amplitudes) {
  params.validate();
  auto evaluate = [params](double a_x) {
    const NoiseSpec noise{a_x};
    std::vector<NoiseScanRow> rows;
    for (ShiftMethod m : {ShiftMethod::series, ShiftMethod::closed_form, ShiftMethod::approx,
                          ShiftMethod::oracle}) {
      if (m == ShiftMethod::closed_form && !params.resonant(1e-9)) continue;
      rows.push_back({a_x, to_string(m), shift_report(params, noise, m)});
    }
    const auto longitudinal = shift_oracle(params, noise, NoiseAxis::longitudinal);
    rows.push_back({a_x, "oracle_longitudinal", make_report(longitudinal.minus, longitudinal.plus,
                                                            ShiftMethod::oracle)});
    return rows;
  };

  std::vector<std::future<std::vector<NoiseScanRow>>> jobs;
  for (double a : amplitudes) {
    if (!(a >= 0.0)) throw std::invalid_argument("noise amplitudes must be non-negative");
    jobs.push_back(std::async(std::launch::async, evaluate, a));
  }
  std::vector<NoiseScanRow> out;
  for (auto& job : jobs) {
    for (auto& row : job.get()) out.push_back(row);
  }
  return out;
}

void write_noise_csv(std::ostream& os, const std::vector<NoiseScanRow>& rows) {
  write_csv_preamble(os, "noise_scan",
                     {"a_x_Hz_over_2pi", "method", "shift_minus", "shift_plus", "splitting_correction"});
  for (const auto& row : rows) {
    os << format_number(hz_from_angular(row.a_x)) << ',' << row.method << ','
       << format_number(hz_from_angular(row.report.shift_minus)) << ','
       << format_number(hz_from_angular(row.report.shift_plus)) << ','
       << format_number(hz_from_angular(row.report.splitting_correction)) << '\n';
  }
}

}  // namespace polariton
