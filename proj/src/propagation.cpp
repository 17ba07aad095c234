#include "ratos/propagation.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace ratos {

void MediumSpec::validate() const {
  if (grid_points < 2) {
    throw std::invalid_argument("MediumSpec: need at least two grid points");
  }
  if (window_length <= 0.0) {
    throw std::invalid_argument("MediumSpec: window_length must be positive");
  }
  if (medium_length < 0.0 || medium_start < 0.0 ||
      medium_start + medium_length > window_length) {
    throw std::invalid_argument("MediumSpec: medium must lie inside the window");
  }
  if (atom_number < 0.0) {
    throw std::invalid_argument("MediumSpec: atom_number must be >= 0");
  }
  if (!(courant > 0.0) || courant > 1.0 + 1e-12) {
    throw NumericalError("MediumSpec: CFL violated (need 0 < c dt/dz <= 1)");
  }
}

FieldGrid FieldGrid::zero(const MediumSpec& medium, int num_modes) {
  medium.validate();
  if (num_modes <= 0) throw std::invalid_argument("FieldGrid: num_modes must be positive");
  FieldGrid grid;
  grid.num_modes = num_modes;
  grid.z.resize(static_cast<size_t>(medium.grid_points));
  const double dz = medium.dz();
  for (int i = 0; i < medium.grid_points; ++i) {
    grid.z[static_cast<size_t>(i)] = i * dz;
  }
  grid.field.assign(static_cast<size_t>(num_modes),
                    Eigen::VectorXcd::Zero(medium.grid_points));
  grid.sigma_ba.assign(static_cast<size_t>(num_modes),
                       Eigen::VectorXcd::Zero(medium.grid_points));
  grid.sigma_bc = Eigen::VectorXcd::Zero(medium.grid_points);
  return grid;
}

double FieldGrid::field_energy(int mode) const {
  const double dz = z.size() > 1 ? z[1] - z[0] : 1.0;
  return field.at(static_cast<size_t>(mode - 1)).squaredNorm() * dz;
}

double FieldGrid::total_field_energy() const {
  double total = 0.0;
  for (int q = 1; q <= num_modes; ++q) total += field_energy(q);
  return total;
}

void add_pulses(FieldGrid& grid, const MediumSpec& medium,
                const std::vector<GaussianPulseSpec>& pulses) {
  for (const GaussianPulseSpec& pulse : pulses) {
    if (pulse.mode < 1 || pulse.mode > grid.num_modes) {
      throw std::invalid_argument("add_pulses: mode index out of range");
    }
    if (pulse.rms_width <= 0.0) {
      throw std::invalid_argument("add_pulses: rms_width must be positive");
    }
    const double reach = 3.5 * pulse.rms_width;
    if (medium.medium_length > 0.0 && medium.atom_number > 0.0 &&
        pulse.center + reach > medium.medium_start &&
        pulse.center - reach < medium.medium_start + medium.medium_length) {
      throw std::invalid_argument("add_pulses: pulse overlaps the medium at t=0");
    }
    Eigen::VectorXcd& a = grid.field[static_cast<size_t>(pulse.mode - 1)];
    for (size_t i = 0; i < grid.z.size(); ++i) {
      const double d = (grid.z[i] - pulse.center) / pulse.rms_width;
      a(static_cast<Eigen::Index>(i)) += pulse.amplitude * std::exp(-0.5 * d * d);
    }
  }
}

namespace {

// Local source system in one cell: y = (a_1..a_Q, s_1..s_Q, s_BC).
Eigen::MatrixXcd cell_matrix(const ModelParams& params, double atom_number,
                             const std::vector<Complex>& controls) {
  const int q_count = params.num_modes;
  const int dim = 2 * q_count + 1;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (int q = 0; q < q_count; ++q) {
    const Complex gq = params.g[static_cast<size_t>(q)];
    const double gamma_q = params.gamma[static_cast<size_t>(q)];
    const Complex omega_q = controls[static_cast<size_t>(q)];
    m(q, q_count + q) = kImag * atom_number * std::conj(gq);
    m(q_count + q, q) = kImag * gq;
    m(q_count + q, 2 * q_count) = kImag * omega_q;
    m(q_count + q, q_count + q) = Complex(-0.5 * gamma_q, -params.delta);
    m(2 * q_count, q_count + q) = kImag * std::conj(omega_q);
  }
  m(2 * q_count, 2 * q_count) = Complex(0.0, -(params.delta - params.Delta));
  return m;
}

struct MediumRange {
  int lo = 0;
  int hi = -1;  // inclusive
};

MediumRange medium_cells(const MediumSpec& medium, const std::vector<double>& z) {
  MediumRange range;
  range.lo = static_cast<int>(z.size());
  range.hi = -1;
  for (int i = 0; i < static_cast<int>(z.size()); ++i) {
    if (medium.in_medium(z[static_cast<size_t>(i)])) {
      range.lo = std::min(range.lo, i);
      range.hi = std::max(range.hi, i);
    }
  }
  return range;
}

void apply_source(FieldGrid& grid, const MediumRange& range,
                  const Eigen::MatrixXcd& propagator) {
  const int q_count = grid.num_modes;
  const int dim = 2 * q_count + 1;
  Eigen::VectorXcd y(dim);
  for (int i = range.lo; i <= range.hi; ++i) {
    for (int q = 0; q < q_count; ++q) {
      y(q) = grid.field[static_cast<size_t>(q)](i);
      y(q_count + q) = grid.sigma_ba[static_cast<size_t>(q)](i);
    }
    y(2 * q_count) = grid.sigma_bc(i);
    y = propagator * y;
    for (int q = 0; q < q_count; ++q) {
      grid.field[static_cast<size_t>(q)](i) = y(q);
      grid.sigma_ba[static_cast<size_t>(q)](i) = y(q_count + q);
    }
    grid.sigma_bc(i) = y(2 * q_count);
  }
}

void transport(FieldGrid& grid, double nu) {
  for (Eigen::VectorXcd& a : grid.field) {
    const Eigen::Index n = a.size();
    if (nu >= 1.0 - 1e-14) {
      for (Eigen::Index i = n - 1; i >= 1; --i) a(i) = a(i - 1);
      a(0) = Complex(0.0, 0.0);
    } else {
      for (Eigen::Index i = n - 1; i >= 1; --i) {
        a(i) = (1.0 - nu) * a(i) + nu * a(i - 1);
      }
      a(0) *= (1.0 - nu);
    }
  }
}

void step_in_place(FieldGrid& grid, const MediumSpec& medium,
                   const ModelParams& params, const MediumRange& range,
                   const Eigen::MatrixXcd& half_propagator, double dt) {
  const double nu = kSpeedOfLight * dt / medium.dz();
  if (nu > 1.0 + 1e-12) throw NumericalError("step_maxwell_bloch: CFL violated");
  if (range.hi >= range.lo && medium.atom_number > 0.0) {
    apply_source(grid, range, half_propagator);
    transport(grid, nu);
    apply_source(grid, range, half_propagator);
  } else {
    transport(grid, nu);
  }
  (void)params;
}

}  // namespace

FieldGrid step_maxwell_bloch(const FieldGrid& grid, const MediumSpec& medium,
                             const ModelParams& params,
                             const std::vector<Complex>& controls, double dt) {
  medium.validate();
  params.validate();
  if (grid.num_modes != params.num_modes) {
    throw std::invalid_argument("step_maxwell_bloch: mode count mismatch");
  }
  if (static_cast<int>(controls.size()) != params.num_modes) {
    throw std::invalid_argument("step_maxwell_bloch: controls must have Q entries");
  }
  FieldGrid next = grid;
  const MediumRange range = medium_cells(medium, grid.z);
  const Eigen::MatrixXcd m = cell_matrix(params, medium.atom_number, controls);
  const Eigen::MatrixXcd half = (m * (0.5 * dt)).exp();
  step_in_place(next, medium, params, range, half, dt);
  for (const Eigen::VectorXcd& a : next.field) {
    if (!a.allFinite()) throw NumericalError("step_maxwell_bloch: field became non-finite");
  }
  return next;
}

Polariton polariton_decompose(const FieldGrid& grid, const MediumSpec& medium,
                              const ModelParams& params,
                              const Eigen::VectorXcd& bq_coeffs, double r_norm) {
  if (bq_coeffs.size() != grid.num_modes) {
    throw std::invalid_argument("polariton_decompose: weight count mismatch");
  }
  Polariton pol;
  const double sqrt_n = std::sqrt(medium.atom_number);
  pol.mixing_angle = std::atan2(sqrt_n, r_norm);
  const Eigen::Index cells = grid.sigma_bc.size();
  pol.bq_field = Eigen::VectorXcd::Zero(cells);
  for (int q = 0; q < grid.num_modes; ++q) {
    pol.bq_field += bq_coeffs(q) * grid.field[static_cast<size_t>(q)];
  }
  const double cos_t = std::cos(pol.mixing_angle);
  const double sin_t = std::sin(pol.mixing_angle);
  pol.psi = cos_t * pol.bq_field - sin_t * sqrt_n * grid.sigma_bc;
  pol.bright_power = Eigen::VectorXd::Zero(cells);
  for (int q = 0; q < grid.num_modes; ++q) {
    pol.bright_power += grid.field[static_cast<size_t>(q)].cwiseAbs2();
  }
  pol.bright_power -= pol.bq_field.cwiseAbs2();
  const double dz = grid.z.size() > 1 ? grid.z[1] - grid.z[0] : 1.0;
  pol.psi_norm_sq = pol.psi.squaredNorm() * dz;
  return pol;
}

Polariton polariton_decompose(const FieldGrid& grid, const MediumSpec& medium,
                              const ModelParams& params,
                              const std::vector<Complex>& controls) {
  const OpticalBasis optical = optical_transform(params, controls);
  return polariton_decompose(grid, medium, params, optical.bq_coeffs,
                             optical.r_norm);
}

namespace {

double quadratic_peak_time(const std::vector<double>& times,
                           const Eigen::VectorXd& values) {
  Eigen::Index best = 0;
  values.maxCoeff(&best);
  if (best == 0 || best + 1 >= values.size()) {
    return times[static_cast<size_t>(best)];
  }
  const double y0 = values(best - 1), y1 = values(best), y2 = values(best + 1);
  const double denom = y0 - 2.0 * y1 + y2;
  if (std::abs(denom) < 1e-300) return times[static_cast<size_t>(best)];
  const double shift = 0.5 * (y0 - y2) / denom;
  const double dt = times[1] - times[0];
  return times[static_cast<size_t>(best)] + shift * dt;
}

double intensity_rms_width(const FieldGrid& grid, int lo, int hi) {
  double w0 = 0.0, w1 = 0.0, w2 = 0.0;
  for (int i = lo; i <= hi; ++i) {
    double intensity = 0.0;
    for (const Eigen::VectorXcd& a : grid.field) intensity += std::norm(a(i));
    const double z = grid.z[static_cast<size_t>(i)];
    w0 += intensity;
    w1 += intensity * z;
    w2 += intensity * z * z;
  }
  if (w0 <= 0.0) return 0.0;
  const double mean = w1 / w0;
  const double var = std::max(0.0, w2 / w0 - mean * mean);
  return std::sqrt(var);
}

}  // namespace

PropagationReport run_pulse_experiment(const MediumSpec& medium,
                                       const ModelParams& params,
                                       const ControlSchedule& schedule,
                                       const std::vector<GaussianPulseSpec>& pulses,
                                       const PulseExperimentConfig& config) {
  medium.validate();
  params.validate();
  schedule.validate();
  if (schedule.num_modes() != params.num_modes) {
    throw std::invalid_argument("run_pulse_experiment: schedule mode count mismatch");
  }
  if (config.duration <= 0.0) {
    throw std::invalid_argument("run_pulse_experiment: duration must be positive");
  }

  FieldGrid grid = FieldGrid::zero(medium, params.num_modes);
  add_pulses(grid, medium, pulses);

  PropagationReport report;
  report.final_grid = grid;  // replaced at the end
  for (int q = 1; q <= params.num_modes; ++q) {
    report.input_energy.push_back(grid.field_energy(q));
  }

  const double dz = medium.dz();
  const double dt = medium.dt();
  const long steps = std::lround(std::ceil(config.duration / dt));
  const MediumRange range = medium_cells(medium, grid.z);
  report.probe_position = config.probe_position >= 0.0
                              ? config.probe_position
                              : medium.medium_start + medium.medium_length + 2.0 * dz;
  int probe_cell = static_cast<int>(std::lround(report.probe_position / dz));
  probe_cell = std::clamp(probe_cell, 0, medium.grid_points - 1);
  report.probe_position = grid.z[static_cast<size_t>(probe_cell)];

  std::vector<Eigen::VectorXd> probe(static_cast<size_t>(params.num_modes),
                                     Eigen::VectorXd::Zero(steps + 1));
  report.probe_times.resize(static_cast<size_t>(steps + 1));

  // The optical basis is frozen at its last well-defined value so polariton
  // diagnostics stay meaningful while the light is stored.
  Eigen::VectorXcd frozen_bq;
  double frozen_r = 0.0;
  bool have_basis = false;

  const double n_total = medium.atom_number;
  auto record_diagnostics = [&](double t) {
    report.record_times.push_back(t);
    double spins = 0.0;
    for (const Eigen::VectorXcd& s : grid.sigma_ba) spins += s.squaredNorm();
    spins += grid.sigma_bc.squaredNorm();
    const double field_energy = grid.total_field_energy();
    report.field_energy_record.push_back(field_energy);
    report.spin_energy_record.push_back(n_total * spins * dz);
    report.total_excitation.push_back(field_energy / kSpeedOfLight +
                                      n_total * spins * dz);
    if (config.track_polariton && have_basis) {
      const Polariton pol =
          polariton_decompose(grid, medium, params, frozen_bq, frozen_r);
      report.polariton_norm_sq.push_back(pol.psi_norm_sq);
    }
  };

  double best_inside_energy = -1.0;
  double best_inside_width = 0.0;
  const double vacuum_width = intensity_rms_width(grid, 0, medium.grid_points - 1);

  std::vector<Complex> cached_controls;
  Eigen::MatrixXcd half_propagator;

  for (long s = 0; s <= steps; ++s) {
    const double t = s * dt;
    report.probe_times[static_cast<size_t>(s)] = t;
    for (int q = 0; q < params.num_modes; ++q) {
      probe[static_cast<size_t>(q)](s) = std::abs(grid.field[static_cast<size_t>(q)](probe_cell));
    }
    if (s % config.record_every == 0 || s == steps) {
      const std::vector<Complex> controls = schedule.evaluate(t);
      double omega_sq = 0.0;
      for (const Complex& c : controls) omega_sq += std::norm(c);
      if (omega_sq > 0.0) {
        const OpticalBasis optical = optical_transform(params, controls);
        frozen_bq = optical.bq_coeffs;
        frozen_r = optical.r_norm;
        have_basis = true;
      }
      record_diagnostics(t);
      if (range.hi >= range.lo) {
        double inside = 0.0;
        for (int i = range.lo; i <= range.hi; ++i) {
          for (const Eigen::VectorXcd& a : grid.field) inside += std::norm(a(i));
        }
        inside *= dz;
        const double total = grid.total_field_energy();
        if (total > 0.0 && inside > 0.98 * total && inside > best_inside_energy) {
          best_inside_energy = inside;
          best_inside_width = intensity_rms_width(grid, range.lo, range.hi);
        }
      }
      if (s % (config.record_every * 8) == 0 && !grid.sigma_bc.allFinite()) {
        throw NumericalError("run_pulse_experiment: coherences became non-finite");
      }
    }
    if (s == steps) break;

    const std::vector<Complex> controls = schedule.evaluate(t + 0.5 * dt);
    if (controls != cached_controls || s == 0) {
      const Eigen::MatrixXcd m = cell_matrix(params, medium.atom_number, controls);
      half_propagator = (m * (0.5 * dt)).exp();
      cached_controls = controls;
    }
    step_in_place(grid, medium, params, range, half_propagator, dt);
  }

  if (!grid.sigma_bc.allFinite()) {
    throw NumericalError("run_pulse_experiment: coherences became non-finite");
  }
  for (const Eigen::VectorXcd& a : grid.field) {
    if (!a.allFinite()) throw NumericalError("run_pulse_experiment: field became non-finite");
  }

  for (int q = 1; q <= params.num_modes; ++q) {
    report.output_energy.push_back(grid.field_energy(q));
    report.peak_arrival.push_back(
        quadratic_peak_time(report.probe_times, probe[static_cast<size_t>(q - 1)]));
  }
  report.probe_flux = std::move(probe);
  if (best_inside_energy > 0.0 && vacuum_width > 0.0) {
    report.compression_factor = best_inside_width / vacuum_width;
  }
  report.final_grid = std::move(grid);
  return report;
}

namespace {

double bright_state_decay(const ModelParams& params,
                          const std::vector<Complex>& controls) {
  double omega_sq = 0.0;
  for (const Complex& c : controls) omega_sq += std::norm(c);
  if (omega_sq <= 0.0) {
    throw std::invalid_argument("bright-state decay undefined for zero controls");
  }
  double gamma = 0.0;
  for (int q = 0; q < params.num_modes; ++q) {
    gamma += params.gamma[static_cast<size_t>(q)] *
             std::norm(controls[static_cast<size_t>(q)]) / omega_sq;
  }
  return gamma;
}

}  // namespace

std::vector<Complex> susceptibility(const ModelParams& params,
                                    const std::vector<Complex>& controls,
                                    const std::vector<double>& delta_grid) {
  params.validate();
  const OpticalBasis optical = optical_transform(params, controls);
  const double g = std::abs(optical.g_eff);
  const double omega_sq = g * g * optical.r_norm * optical.r_norm;  // Omega^2
  const double gamma = bright_state_decay(params, controls);
  const double n = static_cast<double>(params.num_atoms);
  // Reference: bare two-level resonance (Omega = 0, delta = Delta = 0) where
  // the formula reduces to N g^2 / (i gamma / 2); normalize to |chi| = 1
  // there. With gamma = 0 there is no absorption scale; fall back to N g^2.
  const double scale = gamma > 0.0 ? 2.0 * n * g * g / gamma : n * g * g;

  std::vector<Complex> chi;
  chi.reserve(delta_grid.size());
  for (double delta : delta_grid) {
    const double two_photon = params.Delta - delta;
    const Complex denom =
        two_photon * Complex(delta, 0.5 * gamma) + Complex(omega_sq, 0.0);
    chi.push_back(n * g * g * two_photon / denom / scale);
  }
  return chi;
}

double transparency_fwhm(const ModelParams& params,
                         const std::vector<Complex>& controls) {
  params.validate();
  const OpticalBasis optical = optical_transform(params, controls);
  const double omega = std::abs(optical.g_eff) * optical.r_norm;
  const double gamma = bright_state_decay(params, controls);
  if (gamma <= 0.0) {
    throw std::invalid_argument("transparency_fwhm: needs gamma > 0");
  }
  const double x = 4.0 * omega / gamma;
  return 0.5 * gamma * (std::sqrt(x * x + 1.0) - 1.0);
}

GroupVelocity group_velocity(const ModelParams& params,
                             const std::vector<Complex>& controls) {
  params.validate();
  const OpticalBasis optical = optical_transform(params, controls);
  GroupVelocity result;
  result.group_index =
      static_cast<double>(params.num_atoms) / (optical.r_norm * optical.r_norm);
  result.v_g = kSpeedOfLight / (1.0 + result.group_index);
  return result;
}

double measure_transmission(const ModelParams& params, double control_amplitude,
                            double delta, const TransmissionScanConfig& config) {
  if (config.pulse_rms_time <= 0.0 || config.medium_length <= 0.0 ||
      config.dz <= 0.0 || config.optical_depth <= 0.0) {
    throw std::invalid_argument("measure_transmission: invalid scan configuration");
  }
  ModelParams scan = params;
  scan.delta = delta;

  std::vector<Complex> controls(static_cast<size_t>(scan.num_modes), Complex(0.0));
  controls[0] = Complex(control_amplitude, 0.0);

  // Atom number fixed by the requested on-resonance optical depth
  // d0 = 4 N g_eff^2 L / (gamma c).
  double g_eff_sq;
  double gamma;
  Eigen::VectorXcd injection(scan.num_modes);
  if (control_amplitude > 0.0) {
    const OpticalBasis optical = optical_transform(scan, controls);
    g_eff_sq = std::norm(optical.g_eff);
    gamma = bright_state_decay(scan, controls);
    // A pulse "in the EIT mode": a_q proportional to W(:,Q).
    injection = optical.bq_coeffs.conjugate();
  } else {
    g_eff_sq = std::norm(scan.g[0]);
    gamma = scan.gamma[0];
    injection = Eigen::VectorXcd::Zero(scan.num_modes);
    injection(0) = Complex(1.0, 0.0);
  }
  if (gamma <= 0.0) {
    throw std::invalid_argument("measure_transmission: needs gamma > 0");
  }
  const double length = config.medium_length;
  const double atom_number =
      config.optical_depth * gamma * kSpeedOfLight / (4.0 * g_eff_sq * length);

  const double sigma_z = kSpeedOfLight * config.pulse_rms_time;
  const double lead = 8.0 * sigma_z;

  MediumSpec medium;
  medium.medium_start = lead;
  medium.medium_length = length;
  medium.window_length = lead + length + 8.0 * sigma_z;
  medium.grid_points = static_cast<int>(std::ceil(medium.window_length / config.dz)) + 1;
  medium.atom_number = atom_number;

  std::vector<GaussianPulseSpec> pulses;
  for (int q = 1; q <= scan.num_modes; ++q) {
    const Complex amp = injection(q - 1);
    if (std::abs(amp) == 0.0) continue;
    pulses.push_back({q, amp, 4.0 * sigma_z, sigma_z});
  }

  const double group_index =
      control_amplitude > 0.0
          ? atom_number * g_eff_sq / (control_amplitude * control_amplitude)
          : 0.0;
  PulseExperimentConfig run;
  run.duration = (4.0 * sigma_z + length) / kSpeedOfLight +
                 group_index * length / kSpeedOfLight + 8.0 * sigma_z;
  run.track_polariton = false;
  run.record_every = 1 << 20;  // diagnostics not needed for a transmission scan

  const ControlSchedule schedule = ControlSchedule::constant(controls);
  const PropagationReport report =
      run_pulse_experiment(medium, scan, schedule, pulses, run);

  double in = 0.0, out = 0.0;
  for (int q = 0; q < scan.num_modes; ++q) {
    in += report.input_energy[static_cast<size_t>(q)];
    out += report.output_energy[static_cast<size_t>(q)];
  }
  return out / in;
}

double measure_transparency_fwhm(const ModelParams& params,
                                 double control_amplitude,
                                 const TransmissionScanConfig& config) {
  if (control_amplitude <= 0.0) {
    throw std::invalid_argument("measure_transparency_fwhm: needs Omega > 0");
  }
  const double bare_absorption =
      -std::log(measure_transmission(params, 0.0, 0.0, config));
  const double target = 0.5 * bare_absorption;

  auto absorption = [&](double delta) {
    return -std::log(measure_transmission(params, control_amplitude, delta, config));
  };

  // The absorption exponent rises monotonically from ~0 at delta = 0 to the
  // Autler-Townes peak; bracket the half-crossing, then bisect.
  std::vector<Complex> controls(static_cast<size_t>(params.num_modes), Complex(0.0));
  controls[0] = Complex(control_amplitude, 0.0);
  double hi = 0.5 * transparency_fwhm(params, controls);
  double lo = 0.0;
  double a_hi = absorption(hi);
  int guard = 0;
  while (a_hi < target && guard++ < 12) {
    lo = hi;
    hi *= 1.6;
    a_hi = absorption(hi);
  }
  if (a_hi < target) {
    throw NumericalError("measure_transparency_fwhm: failed to bracket the window edge");
  }
  for (int iter = 0; iter < 11; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (absorption(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo + hi;  // 2 * delta_half
}

}  // namespace ratos
