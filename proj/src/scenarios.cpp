#include "ratos/scenarios.hpp"

#include <algorithm>
#include <cmath>

namespace ratos {

namespace {

std::vector<Complex> single_control(int num_modes, int mode, double omega) {
  std::vector<Complex> controls(static_cast<size_t>(num_modes), Complex(0.0));
  controls[static_cast<size_t>(mode - 1)] = Complex(omega, 0.0);
  return controls;
}

int grid_points_for(double window, double dz) {
  return static_cast<int>(std::ceil(window / dz)) + 1;
}

}  // namespace

SlowdownResult run_slowdown(const ModelParams& params, const SlowdownSetup& setup) {
  params.validate();
  if (setup.omega <= 0.0) {
    throw std::invalid_argument("run_slowdown: omega must be positive");
  }
  const std::vector<Complex> controls =
      single_control(params.num_modes, 1, setup.omega);
  const GroupVelocity predicted = group_velocity(params, controls);

  const double sigma_z = kSpeedOfLight * setup.pulse_rms_time;
  const double lead = 8.0 * sigma_z;
  const double length = setup.medium_length;

  MediumSpec medium;
  medium.medium_start = lead;
  medium.medium_length = length;
  medium.window_length = lead + length + 6.0 * sigma_z;
  medium.grid_points = grid_points_for(medium.window_length, setup.dz);
  medium.atom_number = static_cast<double>(params.num_atoms);

  std::vector<GaussianPulseSpec> pulses{{1, Complex(1.0, 0.0), 4.0 * sigma_z, sigma_z}};

  PulseExperimentConfig config;
  config.duration = (4.0 * sigma_z + length + 4.0 * sigma_z) / kSpeedOfLight +
                    predicted.group_index * length / kSpeedOfLight;
  config.track_polariton = false;
  config.record_every = 1 << 14;

  const ControlSchedule schedule = ControlSchedule::constant(controls);
  const PropagationReport with_atoms =
      run_pulse_experiment(medium, params, schedule, pulses, config);

  MediumSpec vacuum = medium;
  vacuum.atom_number = 0.0;
  PulseExperimentConfig vacuum_config = config;
  vacuum_config.duration = (4.0 * sigma_z + length + 4.0 * sigma_z) / kSpeedOfLight;
  const PropagationReport reference =
      run_pulse_experiment(vacuum, params, schedule, pulses, vacuum_config);

  SlowdownResult result;
  result.predicted_vg = predicted.v_g;
  result.group_index = predicted.group_index;
  result.measured_delay = with_atoms.peak_arrival[0] - reference.peak_arrival[0];
  // delay = L/v_g - L/c
  result.measured_vg =
      length / (length / kSpeedOfLight + result.measured_delay);
  result.transmitted_fraction =
      with_atoms.output_energy[0] / with_atoms.input_energy[0];
  return result;
}

StorageResult run_storage_cycle(const ModelParams& params,
                                const StorageSetup& setup) {
  params.validate();
  if (setup.store_mode < 1 || setup.store_mode > params.num_modes ||
      setup.retrieve_mode < 1 || setup.retrieve_mode > params.num_modes) {
    throw std::invalid_argument("run_storage_cycle: mode index out of range");
  }
  const std::vector<Complex> store_controls =
      single_control(params.num_modes, setup.store_mode, setup.omega);
  const GroupVelocity slow = group_velocity(params, store_controls);

  const double sigma_z = kSpeedOfLight * setup.pulse_rms_time;
  const double lead = 8.0 * sigma_z;
  const double length = setup.medium_length;
  const double tail = 9.0 * sigma_z;

  MediumSpec medium;
  medium.medium_start = lead;
  medium.medium_length = length;
  medium.window_length = lead + length + tail;
  medium.grid_points = grid_points_for(medium.window_length, setup.dz);
  medium.atom_number = static_cast<double>(params.num_atoms);

  const double pulse_center = 4.0 * sigma_z;
  std::vector<GaussianPulseSpec> pulses{
      {setup.store_mode, Complex(1.0, 0.0), pulse_center, sigma_z}};

  // Switch the control off once the pulse center has reached mid-medium.
  const double t_reach_medium = (lead - pulse_center) / kSpeedOfLight;
  const double t_off = t_reach_medium + 0.5 * length / slow.v_g;
  const double t_on = t_off + setup.ramp_duration + setup.hold_duration;
  const double t_exit = t_on + setup.ramp_duration +
                        0.5 * length / slow.v_g + (tail + 2.0 * sigma_z) / kSpeedOfLight;

  ControlSchedule schedule(params.num_modes);
  schedule.add_constant(setup.store_mode, 0.0, t_off, Complex(setup.omega, 0.0));
  schedule.add_ramp_off(setup.store_mode, t_off, t_off + setup.ramp_duration,
                        Complex(setup.omega, 0.0));
  schedule.add_ramp_on(setup.retrieve_mode, t_on, t_on + setup.ramp_duration,
                       Complex(setup.omega, 0.0));
  schedule.validate();

  PulseExperimentConfig config;
  config.duration = t_exit;
  config.record_every = 32;
  config.track_polariton = true;

  StorageResult result;
  result.report = run_pulse_experiment(medium, params, schedule, pulses, config);
  const PropagationReport& report = result.report;

  result.input_energy = 0.0;
  result.output_energy = 0.0;
  for (double e : report.input_energy) result.input_energy += e;
  for (double e : report.output_energy) result.output_energy += e;
  result.retrieved_fraction = result.output_energy / result.input_energy;
  result.retrieve_mode_fraction =
      report.output_energy[static_cast<size_t>(setup.retrieve_mode - 1)] /
      result.output_energy;

  // Mid-hold diagnostics: the light should be gone and the excitation
  // parked in the spin wave.
  const double t_mid_hold = t_off + setup.ramp_duration + 0.5 * setup.hold_duration;
  size_t mid = 0;
  for (size_t i = 0; i < report.record_times.size(); ++i) {
    if (std::abs(report.record_times[i] - t_mid_hold) <
        std::abs(report.record_times[mid] - t_mid_hold)) {
      mid = i;
    }
  }
  result.held_field_energy = report.field_energy_record[mid];
  result.held_spin_energy = report.spin_energy_record[mid];

  result.compression_factor = report.compression_factor;
  result.predicted_compression = slow.v_g / kSpeedOfLight;

  // Polariton conservation: compare |Psi|^2 just after entry with just
  // before exit (both with the pulse fully inside, controls on).
  if (!report.polariton_norm_sq.empty()) {
    const double entry_t = t_off - 1.0;
    const double exit_t = t_on + setup.ramp_duration + 1.0;
    auto norm_at = [&](double t) {
      size_t best = 0;
      for (size_t i = 0; i < report.record_times.size(); ++i) {
        if (std::abs(report.record_times[i] - t) <
            std::abs(report.record_times[best] - t)) {
          best = i;
        }
      }
      return report.polariton_norm_sq[best];
    };
    const double before = norm_at(entry_t);
    const double after = norm_at(exit_t);
    result.polariton_drift = std::abs(after - before) / before;
  }
  return result;
}

ConversionResult run_conversion(const ModelParams& params,
                                const ConversionSetup& setup) {
  params.validate();
  if (setup.mode_in == setup.mode_out) {
    throw std::invalid_argument("run_conversion: modes must differ");
  }
  if (setup.mode_in < 1 || setup.mode_in > params.num_modes ||
      setup.mode_out < 1 || setup.mode_out > params.num_modes) {
    throw std::invalid_argument("run_conversion: mode index out of range");
  }
  const std::vector<Complex> in_controls =
      single_control(params.num_modes, setup.mode_in, setup.omega);
  const GroupVelocity slow = group_velocity(params, in_controls);

  const double sigma_z = kSpeedOfLight * setup.pulse_rms_time;
  const double lead = 8.0 * sigma_z;
  const double length = setup.medium_length;
  const double tail = 9.0 * sigma_z;

  MediumSpec medium;
  medium.medium_start = lead;
  medium.medium_length = length;
  medium.window_length = lead + length + tail;
  medium.grid_points = grid_points_for(medium.window_length, setup.dz);
  medium.atom_number = static_cast<double>(params.num_atoms);

  const double pulse_center = 4.0 * sigma_z;
  std::vector<GaussianPulseSpec> pulses{
      {setup.mode_in, Complex(1.0, 0.0), pulse_center, sigma_z}};

  const double t_reach_medium = (lead - pulse_center) / kSpeedOfLight;
  const double t_fade = t_reach_medium + 0.5 * length / slow.v_g -
                        0.5 * setup.fade_duration;
  const double t_exit = t_fade + setup.fade_duration + 0.5 * length / slow.v_g +
                        (tail + 2.0 * sigma_z) / kSpeedOfLight;

  ControlSchedule schedule(params.num_modes);
  schedule.add_constant(setup.mode_in, 0.0, t_fade, Complex(setup.omega, 0.0));
  schedule.add_cross_fade(setup.mode_in, setup.mode_out, t_fade,
                          setup.fade_duration, Complex(setup.omega, 0.0),
                          Complex(setup.omega, 0.0));
  schedule.validate();

  PulseExperimentConfig config;
  config.duration = t_exit;
  config.record_every = 32;
  config.track_polariton = true;

  ConversionResult result;
  result.report = run_pulse_experiment(medium, params, schedule, pulses, config);
  const PropagationReport& report = result.report;

  result.input_energy = 0.0;
  result.output_energy = 0.0;
  for (double e : report.input_energy) result.input_energy += e;
  for (double e : report.output_energy) result.output_energy += e;
  result.total_transmission = result.output_energy / result.input_energy;
  result.output_mode_fraction =
      report.output_energy[static_cast<size_t>(setup.mode_out - 1)] /
      result.output_energy;

  // Temporal shape check at the probe: normalized overlap between the
  // outgoing envelope in mode_out and the input Gaussian, maximized over the
  // arrival delay.
  const Eigen::VectorXd& out = report.probe_flux[static_cast<size_t>(setup.mode_out - 1)];
  const double dt = report.probe_times[1] - report.probe_times[0];
  const double t_peak = report.peak_arrival[static_cast<size_t>(setup.mode_out - 1)];
  const double t_p = setup.pulse_rms_time;
  double best = 0.0;
  const double out_sq = out.squaredNorm();
  const double shift_step = std::max(0.5 * dt, t_p / 50.0);
  for (double shift = -1.5 * t_p; shift <= 1.5 * t_p; shift += shift_step) {
    double cross = 0.0;
    double ref_sq = 0.0;
    for (Eigen::Index s = 0; s < out.size(); ++s) {
      const double t = report.probe_times[static_cast<size_t>(s)];
      const double x = (t - t_peak - shift) / t_p;
      const double ref = std::exp(-0.5 * x * x);
      cross += ref * out(s);
      ref_sq += ref * ref;
    }
    if (ref_sq > 0.0 && out_sq > 0.0) {
      best = std::max(best, cross * cross / (ref_sq * out_sq));
    }
  }
  result.shape_overlap = best;
  return result;
}

}  // namespace ratos
