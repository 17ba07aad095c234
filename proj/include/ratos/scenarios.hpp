#pragma once

#include <optional>

#include "ratos/model.hpp"
#include "ratos/propagation.hpp"

namespace ratos {

// Composed pulse experiments shared by the CLI and the acceptance suite.
// Geometry and timings are derived from the physics (group velocity, pulse
// width) rather than hand-tuned per run.

struct SlowdownSetup {
  double omega = 2.0;          // control amplitude, mode 1
  double pulse_rms_time = 20.0;
  double medium_length = 1.0;
  double dz = 0.05;
};

struct SlowdownResult {
  double measured_delay = 0.0;     // medium vs vacuum peak arrival at probe
  double measured_vg = 0.0;
  double predicted_vg = 0.0;
  double group_index = 0.0;
  double transmitted_fraction = 0.0;
};

SlowdownResult run_slowdown(const ModelParams& params, const SlowdownSetup& setup);

struct StorageSetup {
  double omega = 5.0;
  int store_mode = 1;
  int retrieve_mode = 2;
  double pulse_rms_time = 100.0;
  double medium_length = 40.0;
  double dz = 0.25;
  double ramp_duration = 15.0;
  double hold_duration = 40.0;
};

struct StorageResult {
  double input_energy = 0.0;
  double output_energy = 0.0;
  double retrieved_fraction = 0.0;      // output / input
  double retrieve_mode_fraction = 0.0;  // retrieve-mode share of the output
  double held_field_energy = 0.0;       // field energy mid-hold
  double held_spin_energy = 0.0;        // spin-wave energy mid-hold
  std::optional<double> compression_factor;
  double predicted_compression = 0.0;   // v_g / c
  double polariton_drift = 0.0;         // relative |Psi|^2 change, entry vs exit
  PropagationReport report;
};

StorageResult run_storage_cycle(const ModelParams& params, const StorageSetup& setup);

struct ConversionSetup {
  double omega = 5.0;
  int mode_in = 1;
  int mode_out = 2;
  double pulse_rms_time = 100.0;
  double medium_length = 40.0;
  double dz = 0.25;
  double fade_duration = 30.0;
};

struct ConversionResult {
  double input_energy = 0.0;
  double output_energy = 0.0;
  double output_mode_fraction = 0.0;  // mode_out share of the output energy
  double total_transmission = 0.0;
  double shape_overlap = 0.0;         // output probe profile vs input Gaussian
  PropagationReport report;
};

ConversionResult run_conversion(const ModelParams& params,
                                const ConversionSetup& setup);

}  // namespace ratos
