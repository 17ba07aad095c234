#pragma once

#include <optional>
#include <vector>

#include "ratos/common.hpp"
#include "ratos/model.hpp"
#include "ratos/transforms.hpp"

namespace ratos {

/// 1-D simulation window with a uniform atomic medium embedded in vacuum.
/// Lengths in c/gamma_ref; the envelope speed is kSpeedOfLight = 1.
struct MediumSpec {
  double window_length = 0.0;
  int grid_points = 0;
  double medium_start = 0.0;
  double medium_length = 0.0;
  double atom_number = 0.0;  // N appearing in the field source term
  double courant = 1.0;      // c dt / dz; 1 makes transport an exact shift

  double dz() const { return window_length / (grid_points - 1); }
  double dt() const { return courant * dz() / kSpeedOfLight; }
  bool in_medium(double z) const {
    return z >= medium_start && z <= medium_start + medium_length;
  }
  void validate() const;
};

/// Signal envelopes and mean-field coherences on the grid. sigma_ba[q] and
/// sigma_bc are zero outside the medium.
struct FieldGrid {
  int num_modes = 0;
  std::vector<double> z;
  std::vector<Eigen::VectorXcd> field;     // per mode, window-wide
  std::vector<Eigen::VectorXcd> sigma_ba;  // per mode
  Eigen::VectorXcd sigma_bc;

  static FieldGrid zero(const MediumSpec& medium, int num_modes);
  double field_energy(int mode) const;     // integral |a_q|^2 dz
  double total_field_energy() const;
};

struct GaussianPulseSpec {
  int mode = 1;
  Complex amplitude{1.0, 0.0};
  double center = 0.0;     // z position of the peak
  double rms_width = 1.0;  // spatial sigma of the field envelope
};

/// Injects Gaussian envelopes as an initial condition (pulses must sit in
/// the vacuum region).
void add_pulses(FieldGrid& grid, const MediumSpec& medium,
                const std::vector<GaussianPulseSpec>& pulses);

/// One Strang-split step of the Maxwell-Bloch system
///   (d_t + c d_z) a_q   = i N g_q^* sigma_BA_q
///   d_t sigma_BA_q      = i g_q a_q + i Omega_q sigma_BC - (gamma_q/2 + i delta) sigma_BA_q
///   d_t sigma_BC        = i sum_q Omega_q^* sigma_BA_q - i (delta - Delta) sigma_BC
/// with upwind transport and an exact per-cell exponential for the local
/// source system. Controls are held fixed across the step.
FieldGrid step_maxwell_bloch(const FieldGrid& grid, const MediumSpec& medium,
                             const ModelParams& params,
                             const std::vector<Complex>& controls, double dt);

/// Field/spin composition of the propagating excitation,
/// Psi = cos(theta) b_Q - sin(theta) sqrt(N) sigma_BC, tan(theta) = sqrt(N)/R.
struct Polariton {
  double mixing_angle = 0.0;        // theta
  Eigen::VectorXcd bq_field;        // EIT-mode envelope b_Q(z)
  Eigen::VectorXcd psi;             // polariton amplitude
  Eigen::VectorXd bright_power;     // sum_q |a_q|^2 - |b_Q|^2 per cell
  double psi_norm_sq = 0.0;         // integral |Psi|^2 dz
};

Polariton polariton_decompose(const FieldGrid& grid, const MediumSpec& medium,
                              const ModelParams& params,
                              const std::vector<Complex>& controls);

/// Variant with an explicitly supplied EIT-mode composition, for storage
/// intervals where all controls are zero and the transform is frozen.
Polariton polariton_decompose(const FieldGrid& grid, const MediumSpec& medium,
                              const ModelParams& params,
                              const Eigen::VectorXcd& bq_coeffs, double r_norm);

struct PropagationReport {
  std::vector<double> input_energy;    // per mode, integral |a_q|^2 dz at t=0
  std::vector<double> output_energy;   // per mode, at the final time
  std::vector<double> peak_arrival;    // per mode, time of |a_q| maximum at probe
  double probe_position = 0.0;
  std::vector<double> probe_times;
  std::vector<Eigen::VectorXd> probe_flux;  // per mode, |a_q(probe, t)|
  std::optional<double> compression_factor;  // medium/vacuum rms width ratio
  std::vector<double> record_times;
  std::vector<double> polariton_norm_sq;     // integral |Psi|^2 dz at records
  std::vector<double> total_excitation;      // conserved quadratic form
  std::vector<double> field_energy_record;   // total field energy at records
  std::vector<double> spin_energy_record;    // N integral (|s_BC|^2 + sum |s_q|^2) dz
  FieldGrid final_grid;
};

struct PulseExperimentConfig {
  double duration = 0.0;
  double probe_position = -1.0;  // < 0 puts the probe just past the medium
  int record_every = 16;         // steps between polariton/conservation records
  bool track_polariton = true;
};

/// Full simulation: inject pulses, run the schedule, collect energies,
/// arrival times, compression and polariton diagnostics.
PropagationReport run_pulse_experiment(const MediumSpec& medium,
                                       const ModelParams& params,
                                       const ControlSchedule& schedule,
                                       const std::vector<GaussianPulseSpec>& pulses,
                                       const PulseExperimentConfig& config);

/// EIT-mode susceptibility
///   chi(delta) = N g^2 (Delta - delta) / [(Delta - delta)(delta + i gamma/2) + Omega^2]
/// normalized so that |chi| = 1 at the bare-resonance reference (delta =
/// Delta = 0, Omega = 0), where the formula reduces to -i. gamma is the
/// decay rate of the excited bright state, sum_q |Omega_q/Omega|^2 gamma_q.
std::vector<Complex> susceptibility(const ModelParams& params,
                                    const std::vector<Complex>& controls,
                                    const std::vector<double>& delta_grid);

/// Width of the transparency window between the half-absorption points,
/// (gamma/2) (sqrt((4 Omega/gamma)^2 + 1) - 1).
double transparency_fwhm(const ModelParams& params,
                         const std::vector<Complex>& controls);

struct GroupVelocity {
  double v_g = 0.0;
  double group_index = 0.0;  // n_g = N / R^2
};

GroupVelocity group_velocity(const ModelParams& params,
                             const std::vector<Complex>& controls);

/// Energy transmission of a narrowband pulse at signal detuning delta,
/// measured by a full propagation run. Used for scanned window widths.
struct TransmissionScanConfig {
  double pulse_rms_time = 50.0;
  double optical_depth = 5.0;   // sets N g^2 L of the scan medium
  double medium_length = 5.0;
  double dz = 0.1;
};

double measure_transmission(const ModelParams& params, double control_amplitude,
                            double delta, const TransmissionScanConfig& config);

/// Half-width of the transparency window measured from transmission scans:
/// bisects for the detuning where the absorption exponent reaches half its
/// bare-resonance value and returns the full width 2*delta_half.
double measure_transparency_fwhm(const ModelParams& params,
                                 double control_amplitude,
                                 const TransmissionScanConfig& config);

}  // namespace ratos
