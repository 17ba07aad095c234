#pragma once

#include <vector>

#include "ratos/common.hpp"
#include "ratos/darkstates.hpp"
#include "ratos/hilbert.hpp"
#include "ratos/model.hpp"

namespace ratos {

struct EvolutionConfig {
  double t_start = 0.0;
  double t_end = 0.0;
  double dt = 0.0;  // <= 0 picks a step from the fastest coupling scale
  enum class Integrator { FixedRk4, Adaptive } integrator = Integrator::FixedRk4;
  double tolerance = 1e-10;  // adaptive local error per unit time
  int record_every = 1;      // steps between snapshots
  bool record_states = true;
  bool record_dark_overlap = true;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> states;   // empty unless record_states
  std::vector<double> norms;
  std::vector<std::vector<double>> mode_populations;  // [snapshot][mode]
  std::vector<double> dark_overlaps;      // empty unless record_dark_overlap

  const Eigen::VectorXcd& final_state() const { return states.back(); }
};

/// Integrates i d|psi>/dt = H_eff(t)|psi> with H_eff from
/// effective_nonhermitian at the schedule's instantaneous controls.
/// With all gamma zero the norm is a quality gate: drift beyond 1e-6 aborts
/// (step size too large); no renormalization is ever applied.
Trajectory evolve(const ModelParams& params, const ControlSchedule& schedule,
                  const SymmetricBasis& basis,
                  const Eigen::VectorXcd& initial, const EvolutionConfig& config);

struct TransferReport {
  double fidelity = 0.0;   // |<D_j,n|psi_final>|^2
  double absorbed = 0.0;   // 1 - ||psi_final||^2
  Trajectory trajectory;
};

/// RATOS in the discrete-mode sector: prepare the dark state with only
/// Omega_i on, cross-fade the controls to mode j over fade_duration, and
/// score the result against the dark state with only Omega_j on.
TransferReport run_ratos(const ModelParams& params, const SymmetricBasis& basis,
                         int n, int mode_i, int mode_j, double omega_amplitude,
                         double fade_duration, const EvolutionConfig& config);

struct SweepRow {
  double fade_duration = 0.0;
  double fidelity = 0.0;
  double absorbed = 0.0;
};

std::vector<SweepRow> adiabaticity_sweep(const ModelParams& params,
                                         const SymmetricBasis& basis, int n,
                                         int mode_i, int mode_j,
                                         double omega_amplitude,
                                         const std::vector<double>& fade_durations,
                                         const EvolutionConfig& config);

}  // namespace ratos
