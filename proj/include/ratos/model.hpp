#pragma once

#include <vector>

#include "ratos/common.hpp"
#include "ratos/hilbert.hpp"

namespace ratos {

/// Physical parameters of the multi-lambda ensemble. All rates are in units
/// of a reference decay rate gamma_ref and times in 1/gamma_ref (hbar = 1).
struct ModelParams {
  int num_modes = 1;             // Q
  int num_atoms = 1;             // N
  std::vector<Complex> g;        // vacuum Rabi frequency per transition
  std::vector<double> gamma;     // decay rate of |A_q>
  double delta = 0.0;            // signal detuning (same for all modes)
  double Delta = 0.0;            // control detuning (same for all modes)

  void validate() const;
};

/// Piecewise control envelopes Omega_q(t), built from constant segments and
/// cosine ramps. Outside all segments the value is held from the nearest
/// segment edge, so every mode is C0 by construction as long as consecutive
/// segments agree at their joints (checked by validate()).
class ControlSchedule {
 public:
  struct Segment {
    enum class Kind { Constant, RampOn, RampOff };
    double t0 = 0.0;
    double t1 = 0.0;
    Kind kind = Kind::Constant;
    Complex amplitude;  // plateau value; ramps go 0 <-> amplitude
  };

  explicit ControlSchedule(int num_modes);

  /// All modes constant for all times.
  static ControlSchedule constant(const std::vector<Complex>& amplitudes);

  void add_constant(int mode, double t0, double t1, Complex amplitude);
  /// amplitude * sin(pi/2 * (t-t0)/T): 0 at t0, full at t1.
  void add_ramp_on(int mode, double t0, double t1, Complex amplitude);
  /// amplitude * cos(pi/2 * (t-t0)/T): full at t0, 0 at t1.
  void add_ramp_off(int mode, double t0, double t1, Complex amplitude);
  /// Cosine cross-fade: mode_i ramps off while mode_j ramps on over
  /// [t0, t0+duration]. Keeps sum |Omega_q/g_q|^2 constant when g_i = g_j
  /// and the amplitudes match.
  void add_cross_fade(int mode_i, int mode_j, double t0, double duration,
                      Complex amplitude_i, Complex amplitude_j);

  Complex evaluate(int mode, double t) const;
  std::vector<Complex> evaluate(double t) const;

  int num_modes() const { return static_cast<int>(segments_.size()); }

  /// Checks segment ordering and C0 continuity at every joint.
  void validate() const;

  const std::vector<Segment>& mode_segments(int mode) const;

 private:
  std::vector<std::vector<Segment>> segments_;  // per mode, time-ordered
};

/// Resonant interaction Hamiltonian on the symmetric sector:
///   H = -sum_q [ g_q a_q Flip(B->A_q) + Omega_q Flip(C->A_q) ] + h.c.
/// Hermitian by construction.
SparseOperator build_interaction_hamiltonian(const ModelParams& params,
                                             const std::vector<Complex>& controls,
                                             const SymmetricBasis& basis);

/// Interaction part plus the rotating-frame detuning diagonal
/// -(delta/2) N_B - (Delta/2) N_C.
SparseOperator build_full_hamiltonian(const ModelParams& params,
                                      const std::vector<Complex>& controls,
                                      const SymmetricBasis& basis);

/// Full Hamiltonian minus (i/2) sum_q gamma_q N_{A_q}. Evolving with this
/// operator, the norm loss of a state equals its cumulative absorption
/// probability (no-jump convention).
SparseOperator effective_nonhermitian(const ModelParams& params,
                                      const std::vector<Complex>& controls,
                                      const SymmetricBasis& basis);

}  // namespace ratos
