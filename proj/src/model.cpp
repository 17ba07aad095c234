#include "ratos/model.hpp"

#include <algorithm>
#include <cmath>

namespace ratos {

void ModelParams::validate() const {
  if (num_modes <= 0) throw std::invalid_argument("ModelParams: Q must be positive");
  if (num_atoms <= 0) throw std::invalid_argument("ModelParams: N must be positive");
  if (static_cast<int>(g.size()) != num_modes) {
    throw std::invalid_argument("ModelParams: g must have Q entries");
  }
  if (static_cast<int>(gamma.size()) != num_modes) {
    throw std::invalid_argument("ModelParams: gamma must have Q entries");
  }
  for (const Complex& gq : g) {
    if (std::abs(gq) <= 0.0) {
      throw std::invalid_argument("ModelParams: |g_q| must be positive");
    }
  }
  for (double gq : gamma) {
    if (gq < 0.0) throw std::invalid_argument("ModelParams: gamma_q must be >= 0");
  }
}

ControlSchedule::ControlSchedule(int num_modes) {
  if (num_modes <= 0) {
    throw std::invalid_argument("ControlSchedule: num_modes must be positive");
  }
  segments_.resize(static_cast<size_t>(num_modes));
}

ControlSchedule ControlSchedule::constant(const std::vector<Complex>& amplitudes) {
  ControlSchedule schedule(static_cast<int>(amplitudes.size()));
  for (size_t q = 0; q < amplitudes.size(); ++q) {
    schedule.add_constant(static_cast<int>(q) + 1, 0.0, 0.0, amplitudes[q]);
  }
  return schedule;
}

namespace {
void check_window(double t0, double t1) {
  if (t1 < t0) throw std::invalid_argument("ControlSchedule: segment with t1 < t0");
}
}  // namespace

void ControlSchedule::add_constant(int mode, double t0, double t1,
                                   Complex amplitude) {
  check_window(t0, t1);
  mode_segments(mode);  // bounds check
  segments_[static_cast<size_t>(mode - 1)].push_back(
      {t0, t1, Segment::Kind::Constant, amplitude});
}

void ControlSchedule::add_ramp_on(int mode, double t0, double t1,
                                  Complex amplitude) {
  check_window(t0, t1);
  mode_segments(mode);
  segments_[static_cast<size_t>(mode - 1)].push_back(
      {t0, t1, Segment::Kind::RampOn, amplitude});
}

void ControlSchedule::add_ramp_off(int mode, double t0, double t1,
                                   Complex amplitude) {
  check_window(t0, t1);
  mode_segments(mode);
  segments_[static_cast<size_t>(mode - 1)].push_back(
      {t0, t1, Segment::Kind::RampOff, amplitude});
}

void ControlSchedule::add_cross_fade(int mode_i, int mode_j, double t0,
                                     double duration, Complex amplitude_i,
                                     Complex amplitude_j) {
  if (mode_i == mode_j) {
    throw std::invalid_argument("ControlSchedule: cross-fade needs distinct modes");
  }
  add_ramp_off(mode_i, t0, t0 + duration, amplitude_i);
  add_ramp_on(mode_j, t0, t0 + duration, amplitude_j);
}

const std::vector<ControlSchedule::Segment>& ControlSchedule::mode_segments(
    int mode) const {
  if (mode < 1 || mode > num_modes()) {
    throw std::invalid_argument("ControlSchedule: mode index out of range");
  }
  return segments_[static_cast<size_t>(mode - 1)];
}

namespace {

Complex segment_value(const ControlSchedule::Segment& seg, double t) {
  using Kind = ControlSchedule::Segment::Kind;
  if (seg.kind == Kind::Constant) return seg.amplitude;
  const double width = seg.t1 - seg.t0;
  const double x = width > 0.0 ? std::clamp((t - seg.t0) / width, 0.0, 1.0)
                               : 1.0;
  const double half_pi = M_PI / 2.0;
  if (seg.kind == Kind::RampOn) return seg.amplitude * std::sin(half_pi * x);
  return seg.amplitude * std::cos(half_pi * x);
}

Complex segment_end_value(const ControlSchedule::Segment& seg) {
  using Kind = ControlSchedule::Segment::Kind;
  if (seg.kind == Kind::RampOff) return Complex(0.0, 0.0);
  return seg.amplitude;
}

Complex segment_start_value(const ControlSchedule::Segment& seg) {
  using Kind = ControlSchedule::Segment::Kind;
  if (seg.kind == Kind::RampOn) return Complex(0.0, 0.0);
  return seg.amplitude;
}

}  // namespace

Complex ControlSchedule::evaluate(int mode, double t) const {
  const auto& segs = mode_segments(mode);
  if (segs.empty()) return Complex(0.0, 0.0);
  if (t <= segs.front().t0) return segment_start_value(segs.front());
  Complex held = segment_end_value(segs.front());
  for (const Segment& seg : segs) {
    if (t < seg.t0) break;  // in a gap: hold previous end value
    if (t <= seg.t1) return segment_value(seg, t);
    held = segment_end_value(seg);
  }
  return held;
}

std::vector<Complex> ControlSchedule::evaluate(double t) const {
  std::vector<Complex> values(static_cast<size_t>(num_modes()));
  for (int q = 1; q <= num_modes(); ++q) {
    values[static_cast<size_t>(q - 1)] = evaluate(q, t);
  }
  return values;
}

void ControlSchedule::validate() const {
  constexpr double kTol = 1e-9;
  for (int q = 1; q <= num_modes(); ++q) {
    const auto& segs = mode_segments(q);
    for (size_t s = 0; s + 1 < segs.size(); ++s) {
      if (segs[s + 1].t0 < segs[s].t1 - kTol) {
        throw std::invalid_argument("ControlSchedule: overlapping segments");
      }
      const Complex left = segment_end_value(segs[s]);
      const Complex right = segment_start_value(segs[s + 1]);
      if (std::abs(left - right) > kTol * (1.0 + std::abs(left))) {
        throw std::invalid_argument("ControlSchedule: discontinuous joint");
      }
    }
  }
}

namespace {

void check_dimensions(const ModelParams& params,
                      const std::vector<Complex>& controls,
                      const SymmetricBasis& basis) {
  params.validate();
  if (static_cast<int>(controls.size()) != params.num_modes) {
    throw std::invalid_argument("controls must have Q entries");
  }
  if (basis.spec.num_modes != params.num_modes ||
      basis.spec.num_atoms != params.num_atoms) {
    throw std::invalid_argument("basis does not match model parameters");
  }
}

}  // namespace

SparseOperator build_interaction_hamiltonian(const ModelParams& params,
                                             const std::vector<Complex>& controls,
                                             const SymmetricBasis& basis) {
  check_dimensions(params, controls, basis);
  std::vector<Eigen::Triplet<Complex>> triplets;
  const Level b = Level::b();
  const Level c = Level::c();
  for (int j = 0; j < basis.dimension(); ++j) {
    const Occupation& occ = basis.state(j);
    for (int q = 1; q <= params.num_modes; ++q) {
      // -g_q a_q Flip(B->A_q): absorb a photon while exciting one atom.
      if (auto lower = apply_mode_lowering(basis, occ, q)) {
        if (auto flip = apply_collective_flip(basis, lower->first, b,
                                              Level::a(q))) {
          if (auto i = basis.find(flip->first)) {
            const Complex amp = -params.g[static_cast<size_t>(q - 1)] *
                                lower->second * flip->second;
            triplets.emplace_back(*i, j, amp);
            triplets.emplace_back(j, *i, std::conj(amp));
          }
        }
      }
      // -Omega_q Flip(C->A_q).
      if (auto flip = apply_collective_flip(basis, occ, c, Level::a(q))) {
        if (auto i = basis.find(flip->first)) {
          const Complex amp =
              -controls[static_cast<size_t>(q - 1)] * flip->second;
          triplets.emplace_back(*i, j, amp);
          triplets.emplace_back(j, *i, std::conj(amp));
        }
      }
    }
  }
  SparseOperator op(basis.dimension(), basis.dimension());
  op.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

SparseOperator build_full_hamiltonian(const ModelParams& params,
                                      const std::vector<Complex>& controls,
                                      const SymmetricBasis& basis) {
  SparseOperator h = build_interaction_hamiltonian(params, controls, basis);
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (int j = 0; j < basis.dimension(); ++j) {
    const Occupation& occ = basis.state(j);
    const double diag = -0.5 * params.delta * basis.atoms_in_b(occ) -
                        0.5 * params.Delta * basis.atoms_in_c(occ);
    if (diag != 0.0) triplets.emplace_back(j, j, Complex(diag, 0.0));
  }
  SparseOperator detuning(basis.dimension(), basis.dimension());
  detuning.setFromTriplets(triplets.begin(), triplets.end());
  return h + detuning;
}

SparseOperator effective_nonhermitian(const ModelParams& params,
                                      const std::vector<Complex>& controls,
                                      const SymmetricBasis& basis) {
  SparseOperator h = build_full_hamiltonian(params, controls, basis);
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (int j = 0; j < basis.dimension(); ++j) {
    const Occupation& occ = basis.state(j);
    double rate = 0.0;
    for (int q = 1; q <= params.num_modes; ++q) {
      rate += params.gamma[static_cast<size_t>(q - 1)] * basis.atoms_in_a(occ, q);
    }
    if (rate != 0.0) triplets.emplace_back(j, j, Complex(0.0, -0.5 * rate));
  }
  SparseOperator decay(basis.dimension(), basis.dimension());
  decay.setFromTriplets(triplets.begin(), triplets.end());
  return h + decay;
}

}  // namespace ratos
