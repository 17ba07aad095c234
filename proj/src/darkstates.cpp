#include "ratos/darkstates.hpp"

#include <cmath>
#include <map>

namespace ratos {

Eigen::VectorXcd symmetric_ground_state(const SymmetricBasis& basis, int k) {
  if (k < 0 || k > basis.spec.num_atoms) {
    throw std::invalid_argument("symmetric_ground_state: k out of range");
  }
  Occupation occ(static_cast<size_t>(1 + 2 * basis.spec.num_modes), 0);
  occ[0] = k;
  const auto idx = basis.find(occ);
  if (!idx) {
    throw std::invalid_argument(
        "symmetric_ground_state: |C^k, vacuum> lies outside this sector "
        "(needs k equal to the sector excitation)");
  }
  Eigen::VectorXcd state = Eigen::VectorXcd::Zero(basis.dimension());
  state(*idx) = Complex(1.0, 0.0);
  return state;
}

DarkState dark_state(const ModelParams& params,
                     const std::vector<Complex>& controls,
                     const SymmetricBasis& basis, int n,
                     bool allow_zero_controls) {
  params.validate();
  if (static_cast<int>(controls.size()) != params.num_modes) {
    throw std::invalid_argument("dark_state: controls must have Q entries");
  }
  if (n < 0 || n != basis.spec.excitation) {
    throw std::invalid_argument("dark_state: n must equal the sector excitation");
  }
  double omega_sq = 0.0;
  for (const Complex& c : controls) omega_sq += std::norm(c);
  if (omega_sq == 0.0 && !allow_zero_controls) {
    throw std::invalid_argument(
        "dark_state: all controls are zero; pass allow_zero_controls to take "
        "the stored-state limit |C^n, vacuum>");
  }

  const int q_count = params.num_modes;
  const Level b = Level::b();
  const Level c = Level::c();

  // Iterated application of the creation operator in the occupation basis.
  // Intermediate states live in lower-excitation sectors, so amplitudes are
  // tracked in a tuple-indexed map rather than through sector matrices.
  std::map<Occupation, Complex> amps;
  amps.emplace(Occupation(static_cast<size_t>(1 + 2 * q_count), 0),
               Complex(1.0, 0.0));
  for (int step = 0; step < n; ++step) {
    std::map<Occupation, Complex> next;
    for (const auto& [occ, amp] : amps) {
      if (auto flip = apply_collective_flip(basis, occ, b, c)) {
        next[flip->first] += amp * flip->second;
      }
      for (int q = 1; q <= q_count; ++q) {
        const Complex ratio = controls[static_cast<size_t>(q - 1)] /
                              params.g[static_cast<size_t>(q - 1)];
        if (ratio == Complex(0.0, 0.0)) continue;
        auto raised = apply_mode_raising(basis, occ, q);
        next[raised.first] -= amp * ratio * raised.second;
      }
    }
    amps = std::move(next);
  }

  DarkState dark;
  dark.excitation = n;
  dark.amplitudes = Eigen::VectorXcd::Zero(basis.dimension());
  for (const auto& [occ, amp] : amps) {
    const auto idx = basis.find(occ);
    if (!idx) {
      throw std::invalid_argument(
          "dark_state: construction left the basis (per-mode Fock cutoff "
          "below the excitation number)");
    }
    dark.amplitudes(*idx) = amp;
  }
  dark.norm_factor = dark.amplitudes.norm();
  if (dark.norm_factor <= 0.0) {
    throw std::invalid_argument("dark_state: construction produced the zero vector");
  }
  dark.amplitudes /= dark.norm_factor;
  return dark;
}

double dark_overlap(const Eigen::VectorXcd& state, const ModelParams& params,
                    const std::vector<Complex>& controls,
                    const SymmetricBasis& basis) {
  if (state.size() != basis.dimension()) {
    throw std::invalid_argument("dark_overlap: state dimension mismatch");
  }
  if (std::abs(state.norm() - 1.0) > 1e-6) {
    throw std::invalid_argument("dark_overlap: state is not unit norm");
  }
  const DarkState dark =
      dark_state(params, controls, basis, basis.spec.excitation, true);
  return std::norm(dark.amplitudes.dot(state));
}

}  // namespace ratos
