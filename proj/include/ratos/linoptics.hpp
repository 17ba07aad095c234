#pragma once

#include <map>
#include <vector>

#include "ratos/common.hpp"

namespace ratos {

/// Multimode Fock state or sparse superposition over occupation vectors
/// (one entry per signal mode).
struct FockInput {
  int num_modes = 0;
  std::map<std::vector<int>, Complex> amplitudes;

  static FockInput fock(const std::vector<int>& occupation);
  static FockInput superposition(int num_modes,
                                 std::map<std::vector<int>, Complex> amps);

  double norm_sq() const;
  int max_photons() const;
  void validate() const;  // unit norm, finite photon number
};

/// In-coupling and out-coupling mode rotations of the equivalent
/// interferometer (optical_transform evaluated at the entry and exit control
/// settings).
struct ModeTransform {
  Eigen::MatrixXcd w_in;
  Eigen::MatrixXcd w_out;

  void validate() const;  // both unitary to 1e-12
};

/// Probability that every photon of `input` enters the EIT mode b_Q of
/// `w_in`; components with any photon in an absorbing mode count as lost.
double coupling_probability(const FockInput& input, const Eigen::MatrixXcd& w_in);

struct ControlSearchResult {
  double probability = 0.0;
  Eigen::VectorXcd control_ratios;  // Omega_q/g_q direction of the optimum
};

/// Grid search of coupling_probability over candidate EIT-mode compositions
/// (each grid entry is a unit vector of control ratios). Exact maximization
/// is out of scope; the result is the grid optimum.
ControlSearchResult max_coupling_over_controls(
    const FockInput& input, const std::vector<Eigen::VectorXcd>& ratio_grid);

/// Default grid for small Q: relative weights and phases on a uniform mesh.
std::vector<Eigen::VectorXcd> default_ratio_grid(int num_modes,
                                                 int points_per_angle = 25);

struct TransferResult {
  FockInput output;        // unnormalized; its norm^2 is the survival
  double absorbed = 0.0;   // 1 - survival
};

/// Ideal-absorber end-to-end map: keep the all-photons-in-b_Q components of
/// the input under w_in, carry them through storage, re-expand through the
/// b_Q column of w_out.
TransferResult end_to_end_transfer(const FockInput& input,
                                   const Eigen::MatrixXcd& w_in,
                                   const Eigen::MatrixXcd& w_out);

}  // namespace ratos
