#pragma once

#include <vector>

#include "ratos/common.hpp"
#include "ratos/hilbert.hpp"
#include "ratos/model.hpp"

namespace ratos {

/// Zero-eigenvalue eigenstate of the interaction Hamiltonian at excitation n.
/// Has no excited-state component, so it is also decay-free.
struct DarkState {
  int excitation = 0;
  Eigen::VectorXcd amplitudes;   // on the SymmetricBasis it was built for
  double norm_factor = 0.0;      // norm of the unnormalized construction
};

/// Unit vector on the occupation tuple (k, 0...0, 0...0): k atoms in C, the
/// rest in B, no photons. The tuple must belong to the sector, i.e. k must
/// equal the basis excitation number.
Eigen::VectorXcd symmetric_ground_state(const SymmetricBasis& basis, int k);

/// Applies [ sum_j sigma_CB - sum_q (Omega_q/g_q) a_q^dag ]^n to the all-B
/// vacuum and normalizes. With all controls zero the formula collapses to
/// the stored state |C^n, vacuum>; that limit must be requested explicitly.
DarkState dark_state(const ModelParams& params,
                     const std::vector<Complex>& controls,
                     const SymmetricBasis& basis, int n,
                     bool allow_zero_controls = false);

/// |<D,n|state>|^2 against the instantaneous dark state of `controls`.
/// Rejects inputs whose norm deviates from 1 by more than 1e-6.
double dark_overlap(const Eigen::VectorXcd& state, const ModelParams& params,
                    const std::vector<Complex>& controls,
                    const SymmetricBasis& basis);

}  // namespace ratos
