#pragma once

#include <vector>

#include "ratos/common.hpp"
#include "ratos/hilbert.hpp"
#include "ratos/model.hpp"

namespace ratos {

/// Atomic basis rotation: column Q of U is the excited bright state |EB> =
/// sum_q (Omega_q/Omega)|A_q>, the remaining columns are the excited dark
/// states |ED_r> that carry no classical coupling.
struct BrightDarkBasis {
  double omega_total = 0.0;      // Omega = sqrt(sum |Omega_q|^2)
  Eigen::VectorXcd eb_coeffs;    // Q amplitudes of |EB> over |A_q>
  Eigen::MatrixXcd ed_coeffs;    // (Q-1) x Q, row r = |ED_r>
  Eigen::MatrixXcd u;            // Q x Q unitary, u.col(Q-1) = eb_coeffs
};

/// Optical mode rotation: column Q of W is the EIT mode b_Q =
/// (1/R) sum_q (Omega_q*/g_q*) a_q; the other columns are the absorbing
/// modes. g_eff = Omega/R is the coupling of b_Q in the reduced Lambda
/// system (real positive with these conventions).
struct OpticalBasis {
  double r_norm = 0.0;           // R = sqrt(sum |Omega_q/g_q|^2)
  Complex g_eff;                 // Omega / R
  Eigen::MatrixXcd w;            // Q x Q unitary
  Eigen::VectorXcd bq_coeffs;    // b_Q = sum_q bq_coeffs[q] a_q
};

/// Unitary with prescribed last column (a unit vector), built as a
/// Householder reflection. The pivot is permuted (and, if every pivot is
/// near-singular, the reflection re-phased) so the construction never
/// divides by a small number.
Eigen::MatrixXcd unitary_with_last_column(const Eigen::VectorXcd& column);

BrightDarkBasis atomic_transform(const ModelParams& params,
                                 const std::vector<Complex>& controls);

OpticalBasis optical_transform(const ModelParams& params,
                               const std::vector<Complex>& controls);

/// Sector representation of the product unitary: `atomic_u` applied to the
/// excited levels of every atom and `optical_w` to the photon modes.
/// Column J holds the expansion of the transformed-label basis state J over
/// the original occupation basis. Requires default (uniform) Fock cutoffs so
/// the sector is closed under the mode rotation.
Eigen::MatrixXcd sector_unitary(const SymmetricBasis& basis,
                                const Eigen::MatrixXcd& atomic_u,
                                const Eigen::MatrixXcd& optical_w);

/// Full Hamiltonian conjugated into the bright/dark + EIT-mode basis.
/// Indices keep their occupation meaning, but excited level Q now labels
/// |EB|, levels r < Q label |ED_r>, photon mode Q labels b_Q.
SparseOperator transformed_hamiltonian(const ModelParams& params,
                                       const std::vector<Complex>& controls,
                                       const SymmetricBasis& basis);

/// Largest matrix elements that the transformed Hamiltonian must not have:
/// classical couplings into any |ED_r> and EIT-mode photon couplings into
/// any |ED_r>.
struct StructureReport {
  double max_ed_classical = 0.0;  // |ED_r><C| type elements
  double max_bq_ed = 0.0;         // b_Q |ED_r><B| type elements

  double max_forbidden() const {
    return max_ed_classical > max_bq_ed ? max_ed_classical : max_bq_ed;
  }
  bool passes(double tol = 1e-10) const { return max_forbidden() <= tol; }
};

StructureReport structure_report(const SparseOperator& transformed,
                                 const SymmetricBasis& basis);

}  // namespace ratos
