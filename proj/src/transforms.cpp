#include "ratos/transforms.hpp"

#include <cmath>
#include <map>

namespace ratos {

namespace {

// Householder form U = v v^dag / sigma^* - 1 with v = e_p + c and
// sigma = c_p + 1, reflecting the pivot axis e_p onto the target column c.
// Well conditioned as long as |sigma| is not small.
Eigen::MatrixXcd householder_from_pivot(const Eigen::VectorXcd& c, int pivot) {
  const int q = static_cast<int>(c.size());
  Eigen::VectorXcd v = c;
  v(pivot) += 1.0;
  const Complex sigma = c(pivot) + 1.0;
  Eigen::MatrixXcd u = (v * v.adjoint()) / std::conj(sigma);
  u -= Eigen::MatrixXcd::Identity(q, q);
  return u;
}

}  // namespace

Eigen::MatrixXcd unitary_with_last_column(const Eigen::VectorXcd& column) {
  const int q = static_cast<int>(column.size());
  if (q < 1) throw std::invalid_argument("unitary_with_last_column: empty column");
  const double norm_err = std::abs(column.norm() - 1.0);
  if (norm_err > 1e-9) {
    throw std::invalid_argument("unitary_with_last_column: column not unit norm");
  }

  constexpr double kPivotFloor = 0.5;
  if (std::abs(column(q - 1) + 1.0) >= kPivotFloor) {
    return householder_from_pivot(column, q - 1);
  }

  // Pivot the reflection on the component that keeps sigma away from zero,
  // then move that row back into place.
  int best = q - 1;
  double best_sigma = std::abs(column(q - 1) + 1.0);
  for (int p = 0; p < q; ++p) {
    const double s = std::abs(column(p) + 1.0);
    if (s > best_sigma) {
      best_sigma = s;
      best = p;
    }
  }
  if (best_sigma >= kPivotFloor) {
    Eigen::VectorXcd permuted = column;
    std::swap(permuted(best), permuted(q - 1));
    Eigen::MatrixXcd u = householder_from_pivot(permuted, q - 1);
    u.row(best).swap(u.row(q - 1));
    return u;
  }

  // No pivot is safe (possible for Q <= 4 with all components near -1/sqrt(Q)).
  // Re-phase the reflection instead: H_v with v = c - alpha e_Q maps c to
  // alpha e_Q and has ||v||^2 = 2(1 + |c_Q|) >= 2; U = H_v diag(1,..,alpha)
  // then carries c in its last column.
  const Complex c_last = column(q - 1);
  const Complex alpha =
      std::abs(c_last) > 0.0 ? Complex(-c_last / std::abs(c_last)) : Complex(-1.0);
  Eigen::VectorXcd v = column;
  v(q - 1) -= alpha;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(q, q) -
                       (2.0 / v.squaredNorm()) * (v * v.adjoint());
  u.col(q - 1) *= alpha;
  return u;
}

BrightDarkBasis atomic_transform(const ModelParams& params,
                                 const std::vector<Complex>& controls) {
  params.validate();
  if (static_cast<int>(controls.size()) != params.num_modes) {
    throw std::invalid_argument("atomic_transform: controls must have Q entries");
  }
  const int q = params.num_modes;
  Eigen::VectorXcd omega(q);
  for (int i = 0; i < q; ++i) omega(i) = controls[static_cast<size_t>(i)];
  const double omega_total = omega.norm();
  if (omega_total <= 0.0) {
    throw std::invalid_argument("atomic_transform: bright basis undefined for all-zero controls");
  }

  BrightDarkBasis basis;
  basis.omega_total = omega_total;
  basis.eb_coeffs = omega / omega_total;
  basis.u = unitary_with_last_column(basis.eb_coeffs);
  basis.ed_coeffs = basis.u.leftCols(q - 1).transpose();
  return basis;
}

OpticalBasis optical_transform(const ModelParams& params,
                               const std::vector<Complex>& controls) {
  params.validate();
  if (static_cast<int>(controls.size()) != params.num_modes) {
    throw std::invalid_argument("optical_transform: controls must have Q entries");
  }
  const int q = params.num_modes;
  Eigen::VectorXcd ratio(q);  // Omega_q / g_q
  for (int i = 0; i < q; ++i) {
    ratio(i) = controls[static_cast<size_t>(i)] / params.g[static_cast<size_t>(i)];
  }
  const double r_norm = ratio.norm();
  if (r_norm <= 0.0) {
    throw std::invalid_argument("optical_transform: optical basis undefined for all-zero controls");
  }
  double omega_total = 0.0;
  for (const Complex& c : controls) omega_total += std::norm(c);
  omega_total = std::sqrt(omega_total);

  OpticalBasis basis;
  basis.r_norm = r_norm;
  basis.g_eff = Complex(omega_total / r_norm, 0.0);
  basis.w = unitary_with_last_column(ratio / r_norm);
  basis.bq_coeffs = basis.w.col(q - 1).conjugate();
  return basis;
}

namespace {

// Expands prod_q (sum_p M(p,q) create_p)^{counts[q]} |0> over occupation
// vectors of `modes` bosonic modes, divided by sqrt(prod counts[q]!) so the
// result is the unit-norm transformed Fock state.
std::map<std::vector<int>, Complex> transformed_fock_expansion(
    const Eigen::MatrixXcd& m, const std::vector<int>& counts) {
  const int modes = static_cast<int>(m.rows());
  std::map<std::vector<int>, Complex> amps;
  amps.emplace(std::vector<int>(static_cast<size_t>(modes), 0), Complex(1.0, 0.0));
  for (int q = 0; q < modes; ++q) {
    for (int rep = 0; rep < counts[static_cast<size_t>(q)]; ++rep) {
      std::map<std::vector<int>, Complex> next;
      for (const auto& [occ, amp] : amps) {
        for (int p = 0; p < modes; ++p) {
          const Complex coeff = m(p, q);
          if (coeff == Complex(0.0, 0.0)) continue;
          std::vector<int> raised = occ;
          raised[static_cast<size_t>(p)] += 1;
          const double boson = std::sqrt(static_cast<double>(raised[static_cast<size_t>(p)]));
          next[raised] += amp * coeff * boson;
        }
      }
      amps = std::move(next);
    }
  }
  double norm_factor = 1.0;
  for (int q = 0; q < modes; ++q) {
    for (int rep = 2; rep <= counts[static_cast<size_t>(q)]; ++rep) {
      norm_factor *= static_cast<double>(rep);
    }
  }
  norm_factor = std::sqrt(norm_factor);
  for (auto& [occ, amp] : amps) amp /= norm_factor;
  return amps;
}

}  // namespace

Eigen::MatrixXcd sector_unitary(const SymmetricBasis& basis,
                                const Eigen::MatrixXcd& atomic_u,
                                const Eigen::MatrixXcd& optical_w) {
  const int q = basis.spec.num_modes;
  if (atomic_u.rows() != q || atomic_u.cols() != q || optical_w.rows() != q ||
      optical_w.cols() != q) {
    throw std::invalid_argument("sector_unitary: transform size must be Q x Q");
  }
  for (int c : basis.spec.resolved_cutoffs()) {
    if (c < basis.spec.excitation) {
      throw std::invalid_argument(
          "sector_unitary: requires per-mode Fock cutoffs >= n (sector must be "
          "closed under the mode rotation)");
    }
  }

  const int dim = basis.dimension();
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    const Occupation& label = basis.state(col);
    std::vector<int> excited_counts(static_cast<size_t>(q));
    std::vector<int> photon_counts(static_cast<size_t>(q));
    for (int i = 1; i <= q; ++i) {
      excited_counts[static_cast<size_t>(i - 1)] = label[static_cast<size_t>(i)];
      photon_counts[static_cast<size_t>(i - 1)] = label[static_cast<size_t>(q + i)];
    }
    const auto atom_amps = transformed_fock_expansion(atomic_u, excited_counts);
    const auto photon_amps = transformed_fock_expansion(optical_w, photon_counts);
    for (const auto& [m_occ, m_amp] : atom_amps) {
      for (const auto& [n_occ, n_amp] : photon_amps) {
        Occupation original(static_cast<size_t>(1 + 2 * q));
        original[0] = label[0];
        for (int i = 1; i <= q; ++i) {
          original[static_cast<size_t>(i)] = m_occ[static_cast<size_t>(i - 1)];
          original[static_cast<size_t>(q + i)] = n_occ[static_cast<size_t>(i - 1)];
        }
        if (auto row = basis.find(original)) {
          t(*row, col) += m_amp * n_amp;
        }
      }
    }
  }
  return t;
}

SparseOperator transformed_hamiltonian(const ModelParams& params,
                                       const std::vector<Complex>& controls,
                                       const SymmetricBasis& basis) {
  const BrightDarkBasis atomic = atomic_transform(params, controls);
  const OpticalBasis optical = optical_transform(params, controls);
  const Eigen::MatrixXcd t = sector_unitary(basis, atomic.u, optical.w);
  const SparseOperator h = build_full_hamiltonian(params, controls, basis);
  const Eigen::MatrixXcd transformed = t.adjoint() * h * t;
  return transformed.sparseView(1.0, 1e-300);
}

StructureReport structure_report(const SparseOperator& transformed,
                                 const SymmetricBasis& basis) {
  const int q = basis.spec.num_modes;
  StructureReport report;
  for (int col = 0; col < transformed.outerSize(); ++col) {
    for (SparseOperator::InnerIterator it(transformed, col); it; ++it) {
      const Occupation& to = basis.state(static_cast<int>(it.row()));
      const Occupation& from = basis.state(static_cast<int>(it.col()));
      // Classify the move by the occupation difference. Only two patterns are
      // forbidden: a classical flip C -> ED_r and an EIT-mode photon feeding
      // an ED_r excitation (plus their Hermitian partners).
      std::vector<int> diff(to.size());
      for (size_t i = 0; i < to.size(); ++i) diff[i] = to[i] - from[i];
      const int dk = diff[0];
      int excited_up = 0, excited_slot = 0, excited_moves = 0;
      int photon_moves = 0, photon_slot = 0, photon_change = 0;
      for (int i = 1; i <= q; ++i) {
        if (diff[static_cast<size_t>(i)] != 0) {
          ++excited_moves;
          excited_slot = i;
          excited_up = diff[static_cast<size_t>(i)];
        }
        if (diff[static_cast<size_t>(q + i)] != 0) {
          ++photon_moves;
          photon_slot = i;
          photon_change = diff[static_cast<size_t>(q + i)];
        }
      }
      const double mag = std::abs(it.value());
      // |ED_r><C| and h.c.: k and one excited slot r < Q trade one unit.
      if (photon_moves == 0 && excited_moves == 1 && excited_slot < q &&
          dk == -excited_up && std::abs(excited_up) == 1) {
        report.max_ed_classical = std::max(report.max_ed_classical, mag);
      }
      // b_Q |ED_r><B| and h.c.: photon slot Q and one excited slot r < Q
      // trade one unit while k is untouched.
      if (dk == 0 && excited_moves == 1 && excited_slot < q &&
          photon_moves == 1 && photon_slot == q &&
          photon_change == -excited_up && std::abs(excited_up) == 1) {
        report.max_bq_ed = std::max(report.max_bq_ed, mag);
      }
    }
  }
  return report;
}

}  // namespace ratos
