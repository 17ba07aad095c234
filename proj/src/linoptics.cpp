#include "ratos/linoptics.hpp"

#include <cmath>
#include <numeric>

#include "ratos/transforms.hpp"

namespace ratos {

FockInput FockInput::fock(const std::vector<int>& occupation) {
  FockInput input;
  input.num_modes = static_cast<int>(occupation.size());
  input.amplitudes.emplace(occupation, Complex(1.0, 0.0));
  input.validate();
  return input;
}

FockInput FockInput::superposition(int num_modes,
                                   std::map<std::vector<int>, Complex> amps) {
  FockInput input;
  input.num_modes = num_modes;
  input.amplitudes = std::move(amps);
  input.validate();
  return input;
}

double FockInput::norm_sq() const {
  double total = 0.0;
  for (const auto& [occ, amp] : amplitudes) total += std::norm(amp);
  return total;
}

int FockInput::max_photons() const {
  int most = 0;
  for (const auto& [occ, amp] : amplitudes) {
    most = std::max(most, std::accumulate(occ.begin(), occ.end(), 0));
  }
  return most;
}

void FockInput::validate() const {
  if (num_modes <= 0) throw std::invalid_argument("FockInput: num_modes must be positive");
  for (const auto& [occ, amp] : amplitudes) {
    if (static_cast<int>(occ.size()) != num_modes) {
      throw std::invalid_argument("FockInput: occupation length mismatch");
    }
    for (int n : occ) {
      if (n < 0) throw std::invalid_argument("FockInput: negative occupation");
    }
  }
  if (std::abs(norm_sq() - 1.0) > 1e-9) {
    throw std::invalid_argument("FockInput: amplitudes must be unit norm");
  }
}

namespace {

void check_unitary(const Eigen::MatrixXcd& w, const char* name);

}  // namespace

void ModeTransform::validate() const {
  check_unitary(w_in, "ModeTransform(w_in)");
  check_unitary(w_out, "ModeTransform(w_out)");
}

namespace {

void check_unitary(const Eigen::MatrixXcd& w, const char* name) {
  const Eigen::MatrixXcd gram = w.adjoint() * w;
  const double err =
      (gram - Eigen::MatrixXcd::Identity(w.rows(), w.cols())).cwiseAbs().maxCoeff();
  if (err > 1e-12) {
    throw std::invalid_argument(std::string(name) + ": transform is not unitary");
  }
}

// Rewrites an a-basis Fock superposition in the b basis defined by
// a_q = sum_s W_{qs} b_s, i.e. a_q^dag = sum_s conj(W_{qs}) b_s^dag.
std::map<std::vector<int>, Complex> to_b_basis(const FockInput& input,
                                               const Eigen::MatrixXcd& w) {
  const int q_count = input.num_modes;
  std::map<std::vector<int>, Complex> result;
  for (const auto& [occ, amp] : input.amplitudes) {
    // Seed with amp / sqrt(prod occ_q!) so that applying raw creation
    // operators reproduces the unit-norm a-basis Fock state.
    double fact = 1.0;
    for (int n : occ) {
      for (int k = 2; k <= n; ++k) fact *= static_cast<double>(k);
    }
    std::map<std::vector<int>, Complex> partial;
    partial.emplace(std::vector<int>(static_cast<size_t>(q_count), 0),
                    amp / std::sqrt(fact));
    for (int q = 0; q < q_count; ++q) {
      for (int rep = 0; rep < occ[static_cast<size_t>(q)]; ++rep) {
        std::map<std::vector<int>, Complex> next;
        for (const auto& [b_occ, b_amp] : partial) {
          for (int s = 0; s < q_count; ++s) {
            const Complex coeff = std::conj(w(q, s));
            if (coeff == Complex(0.0, 0.0)) continue;
            std::vector<int> raised = b_occ;
            raised[static_cast<size_t>(s)] += 1;
            next[raised] += b_amp * coeff *
                            std::sqrt(static_cast<double>(raised[static_cast<size_t>(s)]));
          }
        }
        partial = std::move(next);
      }
    }
    for (const auto& [b_occ, b_amp] : partial) result[b_occ] += b_amp;
  }
  return result;
}

bool all_in_last_mode(const std::vector<int>& occ) {
  for (size_t s = 0; s + 1 < occ.size(); ++s) {
    if (occ[s] != 0) return false;
  }
  return true;
}

}  // namespace

double coupling_probability(const FockInput& input, const Eigen::MatrixXcd& w_in) {
  input.validate();
  if (w_in.rows() != input.num_modes || w_in.cols() != input.num_modes) {
    throw std::invalid_argument("coupling_probability: transform size mismatch");
  }
  check_unitary(w_in, "coupling_probability");
  double prob = 0.0;
  for (const auto& [b_occ, b_amp] : to_b_basis(input, w_in)) {
    if (all_in_last_mode(b_occ)) prob += std::norm(b_amp);
  }
  return prob;
}

std::vector<Eigen::VectorXcd> default_ratio_grid(int num_modes,
                                                 int points_per_angle) {
  if (num_modes < 1) throw std::invalid_argument("default_ratio_grid: bad Q");
  if (points_per_angle < 2) points_per_angle = 2;
  std::vector<Eigen::VectorXcd> grid;
  if (num_modes == 1) {
    Eigen::VectorXcd one(1);
    one(0) = Complex(1.0, 0.0);
    grid.push_back(one);
    return grid;
  }
  // Recursively mesh magnitudes (hyperspherical angles) and relative phases.
  std::vector<Eigen::VectorXcd> partial = default_ratio_grid(num_modes - 1,
                                                             points_per_angle);
  for (int a = 0; a < points_per_angle; ++a) {
    const double theta = (M_PI / 2.0) * a / (points_per_angle - 1);
    for (int p = 0; p < points_per_angle; ++p) {
      const double phase = 2.0 * M_PI * p / points_per_angle;
      for (const Eigen::VectorXcd& rest : partial) {
        Eigen::VectorXcd v(num_modes);
        v.head(num_modes - 1) = std::sin(theta) * rest;
        v(num_modes - 1) = std::cos(theta) * std::exp(kImag * phase);
        grid.push_back(v);
      }
    }
  }
  return grid;
}

ControlSearchResult max_coupling_over_controls(
    const FockInput& input, const std::vector<Eigen::VectorXcd>& ratio_grid) {
  if (ratio_grid.empty()) {
    throw std::invalid_argument("max_coupling_over_controls: empty grid");
  }
  ControlSearchResult best;
  best.probability = -1.0;
  for (const Eigen::VectorXcd& ratios : ratio_grid) {
    if (ratios.size() != input.num_modes) {
      throw std::invalid_argument("max_coupling_over_controls: grid entry size mismatch");
    }
    const double norm = ratios.norm();
    if (norm <= 0.0) continue;
    // Only the b_Q column matters for the coupling probability; complete it
    // to a unitary to reuse the generic machinery.
    const Eigen::MatrixXcd w = unitary_with_last_column(ratios / norm);
    const double prob = coupling_probability(input, w);
    if (prob > best.probability) {
      best.probability = prob;
      best.control_ratios = ratios / norm;
    }
  }
  return best;
}

TransferResult end_to_end_transfer(const FockInput& input,
                                   const Eigen::MatrixXcd& w_in,
                                   const Eigen::MatrixXcd& w_out) {
  input.validate();
  check_unitary(w_in, "end_to_end_transfer(w_in)");
  check_unitary(w_out, "end_to_end_transfer(w_out)");
  const int q_count = input.num_modes;
  if (w_in.rows() != q_count || w_out.rows() != q_count) {
    throw std::invalid_argument("end_to_end_transfer: transform size mismatch");
  }

  // Surviving amplitudes per photon number: the (b_Q^dag)^n / sqrt(n!)
  // components of the input.
  std::map<int, Complex> surviving;
  for (const auto& [b_occ, b_amp] : to_b_basis(input, w_in)) {
    if (all_in_last_mode(b_occ)) {
      surviving[b_occ[static_cast<size_t>(q_count - 1)]] += b_amp;
    }
  }

  TransferResult result;
  result.output.num_modes = q_count;
  double survival = 0.0;
  for (const auto& [n, amp] : surviving) {
    survival += std::norm(amp);
    // Re-expand (b_Q^dag)^n |0> / sqrt(n!) through the output interferometer:
    // b_Q^dag = sum_q W_out(q, Q) a_q^dag.
    std::map<std::vector<int>, Complex> expanded;
    expanded.emplace(std::vector<int>(static_cast<size_t>(q_count), 0),
                     Complex(1.0, 0.0));
    for (int rep = 0; rep < n; ++rep) {
      std::map<std::vector<int>, Complex> next;
      for (const auto& [occ, a] : expanded) {
        for (int q = 0; q < q_count; ++q) {
          const Complex coeff = w_out(q, q_count - 1);
          if (coeff == Complex(0.0, 0.0)) continue;
          std::vector<int> raised = occ;
          raised[static_cast<size_t>(q)] += 1;
          next[raised] += a * coeff *
                          std::sqrt(static_cast<double>(raised[static_cast<size_t>(q)]));
        }
      }
      expanded = std::move(next);
    }
    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= static_cast<double>(k);
    const double root = std::sqrt(fact);
    for (const auto& [occ, a] : expanded) {
      result.output.amplitudes[occ] += amp * a / root;
    }
  }
  result.absorbed = 1.0 - survival;
  return result;
}

}  // namespace ratos
