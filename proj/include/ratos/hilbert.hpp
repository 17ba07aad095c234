#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "ratos/common.hpp"

namespace ratos {

// One atomic level of the multi-lambda scheme: the signal-coupled ground
// state B, the control-coupled ground state C, or an excited state A_q
// (q is 1-based).
struct Level {
  enum class Kind { B, C, A };
  Kind kind = Kind::B;
  int mode = 0;  // only meaningful for Kind::A

  static Level b() { return {Kind::B, 0}; }
  static Level c() { return {Kind::C, 0}; }
  static Level a(int q) { return {Kind::A, q}; }

  bool operator==(const Level&) const = default;
};

// Occupation tuple (k, m_1..m_Q, n_1..n_Q): k atoms in C, m_q atoms in A_q,
// n_q photons in mode q. Atoms in B are implicit (N - k - sum m).
using Occupation = std::vector<int>;

/// Fixed-excitation symmetric sector of N atoms and Q field modes. The
/// excitation number n = k + sum(m_q) + sum(n_q) is conserved by the
/// interaction, so a simulation never leaves this sector.
struct SectorSpec {
  int num_atoms = 1;        // N
  int num_modes = 1;        // Q
  int excitation = 0;       // n
  std::vector<int> fock_cutoff;  // per mode; empty means n for every mode

  std::vector<int> resolved_cutoffs() const;
  void validate() const;
};

class SymmetricBasis {
 public:
  SectorSpec spec;
  std::vector<Occupation> states;        // lexicographic order
  std::map<Occupation, int> index;

  int dimension() const { return static_cast<int>(states.size()); }
  const Occupation& state(int i) const { return states.at(i); }

  /// Position of `occ` in this basis, or nullopt if outside the sector.
  std::optional<int> find(const Occupation& occ) const;

  // Occupation accessors (q is 1-based).
  int atoms_in_c(const Occupation& occ) const { return occ[0]; }
  int atoms_in_a(const Occupation& occ, int q) const { return occ[q]; }
  int photons(const Occupation& occ, int q) const {
    return occ[spec.num_modes + q];
  }
  int atoms_in_b(const Occupation& occ) const;
  int occupation_of(const Occupation& occ, Level level) const;
};

SymmetricBasis enumerate_sector(const SectorSpec& spec);

// Single 'move' on an occupation tuple together with its matrix element.
// These are the amplitude rules behind the operator builders; they are also
// used directly where an operator maps between different excitation sectors
// (dark-state construction, sector-changing flips).

/// Collective flip sum_j |to><from|_j on the symmetric sector:
/// amplitude sqrt(N_from * (N_to + 1)). Returns nullopt when N_from == 0.
std::optional<std::pair<Occupation, double>> apply_collective_flip(
    const SymmetricBasis& basis, const Occupation& occ, Level from, Level to);

/// Bosonic lowering on mode q: amplitude sqrt(n_q).
std::optional<std::pair<Occupation, double>> apply_mode_lowering(
    const SymmetricBasis& basis, const Occupation& occ, int q);

/// Bosonic raising on mode q: amplitude sqrt(n_q + 1). Ignores the Fock
/// cutoff; callers project onto a basis afterwards.
std::pair<Occupation, double> apply_mode_raising(const SymmetricBasis& basis,
                                                 const Occupation& occ, int q);

/// Matrix of the collective flip restricted to `basis`. Image states outside
/// the sector are dropped; within an excitation-conserving Hamiltonian term
/// the paired photon operator restores the sector, so no physical amplitude
/// is lost.
SparseOperator collective_flip(const SymmetricBasis& basis, Level from,
                               Level to);

/// Matrix of the photon annihilator of mode q restricted to `basis` (image
/// states outside the sector dropped, as above).
SparseOperator mode_annihilator(const SymmetricBasis& basis, int q);

/// Diagonal occupation-number operator of an atomic level.
SparseOperator level_population(const SymmetricBasis& basis, Level level);

/// Diagonal photon-number operator of mode q.
SparseOperator photon_number(const SymmetricBasis& basis, int q);

}  // namespace ratos
