#include "ratos/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ratos {

std::vector<int> SectorSpec::resolved_cutoffs() const {
  if (fock_cutoff.empty()) {
    return std::vector<int>(static_cast<size_t>(num_modes), excitation);
  }
  return fock_cutoff;
}

void SectorSpec::validate() const {
  if (num_atoms <= 0) {
    throw std::invalid_argument("SectorSpec: num_atoms must be positive");
  }
  if (num_modes <= 0) {
    throw std::invalid_argument("SectorSpec: num_modes must be positive");
  }
  if (excitation < 0) {
    throw std::invalid_argument("SectorSpec: excitation must be non-negative");
  }
  const auto cutoffs = resolved_cutoffs();
  if (static_cast<int>(cutoffs.size()) != num_modes) {
    throw std::invalid_argument("SectorSpec: fock_cutoff size must equal Q");
  }
  for (int c : cutoffs) {
    if (c < 0) {
      throw std::invalid_argument("SectorSpec: fock_cutoff must be >= 0");
    }
  }
  const int capacity =
      num_atoms + std::accumulate(cutoffs.begin(), cutoffs.end(), 0);
  if (excitation > capacity) {
    throw std::invalid_argument("SectorSpec: sector is empty (n > N + sum of cutoffs)");
  }
}

std::optional<int> SymmetricBasis::find(const Occupation& occ) const {
  auto it = index.find(occ);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

int SymmetricBasis::atoms_in_b(const Occupation& occ) const {
  int excited = 0;
  for (int q = 1; q <= spec.num_modes; ++q) excited += occ[q];
  return spec.num_atoms - occ[0] - excited;
}

int SymmetricBasis::occupation_of(const Occupation& occ, Level level) const {
  switch (level.kind) {
    case Level::Kind::B:
      return atoms_in_b(occ);
    case Level::Kind::C:
      return atoms_in_c(occ);
    case Level::Kind::A:
      return atoms_in_a(occ, level.mode);
  }
  return 0;
}

namespace {

void enumerate_recursive(int slot, int remaining, int atom_budget,
                         const std::vector<int>& cutoffs, int num_modes,
                         Occupation& current,
                         std::vector<Occupation>& out) {
  const int total_slots = 1 + 2 * num_modes;
  if (slot == total_slots) {
    if (remaining == 0) out.push_back(current);
    return;
  }
  int max_here;
  if (slot == 0) {
    max_here = std::min(remaining, atom_budget);
  } else if (slot <= num_modes) {
    max_here = std::min(remaining, atom_budget);
  } else {
    max_here = std::min(remaining, cutoffs[static_cast<size_t>(slot - num_modes - 1)]);
  }
  for (int v = 0; v <= max_here; ++v) {
    current[static_cast<size_t>(slot)] = v;
    const int next_budget = (slot <= num_modes) ? atom_budget - v : atom_budget;
    enumerate_recursive(slot + 1, remaining - v, next_budget, cutoffs,
                        num_modes, current, out);
  }
  current[static_cast<size_t>(slot)] = 0;
}

void check_mode(const SymmetricBasis& basis, int q) {
  if (q < 1 || q > basis.spec.num_modes) {
    throw std::invalid_argument("mode index out of range");
  }
}

void check_level(const SymmetricBasis& basis, Level level) {
  if (level.kind == Level::Kind::A) check_mode(basis, level.mode);
}

}  // namespace

SymmetricBasis enumerate_sector(const SectorSpec& spec) {
  spec.validate();
  SymmetricBasis basis;
  basis.spec = spec;
  basis.spec.fock_cutoff = spec.resolved_cutoffs();

  Occupation current(static_cast<size_t>(1 + 2 * spec.num_modes), 0);
  enumerate_recursive(0, spec.excitation, spec.num_atoms,
                      basis.spec.fock_cutoff, spec.num_modes, current,
                      basis.states);
  // The recursion fills slots left to right with ascending values, which is
  // exactly lexicographic order on the tuples.
  for (int i = 0; i < static_cast<int>(basis.states.size()); ++i) {
    basis.index.emplace(basis.states[static_cast<size_t>(i)], i);
  }
  return basis;
}

std::optional<std::pair<Occupation, double>> apply_collective_flip(
    const SymmetricBasis& basis, const Occupation& occ, Level from, Level to) {
  const int n_from = basis.occupation_of(occ, from);
  if (n_from == 0) return std::nullopt;
  const int n_to = basis.occupation_of(occ, to);

  Occupation image = occ;
  auto adjust = [&image](Level level, int delta) {
    // B occupancy is implicit; only C and A_q appear in the tuple.
    if (level.kind == Level::Kind::C) image[0] += delta;
    if (level.kind == Level::Kind::A) image[static_cast<size_t>(level.mode)] += delta;
  };
  adjust(from, -1);
  adjust(to, +1);

  const double amp = std::sqrt(static_cast<double>(n_from) *
                               static_cast<double>(n_to + 1));
  return std::make_pair(std::move(image), amp);
}

std::optional<std::pair<Occupation, double>> apply_mode_lowering(
    const SymmetricBasis& basis, const Occupation& occ, int q) {
  const int n_q = basis.photons(occ, q);
  if (n_q == 0) return std::nullopt;
  Occupation image = occ;
  image[static_cast<size_t>(basis.spec.num_modes + q)] -= 1;
  return std::make_pair(std::move(image), std::sqrt(static_cast<double>(n_q)));
}

std::pair<Occupation, double> apply_mode_raising(const SymmetricBasis& basis,
                                                 const Occupation& occ,
                                                 int q) {
  const int n_q = basis.photons(occ, q);
  Occupation image = occ;
  image[static_cast<size_t>(basis.spec.num_modes + q)] += 1;
  return std::make_pair(std::move(image),
                        std::sqrt(static_cast<double>(n_q + 1)));
}

SparseOperator collective_flip(const SymmetricBasis& basis, Level from,
                               Level to) {
  check_level(basis, from);
  check_level(basis, to);
  if (from == to) {
    throw std::invalid_argument("collective_flip: levels must be distinct");
  }
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (int j = 0; j < basis.dimension(); ++j) {
    auto move = apply_collective_flip(basis, basis.state(j), from, to);
    if (!move) continue;
    if (auto i = basis.find(move->first)) {
      triplets.emplace_back(*i, j, Complex(move->second, 0.0));
    }
  }
  SparseOperator op(basis.dimension(), basis.dimension());
  op.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

SparseOperator mode_annihilator(const SymmetricBasis& basis, int q) {
  check_mode(basis, q);
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (int j = 0; j < basis.dimension(); ++j) {
    auto move = apply_mode_lowering(basis, basis.state(j), q);
    if (!move) continue;
    if (auto i = basis.find(move->first)) {
      triplets.emplace_back(*i, j, Complex(move->second, 0.0));
    }
  }
  SparseOperator op(basis.dimension(), basis.dimension());
  op.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

SparseOperator level_population(const SymmetricBasis& basis, Level level) {
  check_level(basis, level);
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (int j = 0; j < basis.dimension(); ++j) {
    const int occ = basis.occupation_of(basis.state(j), level);
    if (occ != 0) triplets.emplace_back(j, j, Complex(occ, 0.0));
  }
  SparseOperator op(basis.dimension(), basis.dimension());
  op.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

SparseOperator photon_number(const SymmetricBasis& basis, int q) {
  check_mode(basis, q);
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (int j = 0; j < basis.dimension(); ++j) {
    const int n_q = basis.photons(basis.state(j), q);
    if (n_q != 0) triplets.emplace_back(j, j, Complex(n_q, 0.0));
  }
  SparseOperator op(basis.dimension(), basis.dimension());
  op.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

}  // namespace ratos
