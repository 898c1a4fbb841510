#pragma once

// Deterministic reversible automata and their quantum-mechanical dress:
// the permutation evolution operator, a Hamiltonian generating it, and
// density matrices diagonal in the ontological (automaton-state) basis.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cadual/linalg.hpp"

namespace cadual::ca {

using linalg::ComplexMatrix;
using linalg::ComplexVector;

// Dense matrix realizations are limited to this many states.
inline constexpr std::size_t kMaxDenseStates = 4096;

// A ring of cells; a cell's next value is looked up from its
// (2 * radius + 1)-cell neighborhood, read left to right as a base-alphabet
// number with the leftmost cell most significant.
struct CellLattice {
  std::size_t cell_count = 0;
  std::size_t alphabet_size = 2;
  std::size_t radius = 1;
  std::vector<std::size_t> table;
};

class AutomatonSpec {
public:
  // Explicit (state, next_state) listing; every state must appear exactly
  // once on the left. Bijectivity is checked by build_evolution.
  static AutomatonSpec from_pairs(std::size_t state_count,
                                  const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                  double dt = 1.0);
  static AutomatonSpec from_rule(std::vector<std::size_t> step_rule, double dt = 1.0);
  // Global states index cell configurations, cell 0 most significant.
  static AutomatonSpec from_cells(const CellLattice& cells, double dt = 1.0);

  std::size_t state_count() const { return rule_.size(); }
  const std::vector<std::size_t>& step_rule() const { return rule_; }
  const std::optional<CellLattice>& cells() const { return cells_; }
  double dt() const { return dt_; }

private:
  AutomatonSpec(std::vector<std::size_t> rule, std::optional<CellLattice> cells, double dt);

  std::vector<std::size_t> rule_;
  std::optional<CellLattice> cells_;
  double dt_ = 1.0;
};

class EvolutionOperator {
public:
  explicit EvolutionOperator(std::vector<std::size_t> permutation);

  std::size_t size() const { return perm_.size(); }
  std::size_t image(std::size_t state) const { return perm_[state]; }
  const std::vector<std::size_t>& permutation() const { return perm_; }

  // Cycles in order of their smallest element; each cycle starts at that
  // element and follows the rule.
  std::vector<std::vector<std::size_t>> cycles() const;
  // Least common multiple of the cycle lengths; 0 if it overflows 64 bits.
  std::uint64_t order() const;

  // Entry (image(j), j) = 1. Throws InvalidInput beyond kMaxDenseStates.
  ComplexMatrix matrix() const;

private:
  std::vector<std::size_t> perm_;
};

EvolutionOperator build_evolution(const AutomatonSpec& spec);

// Hermitian H with exp(-i H dt) = U and spectrum in [0, 2 pi / dt). Each
// cycle of length m contributes the circulant block spanned by its Fourier
// modes, so degenerate eigenspaces are fixed by the cycle structure.
ComplexMatrix extract_hamiltonian(const EvolutionOperator& u, double dt);

// U^steps psi, applied as a permutation of amplitudes.
ComplexVector evolve_state(const EvolutionOperator& u, const ComplexVector& psi, std::int64_t steps);

class OntologicalDensityMatrix {
public:
  explicit OntologicalDensityMatrix(std::vector<double> weights);
  static OntologicalDensityMatrix pure(std::size_t n, std::size_t state);
  static OntologicalDensityMatrix uniform(std::size_t n);

  std::size_t size() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  ComplexMatrix matrix() const;

private:
  std::vector<double> weights_;
};

// Weights carried along by the permutation: rho_{U(Q)} <- rho_Q per step.
OntologicalDensityMatrix evolve_density(const EvolutionOperator& u,
                                        const OntologicalDensityMatrix& rho, std::int64_t steps);

// Tr(rho O) = sum_Q rho_Q <Q|O|Q>
linalg::Complex expectation(const OntologicalDensityMatrix& rho, const ComplexMatrix& o);

// ||U psi - exp(-i H dt) psi||
double schrodinger_residual(const EvolutionOperator& u, const ComplexMatrix& h, double dt,
                            const ComplexVector& psi);

}  // namespace cadual::ca
