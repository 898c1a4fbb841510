#include "cadual/ca_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace cadual::ca {

using linalg::Complex;

AutomatonSpec::AutomatonSpec(std::vector<std::size_t> rule, std::optional<CellLattice> cells,
                             double dt)
    : rule_(std::move(rule)), cells_(std::move(cells)), dt_(dt) {
  if (rule_.empty()) throw InvalidInput("automaton must have at least one state");
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw InvalidInput("time step dt must be positive");
  for (std::size_t j = 0; j < rule_.size(); ++j) {
    if (rule_[j] >= rule_.size()) {
      std::ostringstream os;
      os << "step rule maps state " << j << " to " << rule_[j] << ", outside [0, "
         << rule_.size() << ")";
      throw InvalidInput(os.str());
    }
  }
}

AutomatonSpec AutomatonSpec::from_pairs(std::size_t state_count,
                                        const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                        double dt) {
  if (state_count == 0) throw InvalidInput("automaton must have at least one state");
  std::vector<std::size_t> rule(state_count);
  std::vector<bool> seen(state_count, false);
  for (auto [from, to] : pairs) {
    if (from >= state_count) throw InvalidInput("rule table lists unknown state " + std::to_string(from));
    if (seen[from]) throw InvalidInput("rule table lists state " + std::to_string(from) + " twice");
    seen[from] = true;
    rule[from] = to;
  }
  auto missing = std::find(seen.begin(), seen.end(), false);
  if (missing != seen.end()) {
    throw InvalidInput("rule table has no entry for state " +
                       std::to_string(std::distance(seen.begin(), missing)));
  }
  return AutomatonSpec(std::move(rule), std::nullopt, dt);
}

AutomatonSpec AutomatonSpec::from_rule(std::vector<std::size_t> step_rule, double dt) {
  return AutomatonSpec(std::move(step_rule), std::nullopt, dt);
}

AutomatonSpec AutomatonSpec::from_cells(const CellLattice& cells, double dt) {
  if (cells.cell_count == 0 || cells.alphabet_size < 2) {
    throw InvalidInput("cell lattice needs at least one cell and an alphabet of size >= 2");
  }
  const std::size_t width = 2 * cells.radius + 1;
  std::size_t table_size = 1;
  for (std::size_t i = 0; i < width; ++i) table_size *= cells.alphabet_size;
  if (cells.table.size() != table_size) {
    std::ostringstream os;
    os << "neighborhood table needs " << table_size << " entries, got " << cells.table.size();
    throw InvalidInput(os.str());
  }
  for (auto v : cells.table) {
    if (v >= cells.alphabet_size) throw InvalidInput("neighborhood table value outside the alphabet");
  }
  std::size_t states = 1;
  for (std::size_t i = 0; i < cells.cell_count; ++i) {
    if (states > kMaxDenseStates * 16 / cells.alphabet_size) {
      throw InvalidInput("cell lattice state space too large for brute-force bijection check");
    }
    states *= cells.alphabet_size;
  }

  const std::size_t n = cells.cell_count, k = cells.alphabet_size;
  std::vector<std::size_t> rule(states);
  std::vector<std::size_t> digits(n), next(n);
  for (std::size_t s = 0; s < states; ++s) {
    std::size_t rest = s;
    for (std::size_t c = n; c-- > 0;) {
      digits[c] = rest % k;
      rest /= k;
    }
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t key = 0;
      for (std::size_t w = 0; w < width; ++w) {
        const std::size_t pos = (c + n * width + w - cells.radius) % n;
        key = key * k + digits[pos];
      }
      next[c] = cells.table[key];
    }
    std::size_t image = 0;
    for (std::size_t c = 0; c < n; ++c) image = image * k + next[c];
    rule[s] = image;
  }
  return AutomatonSpec(std::move(rule), cells, dt);
}

// ---------------------------------------------------------------- operator

EvolutionOperator::EvolutionOperator(std::vector<std::size_t> permutation)
    : perm_(std::move(permutation)) {
  std::vector<std::size_t> preimage(perm_.size(), perm_.size());
  for (std::size_t j = 0; j < perm_.size(); ++j) {
    if (perm_[j] >= perm_.size()) throw InvalidInput("permutation image out of range");
    if (preimage[perm_[j]] != perm_.size()) {
      std::ostringstream os;
      os << "step rule is not bijective: states " << preimage[perm_[j]] << " and " << j
         << " both map to " << perm_[j];
      throw InvalidInput(os.str());
    }
    preimage[perm_[j]] = j;
  }
}

std::vector<std::vector<std::size_t>> EvolutionOperator::cycles() const {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> visited(perm_.size(), false);
  for (std::size_t start = 0; start < perm_.size(); ++start) {
    if (visited[start]) continue;
    std::vector<std::size_t> cycle;
    for (std::size_t s = start; !visited[s]; s = perm_[s]) {
      visited[s] = true;
      cycle.push_back(s);
    }
    out.push_back(std::move(cycle));
  }
  return out;
}

std::uint64_t EvolutionOperator::order() const {
  std::uint64_t result = 1;
  for (const auto& c : cycles()) {
    const auto len = static_cast<std::uint64_t>(c.size());
    const std::uint64_t factor = len / std::gcd(result, len);
    if (result > std::numeric_limits<std::uint64_t>::max() / factor) return 0;
    result *= factor;
  }
  return result;
}

ComplexMatrix EvolutionOperator::matrix() const {
  if (perm_.size() > kMaxDenseStates) {
    std::ostringstream os;
    os << "dense evolution operator limited to " << kMaxDenseStates << " states, automaton has "
       << perm_.size();
    throw InvalidInput(os.str());
  }
  const auto n = static_cast<Eigen::Index>(perm_.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) m(static_cast<Eigen::Index>(perm_[j]), j) = 1.0;
  return {std::move(m), linalg::Basis::indexed(perm_.size())};
}

EvolutionOperator build_evolution(const AutomatonSpec& spec) {
  return EvolutionOperator(spec.step_rule());
}

ComplexMatrix extract_hamiltonian(const EvolutionOperator& u, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("time step dt must be positive");
  if (u.size() > kMaxDenseStates) {
    throw InvalidInput("Hamiltonian extraction limited to " + std::to_string(kMaxDenseStates) +
                       " states");
  }
  const linalg::PhaseBase base;
  const auto n = static_cast<Eigen::Index>(u.size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);

  // Along a cycle j_0 -> j_1 -> ... the modes c_k = e^{2 pi i r k / m} / sqrt(m)
  // have U-eigenvalue e^{-i theta_r}, theta_r = 2 pi r / m in [0, 2 pi).
  // H restricted to the cycle is the circulant with first column
  //   h_d = (1 / (m dt)) sum_r theta_r e^{2 pi i r d / m}.
  for (const auto& cycle : u.cycles()) {
    const std::size_t m = cycle.size();
    std::vector<Complex> h_d(m);
    for (std::size_t d = 0; d < m; ++d) {
      Complex sum = 0.0;
      for (std::size_t r = 0; r < m; ++r) {
        const double theta = linalg::kTwoPi * static_cast<double>(r) / static_cast<double>(m);
        const double frac = static_cast<double>((r * d) % m) / static_cast<double>(m);
        sum += theta * base.phase(frac);
      }
      h_d[d] = sum / (static_cast<double>(m) * dt);
    }
    h_d[0] = h_d[0].real();
    for (std::size_t d = 1; d < m; ++d) {
      if (2 * d == m) h_d[d] = h_d[d].real();
      if (d > m - d) h_d[d] = std::conj(h_d[m - d]);
    }
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t l = 0; l < m; ++l) {
        h(static_cast<Eigen::Index>(cycle[k]), static_cast<Eigen::Index>(cycle[l])) =
            h_d[(k + m - l) % m];
      }
    }
  }
  return {std::move(h), linalg::Basis::indexed(u.size())};
}

ComplexVector evolve_state(const EvolutionOperator& u, const ComplexVector& psi, std::int64_t steps) {
  if (psi.dim() != u.size()) throw InvalidInput("evolve_state: state dimension does not match operator");
  if (steps < 0) throw InvalidInput("evolve_state: steps must be non-negative");
  Eigen::VectorXcd cur = psi.entries();
  Eigen::VectorXcd next(cur.size());
  const std::uint64_t period = u.order();
  const auto effective = period ? static_cast<std::uint64_t>(steps) % period : static_cast<std::uint64_t>(steps);
  for (std::uint64_t s = 0; s < effective; ++s) {
    for (std::size_t j = 0; j < u.size(); ++j) {
      next(static_cast<Eigen::Index>(u.image(j))) = cur(static_cast<Eigen::Index>(j));
    }
    cur.swap(next);
  }
  return {std::move(cur), psi.basis()};
}

// ---------------------------------------------------------------- density

OntologicalDensityMatrix::OntologicalDensityMatrix(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvalidInput("density matrix needs at least one weight");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw InvalidInput("density weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "density weights sum to " << total << ", not 1";
    throw InvalidInput(os.str());
  }
}

OntologicalDensityMatrix OntologicalDensityMatrix::pure(std::size_t n, std::size_t state) {
  if (state >= n) throw InvalidInput("pure state index out of range");
  std::vector<double> w(n, 0.0);
  w[state] = 1.0;
  return OntologicalDensityMatrix(std::move(w));
}

OntologicalDensityMatrix OntologicalDensityMatrix::uniform(std::size_t n) {
  return OntologicalDensityMatrix(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ComplexMatrix OntologicalDensityMatrix::matrix() const {
  Eigen::VectorXcd d(static_cast<Eigen::Index>(weights_.size()));
  for (std::size_t i = 0; i < weights_.size(); ++i) d(static_cast<Eigen::Index>(i)) = weights_[i];
  return ComplexMatrix::diagonal(d, linalg::Basis::indexed(weights_.size()));
}

OntologicalDensityMatrix evolve_density(const EvolutionOperator& u,
                                        const OntologicalDensityMatrix& rho, std::int64_t steps) {
  if (rho.size() != u.size()) throw InvalidInput("evolve_density: dimension mismatch");
  if (steps < 0) throw InvalidInput("evolve_density: steps must be non-negative");
  std::vector<double> cur = rho.weights(), next(cur.size());
  const std::uint64_t period = u.order();
  const auto effective = period ? static_cast<std::uint64_t>(steps) % period : static_cast<std::uint64_t>(steps);
  for (std::uint64_t s = 0; s < effective; ++s) {
    for (std::size_t j = 0; j < u.size(); ++j) next[u.image(j)] = cur[j];
    cur.swap(next);
  }
  return OntologicalDensityMatrix(std::move(cur));
}

Complex expectation(const OntologicalDensityMatrix& rho, const ComplexMatrix& o) {
  if (!o.is_square() || o.rows() != rho.size()) {
    throw InvalidInput("expectation: observable dimension does not match density matrix");
  }
  Complex sum = 0.0;
  for (std::size_t q = 0; q < rho.size(); ++q) sum += rho.weights()[q] * o(q, q);
  return sum;
}

double schrodinger_residual(const EvolutionOperator& u, const ComplexMatrix& h, double dt,
                            const ComplexVector& psi) {
  if (psi.dim() != u.size() || h.rows() != u.size()) {
    throw InvalidInput("schrodinger_residual: dimension mismatch");
  }
  const ComplexVector lhs = evolve_state(u, psi, 1);
  const ComplexVector rhs = linalg::unitary_exp(h, dt) * psi;
  return (lhs.entries() - rhs.entries()).norm();
}

}  // namespace cadual::ca
