#pragma once

// Integer operators and their bounded conjugates on truncated windows.
//
// An integer Q in [-N, N] has a conjugate eta in (-1/2, 1/2]; a pair of
// integers (Q, P) assembles into real operators q = Q + a_Q, p = P + a_P
// whose commutator is canonical up to a single rank-one edge term.

#include <cstdint>
#include <vector>

#include "cadual/linalg.hpp"

namespace cadual::pq {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;

// Integers -N..N, in ascending order.
class TruncationWindow {
public:
  explicit TruncationWindow(std::int64_t n);

  std::int64_t n() const { return n_; }
  std::size_t dim() const { return static_cast<std::size_t>(2 * n_ + 1); }
  std::int64_t value_at(std::size_t index) const { return static_cast<std::int64_t>(index) - n_; }
  std::size_t index_of(std::int64_t value) const;
  bool contains(std::int64_t value) const { return value >= -n_ && value <= n_; }
  linalg::Basis basis() const;

private:
  std::int64_t n_;
};

// Basis of pairs (Q, P), row-major: index = iQ * dimP + iP.
class PQLattice {
public:
  PQLattice(TruncationWindow q, TruncationWindow p);
  static PQLattice square(std::int64_t n) { return {TruncationWindow(n), TruncationWindow(n)}; }

  const TruncationWindow& q_window() const { return q_; }
  const TruncationWindow& p_window() const { return p_; }
  std::size_t size() const { return q_.dim() * p_.dim(); }
  std::size_t index(std::int64_t q, std::int64_t p) const;
  std::int64_t q_at(std::size_t index) const { return q_.value_at(index / p_.dim()); }
  std::int64_t p_at(std::size_t index) const { return p_.value_at(index % p_.dim()); }
  const linalg::Basis& basis() const { return basis_; }

private:
  TruncationWindow q_;
  TruncationWindow p_;
  linalg::Basis basis_;
};

// Unnormalized edge states: entries (-1)^Q, resp. (-1)^{P+Q}.
ComplexVector edge_state(const TruncationWindow& window);
ComplexVector edge_state(const PQLattice& lattice);

// diag(Q) on the window.
ComplexMatrix integer_operator(const TruncationWindow& window);
// diag(Q) and diag(P) on the lattice.
ComplexMatrix q_operator(const PQLattice& lattice);
ComplexMatrix p_operator(const PQLattice& lattice);

// <Q1|eta|Q2> = (i / 2pi) (-1)^{Q1-Q2} / (Q1 - Q2), zero on the diagonal.
ComplexMatrix build_eta(const TruncationWindow& window);

// alpha_N = int_{-1/2}^{1/2} eta e^{-2 pi i N eta} d eta = i (-1)^N / (2 pi N); alpha_0 = 0.
Complex eta_fourier_coefficient(std::int64_t n);

// max |[eta, Q] - (i / 2pi)(I - |psi><psi|)| with <Q|psi> = (-1)^Q.
double eta_commutator_check(const TruncationWindow& window);

// With dQ = Q2 - Q1, dP = P2 - P1 and zero on the diagonal:
//   <Q1,P1|a_Q|Q2,P2> = (-1)^{dP+dQ+1} i dP / (2pi (dP^2 + dQ^2))
//   <Q1,P1|a_P|Q2,P2> = (-1)^{dP+dQ}   i dQ / (2pi (dP^2 + dQ^2))
ComplexMatrix build_aQ(const PQLattice& lattice);
ComplexMatrix build_aP(const PQLattice& lattice);

struct CommutatorDefect {
  // max |[q,p] - (i/2pi)(I - |edge><edge|)| over interior rows and columns.
  double defect = 0.0;
  // Least-squares weight c of the edge term in the interior block of
  // [q,p] - (i/2pi) I ~ -c (i/2pi)|edge><edge|; 1 means the full edge term.
  double edge_overlap = 0.0;
  std::size_t interior_size = 0;
};

// Interior: both |Q| <= N_Q - margin and |P| <= N_P - margin.
CommutatorDefect qp_commutator_defect(const PQLattice& lattice, std::int64_t interior_margin);

// max over interior rows of |([q,p] v)(Q,P) - (i/2pi) v(Q,P)|.
double qp_action_defect(const PQLattice& lattice, const ComplexVector& v, std::int64_t interior_margin);

// x = Q + eta with eta in (-1/2, 1/2]; ties x = n + 1/2 go to Q = n.
struct RealDecomposition {
  std::int64_t integer = 0;
  double fraction = 0.0;
};
RealDecomposition decompose_real(double x);

// (sin(pi kappa) / pi) (-1)^{K-P} e^{-2 pi i kappa Q} / (K - P + kappa), with
// the removable singularity at K - P + kappa = 0 taken as a sinc limit.
Complex p_basis_kernel(std::int64_t k, double kappa, std::int64_t q, std::int64_t p);

struct PGrid {
  std::vector<std::int64_t> k_values;
  std::vector<double> kappa_values;
  Eigen::MatrixXcd values;  // rows: K, columns: kappa

  // sum_K sum_kappa |psi(K, kappa)|^2 * (1 / kappa count); a midpoint rule
  // for int dkappa when the grid is uniform over the unit interval.
  double discretized_norm() const;
};

PGrid transform_to_p_basis(const PQLattice& lattice, const ComplexVector& state,
                           const TruncationWindow& k_window, const std::vector<double>& kappa_grid);

// m points kappa_j = -1/2 + (j + 1/2)/m.
std::vector<double> uniform_kappa_grid(std::size_t m);

}  // namespace cadual::pq
