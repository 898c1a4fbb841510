#include "cadual/pq_map.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace cadual::pq {

namespace {

constexpr double kInvTwoPi = 1.0 / linalg::kTwoPi;
constexpr Complex kIOverTwoPi{0.0, kInvTwoPi};

double parity_sign(std::int64_t k) { return (k % 2 == 0) ? 1.0 : -1.0; }

std::vector<Eigen::Index> interior_indices(const PQLattice& lattice, std::int64_t margin) {
  const std::int64_t lim_q = lattice.q_window().n() - margin;
  const std::int64_t lim_p = lattice.p_window().n() - margin;
  std::vector<Eigen::Index> out;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    if (std::abs(lattice.q_at(i)) <= lim_q && std::abs(lattice.p_at(i)) <= lim_p) {
      out.push_back(static_cast<Eigen::Index>(i));
    }
  }
  return out;
}

void check_margin(const PQLattice& lattice, std::int64_t margin) {
  const std::int64_t lim = std::min(lattice.q_window().n(), lattice.p_window().n());
  if (margin < 0 || margin >= lim) {
    std::ostringstream os;
    os << "interior margin " << margin << " must lie in [0, " << lim << ")";
    throw InvalidInput(os.str());
  }
}

}  // namespace

TruncationWindow::TruncationWindow(std::int64_t n) : n_(n) {
  if (n < 1) throw InvalidInput("truncation window half-width N must be positive");
}

std::size_t TruncationWindow::index_of(std::int64_t value) const {
  if (!contains(value)) throw InvalidInput("value " + std::to_string(value) + " outside window");
  return static_cast<std::size_t>(value + n_);
}

linalg::Basis TruncationWindow::basis() const {
  std::vector<linalg::BasisLabel> labels;
  labels.reserve(dim());
  for (std::int64_t q = -n_; q <= n_; ++q) labels.push_back({q});
  return linalg::Basis(std::move(labels));
}

PQLattice::PQLattice(TruncationWindow q, TruncationWindow p) : q_(q), p_(p) {
  std::vector<linalg::BasisLabel> labels;
  labels.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) labels.push_back({q_at(i), p_at(i)});
  basis_ = linalg::Basis(std::move(labels));
}

std::size_t PQLattice::index(std::int64_t q, std::int64_t p) const {
  return q_.index_of(q) * p_.dim() + p_.index_of(p);
}

ComplexVector edge_state(const TruncationWindow& window) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(window.dim()));
  for (std::size_t i = 0; i < window.dim(); ++i) {
    v(static_cast<Eigen::Index>(i)) = parity_sign(window.value_at(i));
  }
  return {std::move(v), window.basis()};
}

ComplexVector edge_state(const PQLattice& lattice) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(lattice.size()));
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = parity_sign(lattice.q_at(i) + lattice.p_at(i));
  }
  return {std::move(v), lattice.basis()};
}

ComplexMatrix integer_operator(const TruncationWindow& window) {
  Eigen::VectorXcd d(static_cast<Eigen::Index>(window.dim()));
  for (std::size_t i = 0; i < window.dim(); ++i) {
    d(static_cast<Eigen::Index>(i)) = static_cast<double>(window.value_at(i));
  }
  return ComplexMatrix::diagonal(d, window.basis());
}

ComplexMatrix q_operator(const PQLattice& lattice) {
  Eigen::VectorXcd d(static_cast<Eigen::Index>(lattice.size()));
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    d(static_cast<Eigen::Index>(i)) = static_cast<double>(lattice.q_at(i));
  }
  return ComplexMatrix::diagonal(d, lattice.basis());
}

ComplexMatrix p_operator(const PQLattice& lattice) {
  Eigen::VectorXcd d(static_cast<Eigen::Index>(lattice.size()));
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    d(static_cast<Eigen::Index>(i)) = static_cast<double>(lattice.p_at(i));
  }
  return ComplexMatrix::diagonal(d, lattice.basis());
}

ComplexMatrix build_eta(const TruncationWindow& window) {
  const auto n = static_cast<Eigen::Index>(window.dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      if (r == c) continue;
      const std::int64_t d = window.value_at(static_cast<std::size_t>(r)) -
                             window.value_at(static_cast<std::size_t>(c));
      // Same rounding for d and -d keeps the matrix exactly Hermitian.
      m(r, c) = Complex(0.0, parity_sign(d) / (linalg::kTwoPi * static_cast<double>(d)));
    }
  }
  return {std::move(m), window.basis()};
}

Complex eta_fourier_coefficient(std::int64_t n) {
  if (n == 0) return 0.0;
  return Complex(0.0, parity_sign(n) / (linalg::kTwoPi * static_cast<double>(n)));
}

double eta_commutator_check(const TruncationWindow& window) {
  const ComplexMatrix comm = linalg::commutator(build_eta(window), integer_operator(window));
  const ComplexVector psi = edge_state(window);
  const ComplexMatrix target =
      (ComplexMatrix::identity(window.basis()) - linalg::outer(psi, psi)) * kIOverTwoPi;
  return linalg::max_abs_diff(comm, target);
}

namespace {

template <typename Entry>
ComplexMatrix build_pair_operator(const PQLattice& lattice, Entry entry) {
  const auto n = static_cast<Eigen::Index>(lattice.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto q1 = lattice.q_at(static_cast<std::size_t>(r));
    const auto p1 = lattice.p_at(static_cast<std::size_t>(r));
    for (Eigen::Index c = 0; c < n; ++c) {
      if (r == c) continue;
      const std::int64_t dq = lattice.q_at(static_cast<std::size_t>(c)) - q1;
      const std::int64_t dp = lattice.p_at(static_cast<std::size_t>(c)) - p1;
      m(r, c) = entry(dq, dp);
    }
  }
  return {std::move(m), lattice.basis()};
}

}  // namespace

ComplexMatrix build_aQ(const PQLattice& lattice) {
  return build_pair_operator(lattice, [](std::int64_t dq, std::int64_t dp) {
    const double denom = linalg::kTwoPi * static_cast<double>(dp * dp + dq * dq);
    return Complex(0.0, -parity_sign(dp + dq) * static_cast<double>(dp) / denom);
  });
}

ComplexMatrix build_aP(const PQLattice& lattice) {
  return build_pair_operator(lattice, [](std::int64_t dq, std::int64_t dp) {
    const double denom = linalg::kTwoPi * static_cast<double>(dp * dp + dq * dq);
    return Complex(0.0, parity_sign(dp + dq) * static_cast<double>(dq) / denom);
  });
}

CommutatorDefect qp_commutator_defect(const PQLattice& lattice, std::int64_t interior_margin) {
  check_margin(lattice, interior_margin);
  const Eigen::MatrixXcd q = (q_operator(lattice) + build_aQ(lattice)).entries();
  const Eigen::MatrixXcd p = (p_operator(lattice) + build_aP(lattice)).entries();
  const auto inner = interior_indices(lattice, interior_margin);
  const auto m = static_cast<Eigen::Index>(inner.size());

  // Only the interior block of [q, p] is needed; the sums still run over
  // the whole window.
  const Eigen::MatrixXcd comm = q(inner, Eigen::all) * p(Eigen::all, inner) -
                                p(inner, Eigen::all) * q(Eigen::all, inner);
  const Eigen::VectorXcd edge = edge_state(lattice).entries()(inner);
  const Eigen::MatrixXcd edge_term = -kIOverTwoPi * (edge * edge.adjoint());
  const Eigen::MatrixXcd canonical = kIOverTwoPi * Eigen::MatrixXcd::Identity(m, m);

  CommutatorDefect out;
  out.interior_size = inner.size();
  out.defect = (comm - canonical - edge_term).cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd excess = comm - canonical;
  out.edge_overlap = (edge_term.conjugate().cwiseProduct(excess)).sum().real() /
                     edge_term.squaredNorm();
  return out;
}

double qp_action_defect(const PQLattice& lattice, const ComplexVector& v, std::int64_t interior_margin) {
  check_margin(lattice, interior_margin);
  if (!(v.basis() == lattice.basis())) throw InvalidInput("qp_action_defect: vector basis mismatch");
  const ComplexMatrix q = q_operator(lattice) + build_aQ(lattice);
  const ComplexMatrix p = p_operator(lattice) + build_aP(lattice);
  const Eigen::VectorXcd w = q.entries() * (p.entries() * v.entries()) -
                             p.entries() * (q.entries() * v.entries());
  const auto inner = interior_indices(lattice, interior_margin);
  return (w(inner) - kIOverTwoPi * v.entries()(inner)).cwiseAbs().maxCoeff();
}

RealDecomposition decompose_real(double x) {
  if (!std::isfinite(x)) throw InvalidInput("decompose_real: input is not finite");
  double q = std::ceil(x - 0.5);
  double eta = x - q;
  if (eta > 0.5) {
    q += 1.0;
    eta = x - q;
  } else if (eta <= -0.5) {
    q -= 1.0;
    eta = x - q;
  }
  return {static_cast<std::int64_t>(q), eta};
}

Complex p_basis_kernel(std::int64_t k, double kappa, std::int64_t q, std::int64_t p) {
  const linalg::PhaseBase base;
  const std::int64_t shift = k - p;
  // e^{-2 pi i kappa Q}; kappa * Q is reduced modulo 1 inside phase().
  const Complex ph = base.phase(-kappa * static_cast<double>(q));
  const double denom = static_cast<double>(shift) + kappa;
  if (std::abs(denom) < 1e-12) {
    // shift = 0 and kappa ~ 0: sin(pi kappa) / (pi kappa) -> 1.
    const double x = std::numbers::pi * kappa;
    const double sinc = 1.0 - x * x / 6.0;
    return sinc * ph;
  }
  const double amp = std::sin(std::numbers::pi * kappa) / std::numbers::pi;
  return amp * parity_sign(shift) * ph / denom;
}

double PGrid::discretized_norm() const {
  if (kappa_values.empty()) return 0.0;
  return values.squaredNorm() / static_cast<double>(kappa_values.size());
}

PGrid transform_to_p_basis(const PQLattice& lattice, const ComplexVector& state,
                           const TruncationWindow& k_window, const std::vector<double>& kappa_grid) {
  if (!(state.basis() == lattice.basis())) throw InvalidInput("transform_to_p_basis: state basis mismatch");
  for (double kappa : kappa_grid) {
    if (!(kappa > -0.5 && kappa <= 0.5)) throw InvalidInput("kappa grid must lie in (-1/2, 1/2]");
  }
  PGrid grid;
  grid.kappa_values = kappa_grid;
  for (std::size_t i = 0; i < k_window.dim(); ++i) grid.k_values.push_back(k_window.value_at(i));
  grid.values = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(k_window.dim()),
                                       static_cast<Eigen::Index>(kappa_grid.size()));

  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    if (state[i] != Complex(0.0)) support.push_back(i);
  }
  for (Eigen::Index kr = 0; kr < grid.values.rows(); ++kr) {
    const std::int64_t k = grid.k_values[static_cast<std::size_t>(kr)];
    for (Eigen::Index kc = 0; kc < grid.values.cols(); ++kc) {
      const double kappa = kappa_grid[static_cast<std::size_t>(kc)];
      Complex sum = 0.0;
      for (std::size_t i : support) {
        sum += p_basis_kernel(k, kappa, lattice.q_at(i), lattice.p_at(i)) * state[i];
      }
      grid.values(kr, kc) = sum;
    }
  }
  return grid;
}

std::vector<double> uniform_kappa_grid(std::size_t m) {
  std::vector<double> out(m);
  for (std::size_t j = 0; j < m; ++j) {
    out[j] = -0.5 + (static_cast<double>(j) + 0.5) / static_cast<double>(m);
  }
  return out;
}

}  // namespace cadual::pq
