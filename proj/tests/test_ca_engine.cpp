#include <gtest/gtest.h>

#include <numbers>
#include <numeric>

#include "cadual/ca_engine.hpp"
#include "cadual/random.hpp"

using namespace cadual;
using namespace cadual::ca;
using linalg::Complex;

namespace {

std::vector<std::size_t> random_rule(Rng& rng, std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  rng.shuffle(p);
  return p;
}

std::vector<std::size_t> cyclic_shift(std::size_t n) {
  std::vector<std::size_t> p(n);
  for (std::size_t j = 0; j < n; ++j) p[j] = (j + 1) % n;
  return p;
}

std::vector<double> eigenvalues(const ComplexMatrix& h) {
  auto e = linalg::hermitian_eigenvalues(h);
  std::sort(e.begin(), e.end());
  return e;
}

}  // namespace

TEST(BuildEvolution, IdentityRule) {
  const auto u = build_evolution(AutomatonSpec::from_rule({0, 1, 2}));
  EXPECT_EQ(u.matrix().entries(), Eigen::MatrixXcd::Identity(3, 3));
}

TEST(BuildEvolution, CyclicShiftIsSubdiagonalPlusCorner) {
  const auto m = build_evolution(AutomatonSpec::from_rule(cyclic_shift(4))).matrix();
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
  expected(1, 0) = expected(2, 1) = expected(3, 2) = expected(0, 3) = 1.0;
  EXPECT_EQ(m.entries(), expected);
}

TEST(BuildEvolution, Swap) {
  const auto m = build_evolution(AutomatonSpec::from_pairs(2, {{0, 1}, {1, 0}})).matrix();
  EXPECT_EQ(m.entries(), (Eigen::MatrixXcd(2, 2) << 0.0, 1.0, 1.0, 0.0).finished());
}

TEST(BuildEvolution, ReportsCollision) {
  try {
    build_evolution(AutomatonSpec::from_rule({1, 1, 0}));
    FAIL() << "non-bijective rule accepted";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("states 0 and 1 both map to 1"), std::string::npos) << e.what();
  }
}

TEST(AutomatonSpec, RejectsMalformedTables) {
  EXPECT_THROW(AutomatonSpec::from_pairs(3, {{0, 1}, {1, 2}}), InvalidInput);
  EXPECT_THROW(AutomatonSpec::from_pairs(2, {{0, 1}, {0, 0}}), InvalidInput);
  EXPECT_THROW(AutomatonSpec::from_rule({0, 5}), InvalidInput);
  EXPECT_THROW(AutomatonSpec::from_rule({0}, 0.0), InvalidInput);
}

TEST(AutomatonSpec, CellLatticeMatchesBruteForce) {
  // Each cell takes its right neighbour's value: a rotation of the ring.
  CellLattice cells{4, 2, 1, {}};
  for (std::size_t idx = 0; idx < 8; ++idx) cells.table.push_back(idx & 1U);
  const auto spec = AutomatonSpec::from_cells(cells);
  ASSERT_EQ(spec.state_count(), 16U);
  for (std::size_t s = 0; s < 16; ++s) {
    // cell 0 is the most significant bit; new cell i = old cell i+1 (mod 4)
    const std::size_t expected = ((s << 1U) | (s >> 3U)) & 0xFU;
    EXPECT_EQ(spec.step_rule()[s], expected) << s;
  }
  EXPECT_NO_THROW(build_evolution(spec));
}

TEST(AutomatonSpec, IrreversibleCellRuleRejectedAtBuild) {
  CellLattice cells{3, 2, 1, std::vector<std::size_t>(8, 0)};
  EXPECT_THROW(build_evolution(AutomatonSpec::from_cells(cells)), InvalidInput);
}

TEST(EvolutionOperator, CyclesAndOrder) {
  const EvolutionOperator u({1, 0, 3, 4, 2, 5});
  EXPECT_EQ(u.cycles(), (std::vector<std::vector<std::size_t>>{{0, 1}, {2, 3, 4}, {5}}));
  EXPECT_EQ(u.order(), 6U);
}

TEST(EvolutionOperator, OrderOverflowReportsZero) {
  // Cycles of the first 16 primes: lcm ~ 3.3e19 > 2^64.
  std::vector<std::size_t> perm;
  std::size_t start = 0;
  for (std::size_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53}) {
    for (std::size_t k = 0; k < p; ++k) perm.push_back(start + (k + 1) % p);
    start += p;
  }
  const EvolutionOperator u(perm);
  EXPECT_EQ(u.order(), 0U);
  const auto psi = ComplexVector::basis_state(linalg::Basis::indexed(perm.size()), 0);
  EXPECT_EQ(evolve_state(u, psi, 3)[1], Complex(1.0));
}

TEST(ExtractHamiltonian, IdentityGivesZero) {
  const auto h = extract_hamiltonian(build_evolution(AutomatonSpec::from_rule({0, 1, 2})), 1.0);
  EXPECT_EQ(h.max_abs(), 0.0);
}

TEST(ExtractHamiltonian, SwapEigenvalues) {
  const auto e = eigenvalues(extract_hamiltonian(EvolutionOperator({1, 0}), 1.0));
  EXPECT_NEAR(e[0], 0.0, 1e-12);
  EXPECT_NEAR(e[1], std::numbers::pi, 1e-12);
}

TEST(ExtractHamiltonian, CycleEigenvaluesMatchEigenphases) {
  for (std::size_t n : {3, 4, 7, 12}) {
    const EvolutionOperator u(cyclic_shift(n));
    const auto e = eigenvalues(extract_hamiltonian(u, 1.0));
    const auto phases = linalg::eigendecompose_unitary(u.matrix()).phases;
    for (std::size_t k = 0; k < n; ++k) {
      EXPECT_NEAR(e[k], linalg::kTwoPi * static_cast<double>(k) / static_cast<double>(n), 1e-12);
      EXPECT_NEAR(e[k], phases[k], 1e-10);
    }
  }
}

TEST(ExtractHamiltonian, TimeStepScalesSpectrum) {
  const auto e = eigenvalues(extract_hamiltonian(EvolutionOperator(cyclic_shift(4)), 0.5));
  EXPECT_NEAR(e.back(), 3.0 * std::numbers::pi, 1e-12);
}

TEST(ExtractHamiltonian, RoundTripOnRandomRules) {
  Rng rng(17);
  for (std::size_t n : {2, 9, 64, 200, 512}) {
    const EvolutionOperator u(random_rule(rng, n));
    const double dt = 0.25 + rng.unit();
    const auto h = extract_hamiltonian(u, dt);
    EXPECT_LE(linalg::hermiticity_defect(h), 1e-12);
    EXPECT_LE(linalg::max_abs_diff(linalg::unitary_exp(h, dt), u.matrix()), 1e-10) << n;
    const auto e = eigenvalues(h);
    EXPECT_GE(e.front(), -1e-12);
    EXPECT_LT(e.back(), linalg::kTwoPi / dt);
  }
}

TEST(EvolveState, Examples) {
  const EvolutionOperator u(cyclic_shift(5));
  const auto basis = linalg::Basis::indexed(5);
  const auto e2 = ComplexVector::basis_state(basis, 2);
  EXPECT_EQ(evolve_state(u, e2, 0).entries(), e2.entries());
  EXPECT_EQ(evolve_state(u, e2, 1).entries(), ComplexVector::basis_state(basis, 3).entries());
  Rng rng(2);
  Eigen::VectorXcd v(5);
  for (auto& x : v) x = Complex(rng.unit(), rng.unit());
  const ComplexVector psi(v, basis);
  EXPECT_EQ(evolve_state(u, psi, 5).entries(), psi.entries());
  EXPECT_THROW(evolve_state(u, psi, -1), InvalidInput);
  EXPECT_THROW(evolve_state(u, ComplexVector::zero(linalg::Basis::indexed(4)), 1), InvalidInput);
}

TEST(Density, Validation) {
  EXPECT_THROW(OntologicalDensityMatrix({0.5, 0.6}), InvalidInput);
  EXPECT_THROW(OntologicalDensityMatrix({1.5, -0.5}), InvalidInput);
  EXPECT_NO_THROW(OntologicalDensityMatrix({0.25, 0.75}));
}

TEST(Expectation, Examples) {
  const auto basis = linalg::Basis::indexed(2);
  const auto o = ComplexMatrix::diagonal(Eigen::Vector2cd(2.0, 4.0), basis);
  EXPECT_EQ(expectation(OntologicalDensityMatrix::pure(2, 1), o), Complex(4.0));
  EXPECT_EQ(expectation(OntologicalDensityMatrix({0.25, 0.75}), o), Complex(3.5));
  EXPECT_NEAR(std::abs(expectation(OntologicalDensityMatrix::uniform(7),
                                   ComplexMatrix::identity(linalg::Basis::indexed(7))) - 1.0), 0.0, 1e-15);
}

TEST(Expectation, HeisenbergSchrodingerConsistency) {
  Rng rng(8);
  const std::size_t n = 24;
  const EvolutionOperator u(random_rule(rng, n));
  const auto m = u.matrix();
  std::vector<double> w(n);
  for (auto& x : w) x = rng.unit();
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= total;
  const OntologicalDensityMatrix rho(w);
  Eigen::MatrixXcd a(n, n);
  for (auto& x : a.reshaped()) x = Complex(rng.unit(), rng.unit());
  const ComplexMatrix o((a + a.adjoint()) / 2.0, m.row_basis());
  ComplexMatrix uk = ComplexMatrix::identity(m.row_basis());
  for (int k = 1; k <= 6; ++k) {
    uk = m * uk;
    const Complex lhs = expectation(evolve_density(u, rho, k), o);
    const Complex rhs = expectation(rho, uk.adjoint() * o * uk);
    EXPECT_LE(std::abs(lhs - rhs), 1e-12);
    EXPECT_LE(std::abs(lhs.imag()), 1e-12);
  }
}

TEST(Expectation, DiagonalObservablesStayDiagonal) {
  Rng rng(4);
  const auto m = EvolutionOperator(random_rule(rng, 30)).matrix();
  Eigen::VectorXcd d(30);
  for (auto& x : d) x = rng.unit();
  const auto conj = m * ComplexMatrix::diagonal(d, m.row_basis()) * m.adjoint();
  Eigen::MatrixXcd off = conj.entries();
  off.diagonal().setZero();
  EXPECT_EQ(off.cwiseAbs().maxCoeff(), 0.0);
}

TEST(SchrodingerResidual, Examples) {
  const EvolutionOperator u(cyclic_shift(4));
  const auto h = extract_hamiltonian(u, 1.0);
  Rng rng(12);
  Eigen::VectorXcd v(4);
  for (auto& x : v) x = Complex(rng.unit() - 0.5, rng.unit() - 0.5);
  EXPECT_LE(schrodinger_residual(u, h, 1.0, ComplexVector(v, h.row_basis()).normalized()), 1e-10);

  // Uniform superposition is the zero-eigenvalue eigenvector of the cycle.
  const auto flat = ComplexVector(Eigen::VectorXcd::Constant(4, 0.5), h.row_basis());
  EXPECT_LE(schrodinger_residual(u, h, 1.0, flat), 1e-12);

  const EvolutionOperator id({0, 1, 2});
  const auto zero = ComplexMatrix::zero(linalg::Basis::indexed(3));
  EXPECT_EQ(schrodinger_residual(id, zero, 1.0, ComplexVector::basis_state(zero.row_basis(), 1)), 0.0);
}

TEST(Budget, DenseMatrixCap) {
  std::vector<std::size_t> big(kMaxDenseStates + 1);
  std::iota(big.begin(), big.end(), std::size_t{0});
  EXPECT_THROW(EvolutionOperator(big).matrix(), InvalidInput);
}
