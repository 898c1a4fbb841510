#include <gtest/gtest.h>

#include <numbers>

#include "cadual/ca_engine.hpp"
#include "cadual/linalg.hpp"
#include "cadual/random.hpp"

using namespace cadual;
using namespace cadual::linalg;

namespace {

ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (const auto& v : r) m(i, j++) = v;
    ++i;
  }
  return ComplexMatrix(m, Basis::indexed(static_cast<std::size_t>(m.rows())));
}

ComplexMatrix random_unitary(Rng& rng, std::size_t n) {
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (auto& x : m.reshaped()) x = Complex(rng.unit() - 0.5, rng.unit() - 0.5);
  return unitary_exp(ComplexMatrix((m + m.adjoint()) / 2.0, Basis::indexed(n)), 3.0);
}

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(Basis, RejectsDuplicateLabels) {
  EXPECT_THROW(Basis({{0}, {1}, {0}}), InvalidInput);
}

TEST(Basis, MismatchedOperandsAreRejected) {
  const auto a = ComplexMatrix::identity(Basis::indexed(2));
  const auto b = ComplexMatrix::identity(Basis({{5}, {6}}));
  EXPECT_THROW(a * b, InvalidInput);
  EXPECT_THROW(a + b, InvalidInput);
  EXPECT_THROW(a * ComplexVector::zero(Basis::indexed(3)), InvalidInput);
}

TEST(Kron, ConcatenatesLabels) {
  const Basis k = kron(Basis({{1}, {2}}), Basis({{7}, {8}}));
  ASSERT_EQ(k.size(), 4U);
  EXPECT_EQ(k.label(1), (BasisLabel{1, 8}));
  EXPECT_EQ(k.label(2), (BasisLabel{2, 7}));
}

TEST(EigendecomposeUnitary, IdentityHasZeroPhases) {
  const auto es = eigendecompose_unitary(ComplexMatrix::identity(Basis::indexed(2)));
  EXPECT_EQ(es.phases, (std::vector<double>{0.0, 0.0}));
}

TEST(EigendecomposeUnitary, SwapHasPhasesZeroAndPi) {
  const auto es = eigendecompose_unitary(from_rows({{0.0, 1.0}, {1.0, 0.0}}));
  ASSERT_EQ(es.phases.size(), 2U);
  EXPECT_NEAR(es.phases[0], 0.0, 1e-12);
  EXPECT_NEAR(es.phases[1], std::numbers::pi, 1e-12);
}

TEST(EigendecomposeUnitary, ThreeCycleHasCubeRootPhases) {
  const auto es = eigendecompose_unitary(ca::EvolutionOperator({1, 2, 0}).matrix());
  ASSERT_EQ(es.phases.size(), 3U);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(es.phases[static_cast<std::size_t>(k)], kTwoPi * k / 3.0, 1e-12);
}

TEST(EigendecomposeUnitary, ResidualAndPhaseConvention) {
  Rng rng(11);
  const auto u = random_unitary(rng, 12);
  const auto es = eigendecompose_unitary(u);
  for (std::size_t k = 0; k < es.phases.size(); ++k) {
    const Eigen::VectorXcd v = es.vectors.entries().col(static_cast<Eigen::Index>(k));
    const Eigen::VectorXcd uv = u.entries() * v;
    EXPECT_LT((uv - std::exp(Complex(0.0, -es.phases[k])) * v).norm(), 1e-10);
    EXPECT_GE(es.phases[k], 0.0);
    EXPECT_LT(es.phases[k], kTwoPi);
    // First non-negligible entry real and positive.
    Eigen::Index first = 0;
    while (std::abs(v(first)) < 1e-7) ++first;
    EXPECT_GT(v(first).real(), 0.0);
    EXPECT_NEAR(v(first).imag(), 0.0, 1e-12);
  }
  EXPECT_TRUE(std::is_sorted(es.phases.begin(), es.phases.end()));
}

TEST(EigendecomposeUnitary, ReconstructsRandomAndDegenerateUnitaries) {
  Rng rng(3);
  std::vector<ComplexMatrix> cases{random_unitary(rng, 6), random_unitary(rng, 40),
                                   ca::EvolutionOperator({1, 0, 3, 2, 5, 4, 6}).matrix()};
  for (const auto& u : cases) {
    const auto es = eigendecompose_unitary(u);
    Eigen::MatrixXcd rebuilt = Eigen::MatrixXcd::Zero(u.entries().rows(), u.entries().cols());
    for (std::size_t k = 0; k < es.phases.size(); ++k) {
      const Eigen::VectorXcd v = es.vectors.entries().col(static_cast<Eigen::Index>(k));
      rebuilt += std::exp(Complex(0.0, -es.phases[k])) * v * v.adjoint();
    }
    EXPECT_LE((rebuilt - u.entries()).cwiseAbs().maxCoeff(), 10 * kDefaultTolerance);
  }
}

TEST(EigendecomposeUnitary, RejectsNonUnitary) {
  EXPECT_THROW(eigendecompose_unitary(from_rows({{1.0, 1.0}, {0.0, 1.0}})), InvalidInput);
}

TEST(UnitaryExp, DiagonalHamiltonian) {
  const auto u = unitary_exp(from_rows({{0.5, 0.0}, {0.0, -2.0}}), 0.7);
  EXPECT_NEAR(std::abs(u(0, 0) - std::exp(Complex(0.0, -0.35))), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(u(1, 1) - std::exp(Complex(0.0, 1.4))), 0.0, 1e-14);
  EXPECT_EQ(u(0, 1), Complex(0.0));
}

TEST(UnitaryExp, PauliX) {
  // exp(-i t X) = cos t I - i sin t X
  const double t = 0.4;
  const auto u = unitary_exp(from_rows({{0.0, 1.0}, {1.0, 0.0}}), t);
  EXPECT_NEAR(std::abs(u(0, 0) - std::cos(t)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(u(0, 1) - Complex(0.0, -std::sin(t))), 0.0, 1e-14);
}

TEST(HermitianEigenvalues, AscendingAndRejectsNonHermitian) {
  EXPECT_EQ(sorted(hermitian_eigenvalues(from_rows({{2.0, 0.0}, {0.0, -1.0}}))), (std::vector<double>{-1.0, 2.0}));
  EXPECT_THROW(hermitian_eigenvalues(from_rows({{0.0, 1.0}, {0.0, 0.0}})), InvalidInput);
}

TEST(Phase, Examples) {
  const PhaseBase base;
  EXPECT_NEAR(base.epsilon, 535.4916555247646, 1e-9);
  EXPECT_EQ(base.phase(0.0), Complex(1.0, 0.0));
  EXPECT_NEAR(std::abs(base.phase(0.5) - Complex(-1.0, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(base.phase(0.25) - Complex(0.0, 1.0)), 0.0, 1e-15);
}

TEST(Phase, MultiplicativeOverLargeArguments) {
  const PhaseBase base;
  Rng rng(5);
  for (int k = 0; k < 5000; ++k) {
    const double x = 2000.0 * rng.unit() - 1000.0, y = 2000.0 * rng.unit() - 1000.0;
    EXPECT_LE(std::abs(base.phase(x) * base.phase(y) - base.phase(x + y)), 1e-12);
    EXPECT_NEAR(std::abs(base.phase(x)), 1.0, 1e-15);
  }
}

TEST(Outer, Examples) {
  const auto b = Basis::indexed(2);
  const auto e0 = ComplexVector::basis_state(b, 0);
  EXPECT_EQ(outer(e0, e0).entries(), (Eigen::MatrixXcd(2, 2) << 1.0, 0.0, 0.0, 0.0).finished());

  const ComplexVector v(Eigen::Vector2cd(Complex(1.0, 2.0), Complex(-0.5, 0.0)), b);
  const ComplexVector w(Eigen::Vector2cd(Complex(0.0, 1.0), Complex(3.0, -1.0)), b);
  EXPECT_NEAR(std::abs(outer(v, w).trace() - w.dot(v)), 0.0, 1e-15);

  const auto h = ComplexVector(Eigen::Vector2cd(1.0, 1.0), b).normalized();
  EXPECT_NEAR((outer(h, h).entries().array() - 0.5).abs().maxCoeff(), 0.0, 1e-15);
}

TEST(Commutator, AntisymmetricBitForBit) {
  Rng rng(9);
  for (int k = 0; k < 10; ++k) {
    const auto a = random_unitary(rng, 7), b = random_unitary(rng, 7);
    EXPECT_EQ((commutator(a, b) + commutator(b, a)).max_abs(), 0.0);
  }
}

TEST(Defects, HermiticityAndUnitarity) {
  const auto m = from_rows({{1.0, Complex(0.0, 1.0)}, {Complex(0.0, -1.0), 2.0}});
  EXPECT_EQ(hermiticity_defect(m), 0.0);
  EXPECT_EQ(unitarity_defect(ComplexMatrix::identity(Basis::indexed(3))), 0.0);
  EXPECT_NEAR(unitarity_defect(from_rows({{2.0, 0.0}, {0.0, 1.0}})), 3.0, 1e-15);
}
