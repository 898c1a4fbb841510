#include "cadual/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace cadual::linalg {

namespace {

void require_same(const Basis& a, const Basis& b, const char* what) {
  if (!(a == b)) {
    std::ostringstream os;
    os << what << ": basis mismatch (" << a.size() << " vs " << b.size() << " labels)";
    throw InvalidInput(os.str());
  }
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (!m.is_square()) {
    throw InvalidInput(std::string(what) + ": matrix is not square over a single basis");
  }
}

}  // namespace

Basis::Basis(std::vector<BasisLabel> labels) {
  std::vector<const BasisLabel*> order(labels.size());
  std::transform(labels.begin(), labels.end(), order.begin(), [](const auto& l) { return &l; });
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return *a < *b; });
  auto dup = std::adjacent_find(order.begin(), order.end(), [](auto* a, auto* b) { return *a == *b; });
  if (dup != order.end()) {
    throw InvalidInput("duplicate basis label " + describe(**dup));
  }
  labels_ = std::make_shared<const std::vector<BasisLabel>>(std::move(labels));
}

Basis Basis::indexed(std::size_t n) {
  std::vector<BasisLabel> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = {static_cast<std::int64_t>(i)};
  return Basis(std::move(labels));
}

const std::vector<BasisLabel>& Basis::labels() const {
  static const std::vector<BasisLabel> empty;
  return labels_ ? *labels_ : empty;
}

bool Basis::operator==(const Basis& other) const {
  if (labels_ == other.labels_) return true;
  return labels() == other.labels();
}

std::string describe(const BasisLabel& label) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < label.size(); ++i) os << (i ? "," : "") << label[i];
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------- vectors

ComplexVector::ComplexVector(Eigen::VectorXcd entries, Basis basis)
    : entries_(std::move(entries)), basis_(std::move(basis)) {
  if (static_cast<std::size_t>(entries_.size()) != basis_.size()) {
    throw InvalidInput("vector entry count does not match its basis");
  }
}

ComplexVector ComplexVector::zero(const Basis& basis) {
  return {Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size())), basis};
}

ComplexVector ComplexVector::basis_state(const Basis& basis, std::size_t index) {
  if (index >= basis.size()) throw InvalidInput("basis state index out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return {std::move(v), basis};
}

ComplexVector ComplexVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw InvalidInput("cannot normalize the zero vector");
  return {entries_ / n, basis_};
}

Complex ComplexVector::dot(const ComplexVector& other) const {
  require_same(basis_, other.basis_, "dot");
  return entries_.dot(other.entries_);
}

// ---------------------------------------------------------------- matrices

ComplexMatrix::ComplexMatrix(Eigen::MatrixXcd entries, Basis rows, Basis cols)
    : entries_(std::move(entries)), row_basis_(std::move(rows)), col_basis_(std::move(cols)) {
  if (static_cast<std::size_t>(entries_.rows()) != row_basis_.size() ||
      static_cast<std::size_t>(entries_.cols()) != col_basis_.size()) {
    throw InvalidInput("matrix shape does not match its row/column bases");
  }
}

ComplexMatrix::ComplexMatrix(Eigen::MatrixXcd entries, Basis basis)
    : ComplexMatrix(std::move(entries), basis, basis) {}

ComplexMatrix ComplexMatrix::identity(const Basis& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  return {Eigen::MatrixXcd::Identity(n, n), basis};
}

ComplexMatrix ComplexMatrix::zero(const Basis& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  return {Eigen::MatrixXcd::Zero(n, n), basis};
}

ComplexMatrix ComplexMatrix::diagonal(const Eigen::VectorXcd& diag, const Basis& basis) {
  if (static_cast<std::size_t>(diag.size()) != basis.size()) {
    throw InvalidInput("diagonal length does not match basis");
  }
  return {diag.asDiagonal().toDenseMatrix(), basis};
}

ComplexMatrix ComplexMatrix::adjoint() const {
  return {entries_.adjoint(), col_basis_, row_basis_};
}

Complex ComplexMatrix::trace() const {
  require_square(*this, "trace");
  return entries_.trace();
}

double ComplexMatrix::max_abs() const {
  return entries_.size() == 0 ? 0.0 : entries_.cwiseAbs().maxCoeff();
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
  require_same(col_basis_, rhs.row_basis_, "matrix product");
  return {entries_ * rhs.entries_, row_basis_, rhs.col_basis_};
}

ComplexVector ComplexMatrix::operator*(const ComplexVector& rhs) const {
  require_same(col_basis_, rhs.basis(), "matrix-vector product");
  return {entries_ * rhs.entries(), row_basis_};
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
  require_same(row_basis_, rhs.row_basis_, "matrix sum");
  require_same(col_basis_, rhs.col_basis_, "matrix sum");
  return {entries_ + rhs.entries_, row_basis_, col_basis_};
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
  require_same(row_basis_, rhs.row_basis_, "matrix difference");
  require_same(col_basis_, rhs.col_basis_, "matrix difference");
  return {entries_ - rhs.entries_, row_basis_, col_basis_};
}

ComplexMatrix ComplexMatrix::operator*(Complex scale) const {
  return {entries_ * scale, row_basis_, col_basis_};
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).max_abs();
}

double hermiticity_defect(const ComplexMatrix& a) {
  require_square(a, "hermiticity_defect");
  return (a.entries().adjoint() - a.entries()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const ComplexMatrix& u) {
  require_square(u, "unitarity_defect");
  const auto n = static_cast<Eigen::Index>(u.rows());
  return (u.entries().adjoint() * u.entries() - Eigen::MatrixXcd::Identity(n, n))
      .cwiseAbs()
      .maxCoeff();
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "commutator");
  require_square(b, "commutator");
  require_same(a.row_basis(), b.row_basis(), "commutator");
  const Eigen::MatrixXcd ab = a.entries() * b.entries();
  const Eigen::MatrixXcd ba = b.entries() * a.entries();
  return {ab - ba, a.row_basis()};
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "anticommutator");
  require_square(b, "anticommutator");
  require_same(a.row_basis(), b.row_basis(), "anticommutator");
  const Eigen::MatrixXcd ab = a.entries() * b.entries();
  const Eigen::MatrixXcd ba = b.entries() * a.entries();
  return {ab + ba, a.row_basis()};
}

ComplexMatrix outer(const ComplexVector& v, const ComplexVector& w) {
  return {v.entries() * w.entries().adjoint(), v.basis(), w.basis()};
}

Basis kron(const Basis& a, const Basis& b) {
  std::vector<BasisLabel> labels;
  labels.reserve(a.size() * b.size());
  for (const auto& la : a.labels()) {
    for (const auto& lb : b.labels()) {
      BasisLabel l = la;
      l.insert(l.end(), lb.begin(), lb.end());
      labels.push_back(std::move(l));
    }
  }
  return Basis(std::move(labels));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const auto ar = a.entries().rows(), ac = a.entries().cols();
  const auto br = b.entries().rows(), bc = b.entries().cols();
  Eigen::MatrixXcd out(ar * br, ac * bc);
  for (Eigen::Index i = 0; i < ar; ++i) {
    for (Eigen::Index j = 0; j < ac; ++j) {
      out.block(i * br, j * bc, br, bc) = a.entries()(i, j) * b.entries();
    }
  }
  return {std::move(out), kron(a.row_basis(), b.row_basis()), kron(a.col_basis(), b.col_basis())};
}

// ---------------------------------------------------------------- spectra

UnitaryEigensystem eigendecompose_unitary(const ComplexMatrix& u, double tol) {
  require_square(u, "eigendecompose_unitary");
  const double defect = unitarity_defect(u);
  if (defect > tol) {
    std::ostringstream os;
    os << "eigendecompose_unitary: input is not unitary (||U^H U - I||_max = " << defect
       << " > " << tol << ")";
    throw InvalidInput(os.str());
  }

  // A normal matrix has a diagonal Schur form, so the unitary Schur factor
  // already holds an orthonormal eigenbasis, degenerate clusters included.
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(u.entries());
  if (schur.info() != Eigen::Success) {
    throw NumericalError("eigendecompose_unitary: Schur iteration did not converge");
  }
  const Eigen::MatrixXcd& t = schur.matrixT();
  const Eigen::MatrixXcd& q = schur.matrixU();
  const auto n = t.rows();

  struct Mode {
    double phase;
    Eigen::VectorXcd vec;
  };
  std::vector<Mode> modes;
  modes.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    double theta = -std::arg(t(k, k));
    if (theta < 0.0) theta += kTwoPi;
    if (theta >= kTwoPi - tol) theta = 0.0;
    Eigen::VectorXcd v = q.col(k);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) > 1e3 * tol) {
        v *= std::conj(v(i)) / std::abs(v(i));
        v(i) = std::abs(v(i));
        break;
      }
    }
    modes.push_back({theta, std::move(v)});
  }

  auto lex_less = [tol](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (std::abs(a(i).real() - b(i).real()) > tol) return a(i).real() < b(i).real();
      if (std::abs(a(i).imag() - b(i).imag()) > tol) return a(i).imag() < b(i).imag();
    }
    return false;
  };
  std::stable_sort(modes.begin(), modes.end(),
                   [](const Mode& a, const Mode& b) { return a.phase < b.phase; });
  for (std::size_t begin = 0; begin < modes.size();) {
    std::size_t end = begin + 1;
    while (end < modes.size() && modes[end].phase - modes[end - 1].phase <= tol) ++end;
    std::stable_sort(modes.begin() + static_cast<std::ptrdiff_t>(begin),
                     modes.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](const Mode& a, const Mode& b) { return lex_less(a.vec, b.vec); });
    begin = end;
  }

  UnitaryEigensystem out;
  Eigen::MatrixXcd vectors(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& m = modes[static_cast<std::size_t>(k)];
    out.phases.push_back(m.phase);
    vectors.col(k) = m.vec;
  }

  const Eigen::MatrixXcd residual =
      u.entries() * vectors -
      vectors * Eigen::VectorXcd(Eigen::VectorXd::Map(out.phases.data(), n)
                                     .unaryExpr([](double th) { return std::polar(1.0, -th); }))
                    .asDiagonal();
  const double worst = n == 0 ? 0.0 : residual.cwiseAbs().maxCoeff();
  if (worst > tol) {
    std::ostringstream os;
    os << "eigendecompose_unitary: eigen-residual " << worst << " exceeds tolerance " << tol;
    throw NumericalError(os.str());
  }
  out.vectors = ComplexMatrix(std::move(vectors), u.row_basis(), Basis::indexed(static_cast<std::size_t>(n)));
  return out;
}

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solve_hermitian(const ComplexMatrix& h, double tol,
                                                                const char* what) {
  require_square(h, what);
  const double defect = hermiticity_defect(h);
  if (defect > tol) {
    std::ostringstream os;
    os << what << ": input is not Hermitian (defect " << defect << ")";
    throw InvalidInput(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.entries());
  if (solver.info() != Eigen::Success) {
    throw NumericalError(std::string(what) + ": Hermitian eigen-solver did not converge");
  }
  return solver;
}

}  // namespace

ComplexMatrix unitary_exp(const ComplexMatrix& h, double t, double tol) {
  const auto solver = solve_hermitian(h, tol, "unitary_exp");
  const Eigen::VectorXcd phases =
      solver.eigenvalues().unaryExpr([t](double e) { return std::polar(1.0, -e * t); });
  const Eigen::MatrixXcd& v = solver.eigenvectors();
  return {v * phases.asDiagonal() * v.adjoint(), h.row_basis()};
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h, double tol) {
  const auto solver = solve_hermitian(h, tol, "hermitian_eigenvalues");
  const Eigen::VectorXd& e = solver.eigenvalues();
  return {e.data(), e.data() + e.size()};
}

Complex PhaseBase::phase(double x) const {
  const double frac = x - std::nearbyint(x);
  return std::polar(1.0, kTwoPi * frac);
}

}  // namespace cadual::linalg
