#pragma once

// Dense complex matrices and vectors over labeled bases.
//
// Every operator in the library lives on a finite basis window whose
// elements carry an integer-tuple label (a state index, an integer Q, a
// pair (Q, P), an occupation pattern, ...). Arithmetic between operands
// requires identical bases; mismatches raise InvalidInput.

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cadual/errors.hpp"

namespace cadual::linalg {

using Complex = std::complex<double>;
using BasisLabel = std::vector<std::int64_t>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kDefaultTolerance = 1e-10;

class Basis {
public:
  Basis() = default;
  explicit Basis(std::vector<BasisLabel> labels);

  // Labels {0}, {1}, ..., {n-1}.
  static Basis indexed(std::size_t n);

  std::size_t size() const { return labels_ ? labels_->size() : 0; }
  const BasisLabel& label(std::size_t i) const { return (*labels_)[i]; }
  const std::vector<BasisLabel>& labels() const;

  bool operator==(const Basis& other) const;

private:
  std::shared_ptr<const std::vector<BasisLabel>> labels_;
};

std::string describe(const BasisLabel& label);

class ComplexVector {
public:
  ComplexVector() = default;
  ComplexVector(Eigen::VectorXcd entries, Basis basis);
  static ComplexVector zero(const Basis& basis);
  static ComplexVector basis_state(const Basis& basis, std::size_t index);

  std::size_t dim() const { return static_cast<std::size_t>(entries_.size()); }
  const Basis& basis() const { return basis_; }
  const Eigen::VectorXcd& entries() const { return entries_; }
  Complex operator[](std::size_t i) const { return entries_(static_cast<Eigen::Index>(i)); }

  double norm() const { return entries_.norm(); }
  ComplexVector normalized() const;
  Complex dot(const ComplexVector& other) const;  // <this|other>

private:
  Eigen::VectorXcd entries_;
  Basis basis_;
};

class ComplexMatrix {
public:
  ComplexMatrix() = default;
  ComplexMatrix(Eigen::MatrixXcd entries, Basis rows, Basis cols);
  ComplexMatrix(Eigen::MatrixXcd entries, Basis basis);

  static ComplexMatrix identity(const Basis& basis);
  static ComplexMatrix zero(const Basis& basis);
  static ComplexMatrix diagonal(const Eigen::VectorXcd& diag, const Basis& basis);

  std::size_t rows() const { return static_cast<std::size_t>(entries_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(entries_.cols()); }
  bool is_square() const { return rows() == cols() && row_basis_ == col_basis_; }
  const Basis& row_basis() const { return row_basis_; }
  const Basis& col_basis() const { return col_basis_; }
  const Eigen::MatrixXcd& entries() const { return entries_; }

  Complex operator()(std::size_t r, std::size_t c) const {
    return entries_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double max_abs() const;

  ComplexMatrix operator*(const ComplexMatrix& rhs) const;
  ComplexVector operator*(const ComplexVector& rhs) const;
  ComplexMatrix operator+(const ComplexMatrix& rhs) const;
  ComplexMatrix operator-(const ComplexMatrix& rhs) const;
  ComplexMatrix operator*(Complex scale) const;

private:
  Eigen::MatrixXcd entries_;
  Basis row_basis_;
  Basis col_basis_;
};

// Maximum entrywise |a - b|; operands must share bases.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// ||A^H - A||_max
double hermiticity_defect(const ComplexMatrix& a);

// ||U^H U - I||_max
double unitarity_defect(const ComplexMatrix& u);

// AB - BA. AB and BA are each formed once, so
// commutator(B, A) == -commutator(A, B) bit for bit.
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

// AB + BA
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

// |v><w|
ComplexMatrix outer(const ComplexVector& v, const ComplexVector& w);

// Kronecker product; the label of (i, j) is the concatenation of labels.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
Basis kron(const Basis& a, const Basis& b);

struct UnitaryEigensystem {
  std::vector<double> phases;  // theta_k in [0, 2pi), ascending
  ComplexMatrix vectors;       // column k satisfies U v_k = exp(-i theta_k) v_k
};

// Spectral decomposition of a unitary matrix. Eigenvectors are orthonormal,
// each scaled so its first non-negligible entry is real and positive.
// Phases within tol of each other are a degenerate cluster; inside a cluster
// vectors are ordered lexicographically (real part, then imaginary part).
UnitaryEigensystem eigendecompose_unitary(const ComplexMatrix& u,
                                          double tol = kDefaultTolerance);

// exp(-i H t) for Hermitian H.
ComplexMatrix unitary_exp(const ComplexMatrix& h, double t,
                          double tol = kDefaultTolerance);

// Real spectrum of a Hermitian matrix, ascending.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h,
                                          double tol = kDefaultTolerance);

/// Exponentials in base epsilon = e^{2 pi}: phase(x) = epsilon^{ix} = e^{2 pi i x}.
struct PhaseBase {
  double epsilon = std::exp(kTwoPi);

  // The integer part of x is dropped before the angle is formed, which keeps
  // phase(x) phase(y) == phase(x + y) at machine precision for large |x|.
  Complex phase(double x) const;
};

}  // namespace cadual::linalg
