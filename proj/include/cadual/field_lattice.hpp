#pragma once

// Free 1+1 dimensional field on a periodic lattice: left/right movers,
// Hamilton density, and the integer-operator realization a = A + eta.
//
// The classical part is templated on the scalar so that exact rational
// arithmetic can be used to check identities without rounding.

#include <cstdint>
#include <string>
#include <vector>

#include "cadual/linalg.hpp"
#include "cadual/pq_map.hpp"

namespace cadual::field {

template <typename T>
struct LatticeField1D {
  std::vector<T> phi;
  std::vector<T> pi;

  std::size_t sites() const { return phi.size(); }
};

template <typename T>
struct MoverFields {
  std::vector<T> left;
  std::vector<T> right;

  std::size_t sites() const { return left.size(); }
};

namespace detail {

inline std::size_t wrap(std::int64_t x, std::size_t n) {
  const auto m = static_cast<std::int64_t>(n);
  return static_cast<std::size_t>(((x % m) + m) % m);
}

template <typename T>
void check_shape(const LatticeField1D<T>& f) {
  if (f.phi.size() != f.pi.size()) throw InvalidInput("phi and pi must have the same site count");
  if (f.phi.size() < 3) throw InvalidInput("periodic lattice needs at least 3 sites");
}

template <typename T>
void check_shape(const MoverFields<T>& m) {
  if (m.left.size() != m.right.size()) throw InvalidInput("left and right movers differ in length");
  if (m.left.empty()) throw InvalidInput("mover fields are empty");
}

}  // namespace detail

// (phi(x+1) - phi(x-1)) / 2 with periodic indices.
template <typename T>
std::vector<T> symmetric_gradient(const std::vector<T>& phi) {
  const std::size_t n = phi.size();
  std::vector<T> out(n);
  for (std::size_t x = 0; x < n; ++x) {
    out[x] = (phi[detail::wrap(static_cast<std::int64_t>(x) + 1, n)] -
              phi[detail::wrap(static_cast<std::int64_t>(x) - 1, n)]) /
             T(2);
  }
  return out;
}

// a^L = pi + D phi, a^R = pi - D phi.
template <typename T>
MoverFields<T> split_movers(const LatticeField1D<T>& field) {
  detail::check_shape(field);
  const auto grad = symmetric_gradient(field.phi);
  MoverFields<T> m;
  m.left.resize(field.sites());
  m.right.resize(field.sites());
  for (std::size_t x = 0; x < field.sites(); ++x) {
    m.left[x] = field.pi[x] + grad[x];
    m.right[x] = field.pi[x] - grad[x];
  }
  return m;
}

// pi = (a^L + a^R) / 2 and D phi = (a^L - a^R) / 2.
template <typename T>
std::pair<std::vector<T>, std::vector<T>> momentum_and_gradient(const MoverFields<T>& m) {
  detail::check_shape(m);
  std::vector<T> pi(m.sites()), grad(m.sites());
  for (std::size_t x = 0; x < m.sites(); ++x) {
    pi[x] = (m.left[x] + m.right[x]) / T(2);
    grad[x] = (m.left[x] - m.right[x]) / T(2);
  }
  return {pi, grad};
}

// (a^L^2 + a^R^2) / 4 per site.
template <typename T>
std::vector<T> hamilton_density(const MoverFields<T>& m) {
  detail::check_shape(m);
  std::vector<T> out(m.sites());
  for (std::size_t x = 0; x < m.sites(); ++x) {
    out[x] = (m.left[x] * m.left[x] + m.right[x] * m.right[x]) / T(4);
  }
  return out;
}

// (pi^2 + (D phi)^2) / 2 per site.
template <typename T>
std::vector<T> hamilton_density(const LatticeField1D<T>& field) {
  detail::check_shape(field);
  const auto grad = symmetric_gradient(field.phi);
  std::vector<T> out(field.sites());
  for (std::size_t x = 0; x < field.sites(); ++x) {
    out[x] = (field.pi[x] * field.pi[x] + grad[x] * grad[x]) / T(2);
  }
  return out;
}

// Left movers travel toward lower x, right movers toward higher x:
// a^L(x) <- a^L(x + steps), a^R(x) <- a^R(x - steps).
template <typename T>
MoverFields<T> shift_evolve(const MoverFields<T>& m, std::int64_t steps) {
  detail::check_shape(m);
  const std::size_t n = m.sites();
  MoverFields<T> out;
  out.left.resize(n);
  out.right.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    const auto xi = static_cast<std::int64_t>(x);
    out.left[x] = m.left[detail::wrap(xi + steps, n)];
    out.right[x] = m.right[detail::wrap(xi - steps, n)];
  }
  return out;
}

// Field history phi(x, t) = F_L(x + t) + F_R(x - t), t = 0..steps, x = 0..n-1,
// where F_L(y) = (1/2) sum_{z<y} a^L(z) and F_R(y) = -(1/2) sum_{z<y} a^R(z)
// are running sums along the unrolled line (sums from 0; negative y sum
// backwards). Each time row is what the shifted movers integrate to.
template <typename T>
std::vector<std::vector<T>> field_history(const MoverFields<T>& m, std::int64_t steps) {
  detail::check_shape(m);
  if (steps < 0) throw InvalidInput("field_history: steps must be non-negative");
  const std::size_t n = m.sites();
  auto potential = [&](const std::vector<T>& a, std::int64_t y) {
    T sum(0);
    if (y >= 0) {
      for (std::int64_t z = 0; z < y; ++z) sum += a[detail::wrap(z, n)];
    } else {
      for (std::int64_t z = y; z < 0; ++z) sum -= a[detail::wrap(z, n)];
    }
    return sum / T(2);
  };
  std::vector<std::vector<T>> out(static_cast<std::size_t>(steps) + 1, std::vector<T>(n));
  for (std::int64_t t = 0; t <= steps; ++t) {
    for (std::size_t x = 0; x < n; ++x) {
      const auto xi = static_cast<std::int64_t>(x);
      out[static_cast<std::size_t>(t)][x] = potential(m.left, xi + t) - potential(m.right, xi - t);
    }
  }
  return out;
}

// ---------------------------------------------------------------- quantum

// Each chirality sector is a tensor product of `sites` copies of the
// truncated integer window; its dimension (2N+1)^sites may not exceed this.
inline constexpr std::size_t kMaxSectorDimension = 4096;

struct QuantumMovers {
  std::size_t sites = 0;
  pq::TruncationWindow window{1};
  linalg::Basis sector_basis;
  // a^L(x) = A^L(x) + eta^L(x+1) and a^R(x) = A^R(x) + eta^R(x-1),
  // each on its own sector, site indices periodic.
  std::vector<linalg::ComplexMatrix> left;
  std::vector<linalg::ComplexMatrix> right;
  // Integer operators A(x), conjugates eta(x) and unnormalized edge
  // projectors |psi><psi| on site x, all embedded in the sector.
  std::vector<linalg::ComplexMatrix> integer_ops;
  std::vector<linalg::ComplexMatrix> eta_ops;
  std::vector<linalg::ComplexMatrix> edge_projectors;
};

// Embeds a single-site operator at site x of the sector.
linalg::ComplexMatrix embed_site_operator(const linalg::ComplexMatrix& op, std::size_t site,
                                          std::size_t sites);

QuantumMovers compose_quantum_movers(std::size_t sites, const pq::TruncationWindow& window);

struct CommutatorCategory {
  std::string name;
  std::size_t pairs = 0;
  double max_deviation = 0.0;
};

struct LatticeCommutatorReport {
  std::size_t sites = 0;
  std::int64_t window = 0;
  std::size_t sector_dimension = 0;
  // Nearest neighbours, compared with +-(i/2pi)(I - edge projector).
  CommutatorCategory left_neighbor{"left-neighbor"};
  CommutatorCategory right_neighbor{"right-neighbor"};
  // Coincident and |x - y| >= 2 (ring distance) pairs, expected zero.
  CommutatorCategory same_site{"same-site"};
  CommutatorCategory distant{"distant"};
  // [a^L(x), a^R(y)] on the joint L (x) R space, expected zero.
  CommutatorCategory cross{"left-right"};
  // Entry size of the retained edge term, max |[a^L(x), a^L(x+1)] - (i/2pi) I|.
  double edge_term_magnitude = 0.0;
};

LatticeCommutatorReport verify_lattice_commutators(std::size_t sites,
                                                   const pq::TruncationWindow& window);

}  // namespace cadual::field
