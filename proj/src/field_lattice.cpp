#include "cadual/field_lattice.hpp"

#include <algorithm>
#include <sstream>

#include <Eigen/Sparse>

namespace cadual::field {

using linalg::Complex;
using linalg::ComplexMatrix;

namespace {

constexpr Complex kIOverTwoPi{0.0, 1.0 / linalg::kTwoPi};

std::size_t ring_distance(std::size_t x, std::size_t y, std::size_t n) {
  const std::size_t d = x > y ? x - y : y - x;
  return std::min(d, n - d);
}

std::size_t sector_dimension(std::size_t sites, const pq::TruncationWindow& window) {
  std::size_t dim = 1;
  for (std::size_t s = 0; s < sites; ++s) {
    if (dim > kMaxSectorDimension / window.dim()) {
      std::ostringstream os;
      os << "sector dimension (2N+1)^sites = " << window.dim() << "^" << sites << " exceeds budget "
         << kMaxSectorDimension;
      throw InvalidInput(os.str());
    }
    dim *= window.dim();
  }
  return dim;
}

void track(CommutatorCategory& cat, double deviation) {
  ++cat.pairs;
  cat.max_deviation = std::max(cat.max_deviation, deviation);
}

}  // namespace

ComplexMatrix embed_site_operator(const ComplexMatrix& op, std::size_t site, std::size_t sites) {
  if (site >= sites) throw InvalidInput("embed_site_operator: site out of range");
  ComplexMatrix out;
  for (std::size_t s = 0; s < sites; ++s) {
    const ComplexMatrix factor =
        s == site ? op : ComplexMatrix::identity(op.row_basis());
    out = s == 0 ? factor : linalg::kron(out, factor);
  }
  return out;
}

QuantumMovers compose_quantum_movers(std::size_t sites, const pq::TruncationWindow& window) {
  if (sites < 3) throw InvalidInput("compose_quantum_movers: need at least 3 sites on the ring");
  sector_dimension(sites, window);

  const ComplexMatrix a_site = pq::integer_operator(window);
  const ComplexMatrix eta_site = pq::build_eta(window);
  const linalg::ComplexVector edge = pq::edge_state(window);
  const ComplexMatrix edge_site = linalg::outer(edge, edge);

  QuantumMovers out;
  out.sites = sites;
  out.window = window;
  for (std::size_t x = 0; x < sites; ++x) {
    out.integer_ops.push_back(embed_site_operator(a_site, x, sites));
    out.eta_ops.push_back(embed_site_operator(eta_site, x, sites));
    out.edge_projectors.push_back(embed_site_operator(edge_site, x, sites));
  }
  out.sector_basis = out.integer_ops.front().row_basis();
  for (std::size_t x = 0; x < sites; ++x) {
    out.left.push_back(out.integer_ops[x] + out.eta_ops[(x + 1) % sites]);
    out.right.push_back(out.integer_ops[x] + out.eta_ops[(x + sites - 1) % sites]);
  }
  return out;
}

namespace {

using Sparse = Eigen::SparseMatrix<Complex>;

// Joint L (x) R spaces up to this dimension are used whole.
constexpr std::size_t kMaxJointDimension = 1U << 16;

Sparse sparse_kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  std::vector<Eigen::Triplet<Complex>> t;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) == Complex(0.0)) continue;
      for (Eigen::Index k = 0; k < b.rows(); ++k) {
        for (Eigen::Index l = 0; l < b.cols(); ++l) {
          if (b(k, l) != Complex(0.0)) t.emplace_back(i * b.rows() + k, j * b.cols() + l, a(i, j) * b(k, l));
        }
      }
    }
  }
  Sparse m(a.rows() * b.rows(), a.cols() * b.cols());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

// Restricts a sector operator that acts as the identity outside `keep` to
// the tensor factors in `keep` (ascending site order). Entries are copied,
// not recomputed, so the restriction is exact.
ComplexMatrix restrict_to_sites(const ComplexMatrix& op, const std::vector<std::size_t>& keep,
                                std::size_t sites, std::size_t local_dim) {
  std::size_t out_dim = 1;
  for (std::size_t i = 0; i < keep.size(); ++i) out_dim *= local_dim;
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(out_dim), static_cast<Eigen::Index>(out_dim));
  // Sector index of a configuration whose kept digits are `local` and all
  // other digits are zero.
  auto embed = [&](std::size_t local) {
    std::vector<std::size_t> digits(sites, 0);
    for (std::size_t i = keep.size(); i-- > 0;) {
      digits[keep[i]] = local % local_dim;
      local /= local_dim;
    }
    std::size_t idx = 0;
    for (std::size_t s = 0; s < sites; ++s) idx = idx * local_dim + digits[s];
    return static_cast<Eigen::Index>(idx);
  };
  for (std::size_t r = 0; r < out_dim; ++r) {
    for (std::size_t c = 0; c < out_dim; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = op.entries()(embed(r), embed(c));
    }
  }
  std::vector<linalg::BasisLabel> labels(out_dim);
  for (std::size_t i = 0; i < out_dim; ++i) labels[i] = {static_cast<std::int64_t>(i)};
  return {std::move(m), linalg::Basis(std::move(labels))};
}

}  // namespace

LatticeCommutatorReport verify_lattice_commutators(std::size_t sites,
                                                   const pq::TruncationWindow& window) {
  const QuantumMovers movers = compose_quantum_movers(sites, window);
  const ComplexMatrix identity = ComplexMatrix::identity(movers.sector_basis);

  LatticeCommutatorReport report;
  report.sites = sites;
  report.window = window.n();
  report.sector_dimension = movers.sector_basis.size();

  for (int chirality = 0; chirality < 2; ++chirality) {
    const auto& ops = chirality == 0 ? movers.left : movers.right;
    auto& neighbor = chirality == 0 ? report.left_neighbor : report.right_neighbor;
    // [a^L(x), a^L(x+1)] = +(i/2pi)(I - P(x+1)), [a^R(x), a^R(x+1)] = -(i/2pi)(I - P(x)).
    const double sign = chirality == 0 ? 1.0 : -1.0;
    for (std::size_t x = 0; x < sites; ++x) {
      for (std::size_t y = 0; y < sites; ++y) {
        const ComplexMatrix comm = linalg::commutator(ops[x], ops[y]);
        const std::size_t dist = ring_distance(x, y, sites);
        if (dist == 0) {
          track(report.same_site, comm.max_abs());
        } else if (dist >= 2) {
          track(report.distant, comm.max_abs());
        } else {
          const bool forward = (x + 1) % sites == y;
          const std::size_t lo = forward ? x : y;
          const std::size_t edge_site = chirality == 0 ? (lo + 1) % sites : lo;
          const double s = forward ? sign : -sign;
          const ComplexMatrix expected =
              (identity - movers.edge_projectors[edge_site]) * (s * kIOverTwoPi);
          track(neighbor, linalg::max_abs_diff(comm, expected));
          if (chirality == 0 && forward) {
            report.edge_term_magnitude = std::max(
                report.edge_term_magnitude, linalg::max_abs_diff(comm, identity * kIOverTwoPi));
          }
        }
      }
    }
  }

  // Cross sector: a^L(x) (x) I_R against I_L (x) a^R(y) on the joint space,
  // multiplied as sparse matrices. Beyond the joint budget both operators are
  // first restricted to the tensor factors they act on.
  const std::size_t dim = movers.sector_basis.size();
  const std::size_t local = window.dim();
  for (std::size_t x = 0; x < sites; ++x) {
    for (std::size_t y = 0; y < sites; ++y) {
      ComplexMatrix l = movers.left[x], r = movers.right[y];
      if (dim * dim > kMaxJointDimension) {
        std::vector<std::size_t> lsites{x, (x + 1) % sites};
        std::vector<std::size_t> rsites{(y + sites - 1) % sites, y};
        std::sort(lsites.begin(), lsites.end());
        std::sort(rsites.begin(), rsites.end());
        l = restrict_to_sites(l, lsites, sites, local);
        r = restrict_to_sites(r, rsites, sites, local);
      }
      const auto il = static_cast<Eigen::Index>(l.rows()), ir = static_cast<Eigen::Index>(r.rows());
      const Sparse joint_l = sparse_kron(l.entries(), Eigen::MatrixXcd::Identity(ir, ir));
      const Sparse joint_r = sparse_kron(Eigen::MatrixXcd::Identity(il, il), r.entries());
      const Sparse lr = joint_l * joint_r;
      const Sparse rl = joint_r * joint_l;
      const Sparse diff = lr - rl;
      double worst = 0.0;
      for (Eigen::Index k = 0; k < diff.outerSize(); ++k) {
        for (Sparse::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
      }
      track(report.cross, worst);
    }
  }
  return report;
}

}  // namespace cadual::field
