#include "cadual/suites.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/rational.hpp>

#include "cadual/field_lattice.hpp"
#include "cadual/linalg.hpp"
#include "cadual/pq_map.hpp"
#include "cadual/random.hpp"

namespace cadual::suites {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using report::Json;
using report::Report;

namespace {

constexpr Complex kIOverTwoPi{0.0, 1.0 / linalg::kTwoPi};

// ---------------------------------------------------------------- helpers

std::vector<std::size_t> random_permutation(Rng& rng, std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  rng.shuffle(p);
  return p;
}

// p^k by repeated squaring of the map itself.
std::vector<std::size_t> permutation_power(const std::vector<std::size_t>& p, std::uint64_t k) {
  std::vector<std::size_t> result(p.size()), base = p, tmp(p.size());
  std::iota(result.begin(), result.end(), std::size_t{0});
  while (k > 0) {
    if (k & 1U) {
      for (std::size_t i = 0; i < p.size(); ++i) tmp[i] = base[result[i]];
      result.swap(tmp);
    }
    for (std::size_t i = 0; i < p.size(); ++i) tmp[i] = base[base[i]];
    base.swap(tmp);
    k >>= 1U;
  }
  return result;
}

ComplexMatrix random_hermitian(Rng& rng, const linalg::Basis& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(rng.unit() - 0.5, rng.unit() - 0.5);
  }
  return ComplexMatrix((m + m.adjoint()) / 2.0, basis);
}

ComplexVector random_unit_vector(Rng& rng, const linalg::Basis& basis) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(basis.size()));
  for (auto& x : v) x = Complex(rng.unit() - 0.5, rng.unit() - 0.5);
  return ComplexVector(v, basis).normalized();
}

double off_diagonal_max(const ComplexMatrix& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (i != j) worst = std::max(worst, std::abs(m(i, j)));
    }
  }
  return worst;
}

// Quadrature of int_{-1/2}^{1/2} eta e^{-2 pi i n eta} d eta, one 61-point
// Gauss-Kronrod rule per half oscillation.
Complex quadrature_coefficient(std::int64_t n) {
  using boost::math::quadrature::gauss_kronrod;
  const double w = linalg::kTwoPi * static_cast<double>(n);
  const int pieces = 2 * static_cast<int>(std::abs(n)) + 2;
  double re = 0.0, im = 0.0;
  for (int k = 0; k < pieces; ++k) {
    const double a = -0.5 + static_cast<double>(k) / pieces;
    const double b = -0.5 + static_cast<double>(k + 1) / pieces;
    re += gauss_kronrod<double, 61>::integrate([w](double x) { return x * std::cos(w * x); }, a, b, 0, 0);
    im += gauss_kronrod<double, 61>::integrate([w](double x) { return -x * std::sin(w * x); }, a, b, 0, 0);
  }
  return {re, im};
}

// Gaussian exp(-(Q^2 + P^2) / (2 width^2)) restricted to |Q|, |P| <= reach
// (reach < 0: whole lattice), made orthogonal to the edge state on that
// support and normalized.
ComplexVector edge_free_gaussian(const pq::PQLattice& lattice, double width, std::int64_t reach) {
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(lattice.size()));
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(g.size());
  const Eigen::VectorXcd edge = pq::edge_state(lattice).entries();
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const auto q = lattice.q_at(i), p = lattice.p_at(i);
    if (reach >= 0 && (std::abs(q) > reach || std::abs(p) > reach)) continue;
    const auto k = static_cast<Eigen::Index>(i);
    g(k) = std::exp(-static_cast<double>(q * q + p * p) / (2.0 * width * width));
    e(k) = edge(k);
  }
  g -= (e.dot(g) / e.squaredNorm()) * e;
  return ComplexVector(g, lattice.basis()).normalized();
}

bool non_increasing(const std::vector<double>& v, double slack = 0.0) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1] + slack) return false;
  }
  return true;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

// ---------------------------------------------------------------- linalg

void linalg_checks(Report& r, Rng& rng, double tol) {
  std::vector<ComplexMatrix> unitaries;
  for (std::size_t d : {2, 8, 32}) {
    unitaries.push_back(linalg::unitary_exp(random_hermitian(rng, linalg::Basis::indexed(d)), 1.0));
  }
  // Degenerate spectra: two 3-cycles and two fixed points; the identity.
  unitaries.push_back(ca::EvolutionOperator({1, 2, 0, 4, 5, 3, 6, 7}).matrix());
  unitaries.push_back(ComplexMatrix::identity(linalg::Basis::indexed(4)));
  double reconstruction = 0.0;
  for (const auto& u : unitaries) {
    const auto es = linalg::eigendecompose_unitary(u, tol);
    Eigen::VectorXcd d(static_cast<Eigen::Index>(es.phases.size()));
    for (std::size_t k = 0; k < es.phases.size(); ++k) {
      d(static_cast<Eigen::Index>(k)) = std::exp(Complex(0.0, -es.phases[k]));
    }
    const Eigen::MatrixXcd rebuilt = es.vectors.entries() * d.asDiagonal() * es.vectors.entries().adjoint();
    reconstruction = std::max(reconstruction, (rebuilt - u.entries()).cwiseAbs().maxCoeff());
  }
  r.add_bound("linalg.unitary_reconstruction", "spectral resolution of a unitary", reconstruction, 10 * tol);

  const linalg::PhaseBase base;
  double phase_dev = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const double x = 2000.0 * rng.unit() - 1000.0, y = 2000.0 * rng.unit() - 1000.0;
    phase_dev = std::max(phase_dev, std::abs(base.phase(x) * base.phase(y) - base.phase(x + y)));
  }
  r.add_bound("linalg.phase_multiplicative", "epsilon^{ix} epsilon^{iy} = epsilon^{i(x+y)}", phase_dev, 1e-12);

  double antisym = 0.0;
  for (int k = 0; k < 4; ++k) {
    const auto basis = linalg::Basis::indexed(12);
    const auto a = random_hermitian(rng, basis) * Complex(1.0, 0.3);
    const auto b = random_hermitian(rng, basis) * Complex(0.2, -1.0);
    antisym = std::max(antisym, (linalg::commutator(a, b) + linalg::commutator(b, a)).max_abs());
  }
  r.add_exact("linalg.commutator_antisymmetry", "[A,B] = -[B,A]", antisym);
}

// ---------------------------------------------------------------- ca_engine

void ca_checks(Report& r, Rng& rng, double tol, double dt) {
  double unit_defect = 0.0, order_defect = 0.0, round_trip = 0.0, herm = 0.0, branch = 0.0;
  double residual = 0.0, heisenberg = 0.0, diagonal = 0.0, norm = 0.0;
  const double top = linalg::kTwoPi / dt;
  for (std::size_t n : {1, 2, 3, 5, 8, 13, 32, 64, 100, 256, 512}) {
    const auto rule = random_permutation(rng, n);
    const auto u = ca::build_evolution(ca::AutomatonSpec::from_rule(rule, dt));
    const ComplexMatrix m = u.matrix();
    unit_defect = std::max(unit_defect, linalg::unitarity_defect(m));
    if (const auto order = u.order(); order != 0) {
      const auto back = permutation_power(rule, order);
      for (std::size_t i = 0; i < n; ++i) order_defect += back[i] == i ? 0.0 : 1.0;
    }
    const ComplexMatrix h = ca::extract_hamiltonian(u, dt);
    herm = std::max(herm, linalg::hermiticity_defect(h));
    round_trip = std::max(round_trip, linalg::max_abs_diff(linalg::unitary_exp(h, dt), m));
    const auto eig = linalg::hermitian_eigenvalues(h);
    branch = std::max({branch, -eig.front(), eig.back() >= top ? eig.back() - top + tol : 0.0});
    const ComplexVector psi = random_unit_vector(rng, m.row_basis());
    residual = std::max(residual, ca::schrodinger_residual(u, h, dt, psi));
    const std::int64_t k = rng.between(1, 7);
    norm = std::max(norm, std::abs(ca::evolve_state(u, psi, k).norm() - 1.0));

    Eigen::VectorXcd d(static_cast<Eigen::Index>(n));
    for (auto& x : d) x = std::floor(rng.unit() * 10.0);
    const ComplexMatrix dm = ComplexMatrix::diagonal(d, m.row_basis());
    diagonal = std::max(diagonal, off_diagonal_max(m * dm * m.adjoint()));

    if (n <= 128) {
      std::vector<double> w(n);
      for (auto& x : w) x = rng.unit() + 0.01;
      const double total = std::accumulate(w.begin(), w.end(), 0.0);
      for (auto& x : w) x /= total;
      const ca::OntologicalDensityMatrix rho(w);
      const ComplexMatrix o = random_hermitian(rng, m.row_basis());
      const Complex lhs = ca::expectation(ca::evolve_density(u, rho, k), o);
      ComplexMatrix uk = ComplexMatrix::identity(m.row_basis());
      for (std::int64_t s = 0; s < k; ++s) uk = m * uk;
      const Complex rhs = ca::expectation(rho, uk.adjoint() * o * uk);
      heisenberg = std::max(heisenberg, std::abs(lhs - rhs));
    }
  }
  r.add_exact("ca.permutation_unitary", "U^dag U = I for a permutation", unit_defect);
  r.add_exact("ca.permutation_order", "U^order = I", order_defect);
  r.add_bound("ca.hamiltonian_round_trip", "exp(-i H dt) = U", round_trip, tol);
  r.add_bound("ca.hamiltonian_hermitian", "H = H^dag", herm, 1e-12);
  r.add_bound("ca.hamiltonian_branch", "spectrum of H in [0, 2pi/dt)", branch, 1e-12);
  r.add_bound("ca.schrodinger_residual", "d/dt psi = -i H psi over one step", residual, tol);
  r.add_bound("ca.norm_preserved", "||U^k psi|| = ||psi||", norm, 1e-12);
  r.add_bound("ca.heisenberg_consistency", "Tr(U rho U^dag O) = Tr(rho U^dag O U)", heisenberg, 1e-12);
  r.add_exact("ca.diagonal_preserved", "U D U^dag diagonal for diagonal D", diagonal);
}

// ---------------------------------------------------------------- pq_map

void pq_checks(Report& r, Rng& rng, std::int64_t n, std::int64_t margin) {
  if (n < 4) throw InvalidInput("verify-pq needs --window >= 4 (it compares windows N/4, N/2 and N)");
  if (margin < 0 || margin >= n) {
    throw InvalidInput("--margin must lie in [0, window), got " + std::to_string(margin));
  }
  const pq::TruncationWindow window(n);

  r.add_exact("pq.eta_hermitian", "eta = eta^dag", linalg::hermiticity_defect(pq::build_eta(window)));

  std::vector<std::int64_t> sizes{4, 16, 64};
  if (std::find(sizes.begin(), sizes.end(), n) == sizes.end()) sizes.push_back(n);
  double spill = -1.0, eta_comm = 0.0;
  Json spectrum = Json::array();
  for (std::int64_t s : sizes) {
    const pq::TruncationWindow w(s);
    const auto eig = linalg::hermitian_eigenvalues(pq::build_eta(w));
    const double top = std::max(std::abs(eig.front()), std::abs(eig.back()));
    spectrum.push_back(Json{{"window", s}, {"max_abs_eigenvalue", top}});
    spill = std::max(spill, top - 2.0 / static_cast<double>(s));
    eta_comm = std::max(eta_comm, pq::eta_commutator_check(w));
  }
  r.add_bound("pq.eta_spectrum", "spectrum of eta within [-1/2, 1/2] + 2/N", spill, 0.5);
  r.add_bound("pq.eta_commutator", "[eta, Q] = (i/2pi)(I - |psi><psi|)", eta_comm, 1e-12);
  r.set_data("eta_spectrum", spectrum);

  double fourier = 0.0;
  for (std::int64_t k = -64; k <= 64; ++k) {
    fourier = std::max(fourier, std::abs(pq::eta_fourier_coefficient(k) - quadrature_coefficient(k)));
  }
  r.add_bound("pq.fourier_quadrature", "alpha_N = i (-1)^N / (2 pi N)", fourier, 1e-10);

  const auto lattice = pq::PQLattice::square(n);
  const ComplexMatrix q = pq::q_operator(lattice) + pq::build_aQ(lattice);
  const ComplexMatrix p = pq::p_operator(lattice) + pq::build_aP(lattice);
  r.add_exact("pq.qp_hermitian", "q = q^dag, p = p^dag",
              std::max(linalg::hermiticity_defect(q), linalg::hermiticity_defect(p)));

  // Three windows at a fixed margin ratio.
  std::vector<double> defects, overlaps, actions;
  Json decay = Json::array();
  for (std::int64_t s : {n / 4, n / 2, n}) {
    const std::int64_t m = std::min(s - 1, s * margin / n);
    const auto lat = pq::PQLattice::square(s);
    const auto d = pq::qp_commutator_defect(lat, m);
    const double action = pq::qp_action_defect(lat, edge_free_gaussian(lat, 1.0, 2), m);
    defects.push_back(d.defect);
    overlaps.push_back(d.edge_overlap);
    actions.push_back(action);
    decay.push_back(Json{{"window", s}, {"margin", m}, {"defect", d.defect},
                         {"edge_overlap", d.edge_overlap}, {"action_defect", action}});
  }
  r.set_data("qp_commutator", decay);
  r.add({"pq.qp_commutator_decay", "[q,p] = (i/2pi)(I - |psi_edge><psi_edge|)", defects.back(),
         "non-increasing over N/4, N/2, N", non_increasing(defects)});
  double overlap_dev = 0.0;
  for (double c : overlaps) overlap_dev = std::max(overlap_dev, std::abs(c - 1.0));
  r.add_bound("pq.qp_edge_overlap", "weight of the edge term in [q,p]", overlap_dev, 0.05);
  r.add({"pq.edge_orthogonal_action", "[q,p] v = (i/2pi) v for <psi_edge|v> = 0", actions.back(),
         "strictly decreasing over N/4, N/2, N", strictly_decreasing(actions)});

  double recon = 0.0, outside = 0.0;
  std::vector<double> xs{0.5, -0.5, 1.5, -1.5, 0.0, 1e-300};
  for (int k = 0; k < 1000; ++k) xs.push_back(2000.0 * rng.unit() - 1000.0);
  for (double x : xs) {
    const auto d = pq::decompose_real(x);
    recon = std::max(recon, std::abs(static_cast<double>(d.integer) + d.fraction - x));
    if (!(d.fraction > -0.5 && d.fraction <= 0.5)) outside += 1.0;
  }
  r.add_exact("pq.decompose_round_trip", "x = Q + eta", recon);
  r.add_exact("pq.decompose_interval", "eta in (-1/2, 1/2]", outside);

  const auto gauss = edge_free_gaussian(lattice, static_cast<double>(n) / 6.0, -1);
  const auto grid = pq::transform_to_p_basis(lattice, gauss, window, pq::uniform_kappa_grid(32));
  r.add_bound("pq.p_basis_norm", "norm of <K,kappa|psi>", std::abs(grid.discretized_norm() - 1.0), 0.05);
}

// ---------------------------------------------------------------- field_lattice

using Rational = boost::rational<std::int64_t>;

void field_checks(Report& r, Rng& rng, std::size_t sites, std::int64_t n, std::int64_t steps) {
  const std::size_t ring = 12;
  field::LatticeField1D<Rational> f;
  for (std::size_t x = 0; x < ring; ++x) {
    f.phi.emplace_back(rng.between(-9, 9));
    f.pi.emplace_back(rng.between(-9, 9), 2);
  }
  const auto movers = field::split_movers(f);
  const auto [pi, grad] = field::momentum_and_gradient(movers);
  double recon = pi == f.pi && grad == field::symmetric_gradient(f.phi) ? 0.0 : 1.0;
  r.add_exact("field.mover_reconstruction", "p = (aL + aR)/2, D phi = (aL - aR)/2", recon);

  const auto h_movers = field::hamilton_density(movers);
  r.add_exact("field.hamilton_density_identity", "(p^2 + (D phi)^2)/2 = (aL^2 + aR^2)/4",
              h_movers == field::hamilton_density(f) ? 0.0 : 1.0);

  field::LatticeField1D<double> fd;
  for (std::size_t x = 0; x < ring; ++x) {
    fd.phi.push_back(2.0 * rng.unit() - 1.0);
    fd.pi.push_back(2.0 * rng.unit() - 1.0);
  }
  const auto hd1 = field::hamilton_density(field::split_movers(fd));
  const auto hd2 = field::hamilton_density(fd);
  double hd_dev = 0.0;
  for (std::size_t x = 0; x < ring; ++x) hd_dev = std::max(hd_dev, std::abs(hd1[x] - hd2[x]));
  r.add_bound("field.hamilton_density_float", "two forms of the Hamilton density", hd_dev, 1e-14);

  const std::int64_t horizon = std::min<std::int64_t>(steps, 48);
  const Rational energy = std::accumulate(h_movers.begin(), h_movers.end(), Rational(0));
  double energy_dev = 0.0, shift_dev = 0.0, wave_dev = 0.0;
  const auto history = field::field_history(movers, horizon);
  for (std::int64_t k = 1; k <= horizon; ++k) {
    const auto shifted = field::shift_evolve(movers, k);
    const auto hk = field::hamilton_density(shifted);
    if (std::accumulate(hk.begin(), hk.end(), Rational(0)) != energy) energy_dev += 1.0;
    // The shifted movers integrate to the history row k up to a constant.
    const auto row = field::field_history(shifted, 0).front();
    const auto& target = history[static_cast<std::size_t>(k)];
    for (std::size_t x = 1; x < ring; ++x) {
      if (target[x] - row[x] != target[0] - row[0]) shift_dev += 1.0;
    }
  }
  for (std::size_t t = 1; t + 1 < history.size(); ++t) {
    for (std::size_t x = 1; x + 1 < ring; ++x) {
      if (history[t + 1][x] + history[t - 1][x] != history[t][x + 1] + history[t][x - 1]) wave_dev += 1.0;
    }
  }
  r.add_exact("field.energy_conserved", "sum of Hamilton density under shifts", energy_dev);
  r.add_exact("field.shift_history", "shifted movers reproduce the field history", shift_dev);
  r.add_exact("field.wave_equation", "phi(x,t+1) + phi(x,t-1) = phi(x+1,t) + phi(x-1,t)", wave_dev);

  const pq::TruncationWindow window(n);
  const auto qm = field::compose_quantum_movers(sites, window);
  double herm = 0.0, site_comm = 0.0;
  for (std::size_t x = 0; x < sites; ++x) {
    herm = std::max({herm, linalg::hermiticity_defect(qm.left[x]), linalg::hermiticity_defect(qm.right[x])});
    for (std::size_t y = 0; y < sites; ++y) {
      const ComplexMatrix comm = linalg::commutator(qm.eta_ops[x], qm.integer_ops[y]);
      const ComplexMatrix expected =
          x == y ? (ComplexMatrix::identity(qm.sector_basis) - qm.edge_projectors[x]) * kIOverTwoPi
                 : ComplexMatrix::zero(qm.sector_basis);
      site_comm = std::max(site_comm, linalg::max_abs_diff(comm, expected));
    }
  }
  r.add_exact("field.operators_hermitian", "a = A + eta Hermitian", herm);
  r.add_bound("field.site_commutator", "[eta(x), A(y)] = (i/2pi) delta_xy (I - edge)", site_comm, 1e-12);

  const auto rep = field::verify_lattice_commutators(sites, window);
  // A ring of three has no pair at distance two; four sites with N = 1 cover it.
  const auto wide = sites >= 4 ? rep : field::verify_lattice_commutators(4, pq::TruncationWindow(1));
  r.add_bound("field.left_neighbor", "[aL(x), aL(x+1)] = (i/2pi)(I - edge)", rep.left_neighbor.max_deviation,
              1e-12);
  r.add_bound("field.right_neighbor", "[aR(x), aR(x+1)] = -(i/2pi)(I - edge)",
              rep.right_neighbor.max_deviation, 1e-12);
  r.add_exact("field.same_site", "[a(x), a(x)] = 0", rep.same_site.max_deviation);
  r.add_exact("field.distant", "[a(x), a(y)] = 0 for |x - y| >= 2", wide.distant.max_deviation);
  r.add_exact("field.cross", "[aL(x), aR(y)] = 0",
              std::max(rep.cross.max_deviation, wide.cross.max_deviation));

  std::vector<double> edge_terms;
  Json trend = Json::array();
  for (std::int64_t k = 1; k <= n; ++k) {
    const double e = k == n ? rep.edge_term_magnitude
                            : field::verify_lattice_commutators(sites, pq::TruncationWindow(k)).edge_term_magnitude;
    edge_terms.push_back(e);
    trend.push_back(Json{{"window", k}, {"edge_term", e}});
  }
  r.set_data("edge_term", trend);
  r.add({"field.edge_term_trend", "retained edge term of [aL(x), aL(x+1)]", edge_terms.back(),
         "non-increasing in N", non_increasing(edge_terms, 1e-12)});
}

// ---------------------------------------------------------------- string_ca

strings::Slice random_slice(Rng& rng, std::size_t dims, std::size_t length, std::int64_t spread) {
  strings::Slice s(dims, std::vector<strings::Coord>(length));
  for (auto& row : s) {
    for (auto& v : row) v = rng.between(-spread, spread);
  }
  return s;
}

std::vector<std::vector<strings::Coord>> points(const std::vector<strings::StringConfiguration>& v,
                                                bool current) {
  std::vector<std::vector<strings::Coord>> out;
  for (const auto& s : v) {
    const auto& slice = current ? s.current() : s.previous();
    for (std::size_t k = 0; k < s.length(); ++k) {
      std::vector<strings::Coord> p;
      for (const auto& row : slice) p.push_back(row[k]);
      out.push_back(std::move(p));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t total_sites(const std::vector<strings::StringConfiguration>& v) {
  std::size_t n = 0;
  for (const auto& s : v) n += s.length();
  return n;
}

// Closed strings compare up to a cyclic relabeling of sigma.
bool same_up_to_rotation(const strings::StringConfiguration& a, const strings::StringConfiguration& b) {
  if (a.length() != b.length() || a.lattice().closed != b.lattice().closed) return false;
  if (!a.lattice().closed) return a == b;
  const std::size_t n = a.length();
  for (std::size_t shift = 0; shift < n; ++shift) {
    bool ok = true;
    for (std::size_t mu = 0; ok && mu < a.current().size(); ++mu) {
      for (std::size_t k = 0; ok && k < n; ++k) {
        ok = a.current()[mu][k] == b.current()[mu][(k + shift) % n] &&
             a.previous()[mu][k] == b.previous()[mu][(k + shift) % n];
      }
    }
    if (ok) return true;
  }
  return false;
}

bool same_collection(std::vector<strings::StringConfiguration> a, std::vector<strings::StringConfiguration> b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& s : a) {
    bool found = false;
    for (std::size_t j = 0; j < b.size() && !found; ++j) {
      if (!used[j] && same_up_to_rotation(s, b[j])) used[j] = found = true;
    }
    if (!found) return false;
  }
  return true;
}

strings::StringConfiguration polyline(const std::vector<std::vector<strings::Coord>>& pts, bool closed) {
  strings::WorldSheetLattice lat{pts.size(), 1, pts.front().size(), closed};
  strings::Slice s(lat.transverse_dims, std::vector<strings::Coord>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k) {
    for (std::size_t mu = 0; mu < lat.transverse_dims; ++mu) s[mu][k] = pts[k][mu];
  }
  return strings::StringConfiguration::at_rest(lat, s);
}

struct ExchangeCase {
  std::vector<strings::StringConfiguration> strings;
  strings::ExchangeOptions options;
  strings::ExchangeOptions undo;
};

std::vector<ExchangeCase> exchange_cases() {
  using P = std::vector<std::vector<strings::Coord>>;
  const auto horizontal = polyline(P{{-2, 0}, {-1, 0}, {0, 0}, {1, 0}, {2, 0}}, false);
  const auto vertical = polyline(P{{0, -2}, {0, -1}, {0, 0}, {0, 1}, {0, 2}}, false);
  const auto loop_a = polyline(P{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, true);
  const auto loop_b = polyline(P{{0, 0}, {-1, 0}, {-1, -1}, {0, -1}}, true);
  const auto looped = polyline(P{{-2, 0}, {-1, 0}, {0, 0}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -2}}, false);
  const strings::ExchangeOptions pair{true, false}, self{false, true};
  return {
      {{horizontal, vertical}, pair, pair},
      {{loop_a, loop_b}, pair, self},
      {{loop_b, horizontal}, pair, self},
      {{looped}, self, pair},
  };
}

void string_checks(Report& r, Rng& rng, std::int64_t steps, double alpha_prime) {
  double residual = 0.0, movers_dev = 0.0, multiset_dev = 0.0, recompose = 0.0, reverse = 0.0;
  for (int c = 0; c < 6; ++c) {
    const bool closed = c < 5;
    strings::WorldSheetLattice lat{static_cast<std::size_t>(rng.between(5, 64)), c == 4 ? 2 : 1, 3, closed};
    const strings::StringConfiguration start(lat, random_slice(rng, 3, lat.length, 20),
                                             random_slice(rng, 3, lat.length, 20));
    std::optional<strings::StringMovers> movers;
    std::optional<strings::MoverIncrements> inc0;
    if (closed) {
      movers = strings::split_string_movers(start);
      inc0 = strings::mover_increments(start);
    }
    auto cur = start;
    for (std::int64_t t = 1; t <= steps; ++t) {
      const auto next = strings::step(cur);
      residual = std::max(residual, static_cast<double>(strings::wave_residual(lat, cur.previous(),
                                                                                cur.current(), next.current())));
      cur = next;
      if (!closed) continue;
      const auto inc = strings::mover_increments(cur);
      for (std::size_t mu = 0; mu < 3; ++mu) {
        if (inc.left[mu] != inc0->left[mu] || inc.right[mu] != inc0->right[mu]) movers_dev += 1.0;
        auto a = inc.left[mu], b = inc0->left[mu];
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) multiset_dev += 1.0;
      }
      if (movers->slice_at(cur.time()) != cur.current()) recompose += 1.0;
    }
    for (std::int64_t t = 0; t < steps; ++t) cur = strings::step_backward(cur);
    if (!(cur == start)) reverse += 1.0;
  }
  r.add_exact("string.wave_residual", "X(s,t+a) + X(s,t-a) = X(s+a,t) + X(s-a,t)", residual);
  r.add_exact("string.mover_conservation", "light-cone increments carried unchanged", movers_dev + multiset_dev);
  r.add_exact("string.mover_recomposition", "X = X_L(s + a t) + X_R(s - a t)", recompose);
  r.add_exact("string.reversibility", "backward step inverts the forward step", reverse);

  double conserve = 0.0, involution = 0.0, events = 0.0;
  for (const auto& ex : exchange_cases()) {
    const auto once = strings::exchange_interaction(ex.strings, ex.options);
    events += static_cast<double>(once.events.size());
    if (total_sites(once.strings) != total_sites(ex.strings)) conserve += 1.0;
    if (points(once.strings, true) != points(ex.strings, true)) conserve += 1.0;
    if (points(once.strings, false) != points(ex.strings, false)) conserve += 1.0;
    const auto twice = strings::exchange_interaction(once.strings, ex.undo);
    if (!same_collection(twice.strings, ex.strings)) involution += 1.0;
  }
  r.add_exact("string.exchange_conservation", "arm exchange keeps sites and coordinates", conserve);
  r.add_exact("string.exchange_involution", "a second exchange restores connectivity", involution);
  r.add({"string.exchange_events", "one exchange per crossing", events, "== 4",
         events == 4.0});

  double lattice_dev = 0.0;
  const std::vector<std::pair<double, double>> cases{
      {1.0, linalg::kTwoPi}, {1.0 / (4.0 * std::numbers::pi * std::numbers::pi), 1.0}, {4.0, 2.0 * linalg::kTwoPi}};
  for (auto [ap, expected] : cases) {
    lattice_dev = std::max(lattice_dev, std::abs(strings::spacetime_lattice_constant(ap) - expected));
  }
  lattice_dev = std::max(lattice_dev, std::abs(strings::spacetime_lattice_constant(alpha_prime) -
                                               linalg::kTwoPi * std::sqrt(alpha_prime)));
  r.add_bound("string.lattice_constant", "a = 2 pi sqrt(alpha')", lattice_dev, 1e-14);
}

// ---------------------------------------------------------------- fermion_ca

fermion::BooleanField random_factorizable(Rng& rng, std::size_t length, std::size_t components) {
  fermion::SpinSlice prev(components, std::vector<fermion::Spin>(length));
  fermion::SpinSlice curr = prev;
  for (std::size_t mu = 0; mu < components; ++mu) {
    std::vector<fermion::Spin> left(length), right(length);
    for (auto& v : left) v = rng.coin() ? 1 : -1;
    for (auto& v : right) v = rng.coin() ? 1 : -1;
    for (std::size_t x = 0; x < length; ++x) {
      curr[mu][x] = static_cast<fermion::Spin>(left[x] * right[x]);
      prev[mu][x] = static_cast<fermion::Spin>(left[(x + length - 1) % length] * right[(x + 1) % length]);
    }
  }
  return fermion::BooleanField(prev, curr);
}

// Mismatches of `later` against `earlier` beyond a sign flip per light-cone
// sublattice (the gauge fixes one anchor per sublattice).
double mover_content_mismatch(const fermion::BooleanMovers& earlier, const fermion::BooleanMovers& later) {
  double bad = 0.0;
  for (std::size_t mu = 0; mu < earlier.left.size(); ++mu) {
    const std::size_t n = earlier.left[mu].size();
    const std::size_t classes = n % 2 == 0 ? 2 : 1;
    for (int side = 0; side < 2; ++side) {
      std::vector<int> ratio(classes, 0);
      for (std::int64_t k = 0; k < static_cast<std::int64_t>(n); ++k) {
        const int a = side == 0 ? earlier.left_at(mu, k) : earlier.right_at(mu, k);
        const int b = side == 0 ? later.left_at(mu, k) : later.right_at(mu, k);
        int& c = ratio[static_cast<std::size_t>(k) % classes];
        if (c == 0) c = a * b;
        if (c != a * b) bad += 1.0;
      }
    }
  }
  return bad;
}

void fermion_checks(Report& r, Rng& rng, std::size_t chain, std::int64_t steps) {
  double preserved = 0.0, reverse = 0.0, values = 0.0;
  Json counts = Json::array();
  for (std::size_t length = 3; length <= 6; ++length) {
    std::size_t factorizable_pairs = 0;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (2 * length)); ++bits) {
      fermion::SpinSlice prev(1, std::vector<fermion::Spin>(length)), curr = prev;
      for (std::size_t x = 0; x < length; ++x) {
        prev[0][x] = (bits >> x) & 1U ? -1 : 1;
        curr[0][x] = (bits >> (x + length)) & 1U ? -1 : 1;
      }
      const fermion::BooleanField start(prev, curr);
      const bool fact = fermion::factorizable(start);
      factorizable_pairs += fact ? 1 : 0;
      auto f = start;
      for (std::size_t t = 0; t < 2 * length; ++t) {
        f = fermion::boolean_step(f);
        if (fermion::factorizable(f) != fact) preserved += 1.0;
      }
      for (std::size_t t = 0; t < 2 * length; ++t) f = fermion::boolean_step_backward(f);
      if (!(f == start)) reverse += 1.0;
    }
    counts.push_back(Json{{"sites", length}, {"factorizable_pairs", factorizable_pairs}});
  }
  r.set_data("factorizable_pairs", counts);
  r.add_exact("fermion.factorization_exhaustive", "s = s_L s_R preserved, all pairs with L <= 6", preserved);

  double recompose = 0.0, content = 0.0;
  for (int c = 0; c < 200; ++c) {
    const auto start = random_factorizable(rng, 32, 1);
    const auto movers = fermion::split_boolean_movers(start);
    auto f = start;
    for (std::int64_t t = 0; t < steps; ++t) {
      f = fermion::boolean_step(f);
      for (const auto& row : f.current()) {
        for (auto v : row) values += (v == 1 || v == -1) ? 0.0 : 1.0;
      }
      if (movers.slice_at(f.time()) != f.current()) recompose += 1.0;
    }
    content += mover_content_mismatch(movers, fermion::split_boolean_movers(f));
    for (std::int64_t t = 0; t < steps; ++t) f = fermion::boolean_step_backward(f);
    if (!(f == start)) reverse += 1.0;
  }
  r.add_exact("fermion.factorization_random", "s(x,t) = s_L(x+t) s_R(x-t), L = 32", recompose);
  r.add_exact("fermion.mover_conservation", "mover contents carried unchanged", content);
  r.add_exact("fermion.reversibility", "backward step inverts the forward step", reverse);
  r.add_exact("fermion.values", "s = +-1", values);

  std::int64_t car = 0;
  std::size_t parity = 0;
  for (std::size_t n = 1; n <= chain; ++n) {
    const auto rep = fermion::verify_anticommutators(fermion::jordan_wigner(n));
    car = std::max(car, rep.max_deviation);
    parity += rep.parity_violations;
  }
  r.add_exact("fermion.car_exact", "{c_i, c_j^dag} = delta_ij, {c_i, c_j} = 0", static_cast<double>(car));
  r.add_exact("fermion.parity", "c_i flips fermion parity", static_cast<double>(parity));
  double dense = 0.0;
  for (std::size_t n = 1; n <= std::min<std::size_t>(chain, 6); ++n) {
    dense = std::max(dense, fermion::dense_anticommutator_defect(fermion::jordan_wigner(n)));
  }
  r.add_exact("fermion.car_dense", "anticommutators of the dense matrices", dense);

  const std::size_t n = std::min<std::size_t>(std::max<std::size_t>(chain, 1), 8);
  const auto fc = fermion::jordan_wigner(n);
  double encode = 0.0;
  for (int c = 0; c < 20; ++c) {
    std::vector<fermion::Spin> s(n);
    int excited = 0;
    for (auto& v : s) {
      v = rng.coin() ? -1 : 1;
      excited += v == -1 ? 1 : 0;
    }
    const auto psi = fermion::encode_boolean_state(s, fc);
    double count = 0.0;
    for (std::size_t i = 0; i < n; ++i) count += psi.dot(fc.number(i) * psi).real();
    encode = std::max(encode, std::abs(count - excited));
  }
  const auto vacuum = fermion::encode_boolean_state(std::vector<fermion::Spin>(n, 1), fc);
  std::vector<fermion::Spin> one(n, 1);
  one[0] = -1;
  const auto first = fc.creation(0) * vacuum;
  encode = std::max(encode, (first.entries() - fermion::encode_boolean_state(one, fc).entries()).cwiseAbs().maxCoeff());
  r.add_exact("fermion.encode_number", "number of occupied sites = count of s = -1", encode);
}

std::int64_t default_margin(const SuiteConfig& c, std::int64_t n) { return c.margin.value_or(n / 2); }

}  // namespace

// ---------------------------------------------------------------- public

Json SuiteConfig::echo() const {
  Json j;
  j["window"] = window ? Json(*window) : Json(nullptr);
  j["sites"] = sites ? Json(*sites) : Json(nullptr);
  j["steps"] = steps;
  j["margin"] = margin ? Json(*margin) : Json(nullptr);
  j["tolerance"] = tolerance;
  j["chain"] = chain;
  j["alpha_prime"] = alpha_prime;
  j["seed"] = seed;
  j["dt"] = dt;
  j["input"] = input;
  return j;
}

namespace {

void check_common(const SuiteConfig& c) {
  if (c.steps < 0) throw InvalidInput("--steps must be non-negative");
  if (!(c.tolerance > 0.0)) throw InvalidInput("--tolerance must be positive");
  if (c.chain < 1 || c.chain > fermion::FermionChain::kMaxSites) {
    throw InvalidInput("--chain must lie in [1, 12]");
  }
}

}  // namespace

Report verify_pq(const SuiteConfig& config) {
  check_common(config);
  Report r("verify-pq", config.echo());
  Rng rng(config.seed);
  const std::int64_t n = config.window.value_or(16);
  pq_checks(r, rng, n, default_margin(config, n));
  return r;
}

Report verify_field(const SuiteConfig& config) {
  check_common(config);
  Report r("verify-field", config.echo());
  Rng rng(config.seed);
  field_checks(r, rng, config.sites.value_or(3), config.window.value_or(2), config.steps);
  return r;
}

Report verify_all(const SuiteConfig& config) {
  check_common(config);
  Report r("verify-all", config.echo());
  Rng rng(config.seed);
  linalg_checks(r, rng, config.tolerance);
  ca_checks(r, rng, config.tolerance, config.dt);
  const std::int64_t n = config.window.value_or(16);
  pq_checks(r, rng, n, default_margin(config, n));
  field_checks(r, rng, config.sites.value_or(3), 2, config.steps);
  string_checks(r, rng, config.steps, config.alpha_prime);
  fermion_checks(r, rng, config.chain, config.steps);
  return r;
}

const std::vector<std::string>& verify_all_manifest() {
  static const std::vector<std::string> names{
      "linalg.unitary_reconstruction", "linalg.phase_multiplicative", "linalg.commutator_antisymmetry",
      "ca.permutation_unitary", "ca.permutation_order", "ca.hamiltonian_round_trip",
      "ca.hamiltonian_hermitian", "ca.hamiltonian_branch", "ca.schrodinger_residual", "ca.norm_preserved",
      "ca.heisenberg_consistency", "ca.diagonal_preserved",
      "pq.eta_hermitian", "pq.eta_spectrum", "pq.eta_commutator", "pq.fourier_quadrature",
      "pq.qp_hermitian", "pq.qp_commutator_decay", "pq.qp_edge_overlap", "pq.edge_orthogonal_action",
      "pq.decompose_round_trip", "pq.decompose_interval", "pq.p_basis_norm",
      "field.mover_reconstruction", "field.hamilton_density_identity", "field.hamilton_density_float",
      "field.energy_conserved", "field.shift_history", "field.wave_equation", "field.operators_hermitian",
      "field.site_commutator", "field.left_neighbor", "field.right_neighbor", "field.same_site",
      "field.distant", "field.cross", "field.edge_term_trend",
      "string.wave_residual", "string.mover_conservation", "string.mover_recomposition",
      "string.reversibility", "string.exchange_conservation", "string.exchange_involution",
      "string.exchange_events", "string.lattice_constant",
      "fermion.factorization_exhaustive", "fermion.factorization_random", "fermion.mover_conservation",
      "fermion.reversibility", "fermion.values", "fermion.car_exact", "fermion.parity", "fermion.car_dense",
      "fermion.encode_number",
  };
  return names;
}

// ---------------------------------------------------------------- inputs

namespace {

template <typename T>
std::vector<std::vector<T>> read_table(const Json& j, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string(what) + " must be an array of rows");
  std::vector<std::vector<T>> out;
  for (const auto& row : j) {
    if (!row.is_array()) throw InvalidInput(std::string(what) + " rows must be arrays");
    std::vector<T> r;
    for (const auto& v : row) {
      if (!v.is_number_integer()) throw InvalidInput(std::string(what) + " entries must be integers");
      r.push_back(static_cast<T>(v.get<std::int64_t>()));
    }
    out.push_back(std::move(r));
  }
  return out;
}

template <typename T>
T field_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

StringInput parse_string_input(const Json& json) {
  try {
    StringInput in;
    const Json lat = json.value("lattice", Json::object());
    strings::WorldSheetLattice base{field_or<std::size_t>(lat, "length", 3), field_or<std::int64_t>(lat, "step", 1),
                                    field_or<std::size_t>(lat, "transverse_dims", 1),
                                    field_or<bool>(lat, "closed", true)};
    if (!json.contains("strings")) throw InvalidInput("string input needs a \"strings\" array");
    for (const auto& s : json.at("strings")) {
      auto prev = read_table<strings::Coord>(s.at("previous"), "previous");
      auto curr = read_table<strings::Coord>(s.at("current"), "current");
      strings::WorldSheetLattice l = base;
      l.transverse_dims = curr.size();
      l.length = curr.empty() ? 0 : curr.front().size();
      l.closed = field_or<bool>(s, "closed", base.closed);
      in.strings.emplace_back(l, std::move(prev), std::move(curr), field_or<int>(s, "orientation", 1),
                              field_or<std::int64_t>(s, "time", 0));
    }
    in.options.pair_exchange = field_or<bool>(json, "pair_exchange", true);
    in.options.self_exchange = field_or<bool>(json, "self_exchange", false);
    return in;
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("malformed string input: ") + e.what());
  }
}

StringInput random_string_input(const SuiteConfig& config) {
  Rng rng(config.seed);
  const std::size_t length = config.sites.value_or(16);
  strings::WorldSheetLattice lat{length, 1, 3, true};
  StringInput in;
  in.strings.emplace_back(lat, random_slice(rng, 3, length, 20), random_slice(rng, 3, length, 20));
  return in;
}

Report simulate_string(const SuiteConfig& config, const StringInput& input, std::ostream* trajectory) {
  check_common(config);
  Report r("simulate-string", config.echo());
  auto write = [&](std::int64_t t, const std::vector<strings::StringConfiguration>& v) {
    if (!trajectory) return;
    for (std::size_t k = 0; k < v.size(); ++k) {
      for (std::size_t mu = 0; mu < v[k].current().size(); ++mu) {
        *trajectory << t << ',' << k << ',' << mu;
        for (auto x : v[k].current()[mu]) *trajectory << ',' << x;
        *trajectory << '\n';
      }
    }
  };
  if (trajectory) *trajectory << "# step,string,mu,X(0..L-1)\n";

  auto cur = input.strings;
  write(0, cur);
  double residual = 0.0, conserve = 0.0;
  std::vector<strings::ExchangeEvent> events;
  const std::size_t sites = total_sites(cur);
  for (std::int64_t t = 1; t <= config.steps; ++t) {
    std::vector<strings::StringConfiguration> next;
    for (const auto& s : cur) {
      next.push_back(strings::step(s));
      residual = std::max(residual, static_cast<double>(strings::wave_residual(
                                        s.lattice(), s.previous(), s.current(), next.back().current())));
    }
    auto ex = strings::exchange_interaction(next, input.options, t);
    if (!ex.events.empty()) {
      if (points(ex.strings, true) != points(next, true) || points(ex.strings, false) != points(next, false)) {
        conserve += 1.0;
      }
    }
    if (total_sites(ex.strings) != sites) conserve += 1.0;
    events.insert(events.end(), ex.events.begin(), ex.events.end());
    cur = std::move(ex.strings);
    write(t, cur);
  }
  r.add_exact("string.wave_residual", "X(s,t+a) + X(s,t-a) = X(s+a,t) + X(s-a,t)", residual);
  r.add_exact("string.exchange_conservation", "arm exchange keeps sites and coordinates", conserve);

  if (events.empty()) {
    double movers = 0.0, reverse = 0.0;
    for (std::size_t k = 0; k < cur.size(); ++k) {
      if (cur[k].lattice().closed) {
        const auto a = strings::mover_increments(input.strings[k]);
        const auto b = strings::mover_increments(cur[k]);
        movers += a.left == b.left && a.right == b.right ? 0.0 : 1.0;
        movers += strings::split_string_movers(input.strings[k]).slice_at(cur[k].time()) == cur[k].current() ? 0.0 : 1.0;
      }
      auto back = cur[k];
      for (std::int64_t t = 0; t < config.steps; ++t) back = strings::step_backward(back);
      reverse += back == input.strings[k] ? 0.0 : 1.0;
    }
    r.add_exact("string.mover_conservation", "light-cone increments carried unchanged", movers);
    r.add_exact("string.reversibility", "backward step inverts the forward step", reverse);
  }

  Json log = Json::array();
  for (const auto& e : events) {
    log.push_back(Json{{"step", e.step}, {"kind", strings::to_string(e.kind)}, {"string_a", e.string_a},
                       {"string_b", e.string_b}, {"sigma_a", e.sigma_a}, {"sigma_b", e.sigma_b},
                       {"coordinates", e.coordinates}});
  }
  r.set_data("events", log);
  r.set_data("final_strings", cur.size());
  r.set_data("lattice_constant", strings::spacetime_lattice_constant(config.alpha_prime));
  return r;
}

fermion::BooleanField parse_boolean_input(const Json& json) {
  try {
    return fermion::BooleanField(read_table<fermion::Spin>(json.at("previous"), "previous"),
                                 read_table<fermion::Spin>(json.at("current"), "current"),
                                 field_or<bool>(json, "closed", true), field_or<std::int64_t>(json, "time", 0));
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("malformed Boolean field input: ") + e.what());
  }
}

fermion::BooleanField random_boolean_input(const SuiteConfig& config) {
  Rng rng(config.seed);
  return random_factorizable(rng, config.sites.value_or(32), 1);
}

Report simulate_fermion(const SuiteConfig& config, const fermion::BooleanField& field, std::ostream* trajectory) {
  check_common(config);
  Report r("simulate-fermion", config.echo());
  auto write = [&](const fermion::BooleanField& f) {
    if (!trajectory) return;
    for (std::size_t mu = 0; mu < f.components(); ++mu) {
      *trajectory << f.time() << ',' << mu;
      for (auto v : f.current()[mu]) *trajectory << ',' << int{v};
      *trajectory << '\n';
    }
  };
  if (trajectory) *trajectory << "# step,mu,s(0..L-1)\n";

  const bool fact = fermion::factorizable(field);
  if (field.closed()) r.add_flag("fermion.input_factorizable", "s = s_L s_R on the initial slices", fact, "true");
  std::optional<fermion::BooleanMovers> movers;
  if (fact) movers = fermion::split_boolean_movers(field);

  double recompose = 0.0, preserved = 0.0;
  auto f = field;
  write(f);
  for (std::int64_t t = 0; t < config.steps; ++t) {
    f = fermion::boolean_step(f);
    write(f);
    if (movers) {
      if (movers->slice_at(f.time()) != f.current()) recompose += 1.0;
      if (!fermion::factorizable(f)) preserved += 1.0;
    }
  }
  if (movers) {
    r.add_exact("fermion.factorization_preserved", "s = s_L s_R after every step", preserved);
    r.add_exact("fermion.factorization_random", "s(x,t) = s_L(x+t) s_R(x-t)", recompose);
    r.add_exact("fermion.mover_conservation", "mover contents carried unchanged",
                mover_content_mismatch(*movers, fermion::split_boolean_movers(f)));
  }
  for (std::int64_t t = 0; t < config.steps; ++t) f = fermion::boolean_step_backward(f);
  r.add_exact("fermion.reversibility", "backward step inverts the forward step", f == field ? 0.0 : 1.0);

  const auto rep = fermion::verify_anticommutators(fermion::jordan_wigner(config.chain));
  r.add_exact("fermion.car_exact", "{c_i, c_j^dag} = delta_ij, {c_i, c_j} = 0",
              static_cast<double>(rep.max_deviation));
  r.add_exact("fermion.parity", "c_i flips fermion parity", static_cast<double>(rep.parity_violations));
  r.set_data("chain", Json{{"sites", rep.sites}, {"relations", rep.relations}});
  return r;
}

ca::AutomatonSpec parse_rule_input(const Json& json, double default_dt) {
  try {
    const double dt = field_or<double>(json, "dt", default_dt);
    if (json.contains("rule")) return ca::AutomatonSpec::from_rule(json.at("rule").get<std::vector<std::size_t>>(), dt);
    if (json.contains("pairs")) {
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (const auto& p : json.at("pairs")) pairs.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>());
      const std::size_t n = field_or<std::size_t>(json, "state_count", pairs.size());
      return ca::AutomatonSpec::from_pairs(n, pairs, dt);
    }
    if (json.contains("cells")) {
      const auto& c = json.at("cells");
      ca::CellLattice cells{c.at("cell_count").get<std::size_t>(), field_or<std::size_t>(c, "alphabet_size", 2),
                            field_or<std::size_t>(c, "radius", 1), c.at("table").get<std::vector<std::size_t>>()};
      return ca::AutomatonSpec::from_cells(cells, dt);
    }
    throw InvalidInput("rule input needs one of \"rule\", \"pairs\" or \"cells\"");
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("malformed rule input: ") + e.what());
  }
}

Report extract_hamiltonian(const SuiteConfig& config, const ca::AutomatonSpec& spec) {
  check_common(config);
  Report r("extract-hamiltonian", config.echo());
  const auto u = ca::build_evolution(spec);
  const ComplexMatrix m = u.matrix();
  const ComplexMatrix h = ca::extract_hamiltonian(u, spec.dt());
  auto eig = linalg::hermitian_eigenvalues(h);
  for (auto& e : eig) {
    if (std::abs(e) < 1e-12) e = 0.0;
  }
  const double top = linalg::kTwoPi / spec.dt();
  r.add_bound("ca.hamiltonian_hermitian", "H = H^dag", linalg::hermiticity_defect(h), 1e-12);
  r.add_bound("ca.hamiltonian_round_trip", "exp(-i H dt) = U",
              linalg::max_abs_diff(linalg::unitary_exp(h, spec.dt()), m), config.tolerance);
  r.add_flag("ca.hamiltonian_branch", "spectrum of H in [0, 2pi/dt)", eig.front() >= 0.0 && eig.back() < top,
             "[0, 2pi/dt)");
  Rng rng(config.seed);
  r.add_bound("ca.schrodinger_residual", "d/dt psi = -i H psi over one step",
              ca::schrodinger_residual(u, h, spec.dt(), random_unit_vector(rng, m.row_basis())),
              config.tolerance);
  Json cycles = Json::array();
  for (const auto& c : u.cycles()) cycles.push_back(c.size());
  r.set_data("dt", spec.dt());
  r.set_data("cycle_lengths", cycles);
  r.set_data("eigenvalues", eig);
  return r;
}

}  // namespace cadual::suites
