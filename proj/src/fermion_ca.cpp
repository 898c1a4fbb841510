#include "cadual/fermion_ca.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <sstream>

namespace cadual::fermion {

namespace {

std::size_t wrap(std::int64_t x, std::size_t n) {
  const auto m = static_cast<std::int64_t>(n);
  return static_cast<std::size_t>(((x % m) + m) % m);
}

void check_slice(const SpinSlice& s, const char* which) {
  if (s.empty()) throw InvalidInput(std::string(which) + " slice has no components");
  for (const auto& row : s) {
    if (row.size() != s.front().size()) {
      throw InvalidInput(std::string(which) + " slice components differ in length");
    }
    for (Spin v : row) {
      if (v != 1 && v != -1) {
        std::ostringstream os;
        os << which << " slice holds " << int{v} << "; Boolean values must be +1 or -1";
        throw InvalidInput(os.str());
      }
    }
  }
}

std::size_t neighbor(std::int64_t x, std::size_t n, bool closed) {
  if (closed) return wrap(x, n);
  const auto last = static_cast<std::int64_t>(n) - 1;
  if (x < 0) x = -x;
  if (x > last) x = 2 * last - x;
  return static_cast<std::size_t>(x);
}

SpinSlice advance(const SpinSlice& older, const SpinSlice& middle, bool closed) {
  SpinSlice out = middle;
  const std::size_t n = middle.front().size();
  for (std::size_t mu = 0; mu < middle.size(); ++mu) {
    for (std::size_t x = 0; x < n; ++x) {
      const auto xi = static_cast<std::int64_t>(x);
      out[mu][x] = static_cast<Spin>(middle[mu][neighbor(xi - 1, n, closed)] *
                                     middle[mu][neighbor(xi + 1, n, closed)] * older[mu][x]);
    }
  }
  return out;
}

// Solves one component for periodic movers; nullopt on an inconsistent cycle.
std::optional<std::pair<std::vector<Spin>, std::vector<Spin>>> factor_component(
    const std::vector<Spin>& prev, const std::vector<Spin>& curr) {
  const std::size_t n = curr.size();
  // Edges: current slice joins L_x and R_x; previous slice joins L_{x-1} and R_{x+1}.
  std::vector<Spin> left(n, 0), right(n, 0);
  std::queue<std::pair<bool, std::size_t>> todo;  // (is_left, index)
  auto assign = [&](bool is_left, std::size_t i, Spin v) {
    Spin& slot = is_left ? left[i] : right[i];
    if (slot == 0) {
      slot = v;
      todo.push({is_left, i});
      return true;
    }
    return slot == v;
  };
  assign(false, 0, 1);
  if (n % 2 == 0) assign(false, 1, 1);
  while (!todo.empty()) {
    auto [is_left, i] = todo.front();
    todo.pop();
    const auto ii = static_cast<std::int64_t>(i);
    bool ok = true;
    if (is_left) {
      ok &= assign(false, i, static_cast<Spin>(curr[i] * left[i]));
      const std::size_t x = wrap(ii + 1, n);
      ok &= assign(false, wrap(ii + 2, n), static_cast<Spin>(prev[x] * left[i]));
    } else {
      ok &= assign(true, i, static_cast<Spin>(curr[i] * right[i]));
      const std::size_t x = wrap(ii - 1, n);
      ok &= assign(true, wrap(ii - 2, n), static_cast<Spin>(prev[x] * right[i]));
    }
    if (!ok) return std::nullopt;
  }
  return std::make_pair(std::move(left), std::move(right));
}

}  // namespace

BooleanField::BooleanField(SpinSlice previous, SpinSlice current, bool closed, std::int64_t time)
    : previous_(std::move(previous)), current_(std::move(current)), closed_(closed), time_(time) {
  check_slice(previous_, "previous");
  check_slice(current_, "current");
  if (previous_.size() != current_.size() || previous_.front().size() != current_.front().size()) {
    throw InvalidInput("previous and current slices differ in shape");
  }
  const std::size_t minimum = closed_ ? 3 : 2;
  if (sites() < minimum) {
    std::ostringstream os;
    os << (closed_ ? "closed" : "open") << " Boolean field needs at least " << minimum << " sites";
    throw InvalidInput(os.str());
  }
}

BooleanField boolean_step(const BooleanField& field) {
  return BooleanField(field.current(), advance(field.previous(), field.current(), field.closed()),
                      field.closed(), field.time() + 1);
}

BooleanField boolean_step_backward(const BooleanField& field) {
  return BooleanField(advance(field.current(), field.previous(), field.closed()), field.previous(),
                      field.closed(), field.time() - 1);
}

Spin BooleanMovers::left_at(std::size_t mu, std::int64_t u) const {
  return left[mu][wrap(u - anchor_time, left[mu].size())];
}

Spin BooleanMovers::right_at(std::size_t mu, std::int64_t v) const {
  return right[mu][wrap(v + anchor_time, right[mu].size())];
}

SpinSlice BooleanMovers::slice_at(std::int64_t time) const {
  SpinSlice out = left;
  for (std::size_t mu = 0; mu < left.size(); ++mu) {
    for (std::size_t x = 0; x < left[mu].size(); ++x) {
      const auto xi = static_cast<std::int64_t>(x);
      out[mu][x] = static_cast<Spin>(left_at(mu, xi + time) * right_at(mu, xi - time));
    }
  }
  return out;
}

BooleanMovers split_boolean_movers(const BooleanField& field) {
  if (!field.closed()) throw InvalidInput("split_boolean_movers: field must be periodic");
  BooleanMovers m;
  m.anchor_time = field.time();
  for (std::size_t mu = 0; mu < field.components(); ++mu) {
    auto solved = factor_component(field.previous()[mu], field.current()[mu]);
    if (!solved) {
      std::ostringstream os;
      os << "inconsistent initial data: component " << mu
         << " of the slice pair does not split into periodic left and right movers";
      throw InvalidInput(os.str());
    }
    m.left.push_back(std::move(solved->first));
    m.right.push_back(std::move(solved->second));
  }
  return m;
}

bool factorizable(const BooleanField& field) {
  if (!field.closed()) return false;
  for (std::size_t mu = 0; mu < field.components(); ++mu) {
    if (!factor_component(field.previous()[mu], field.current()[mu])) return false;
  }
  return true;
}

// ---------------------------------------------------------------- fermions

namespace {

linalg::Basis occupation_basis(std::size_t n) {
  std::vector<linalg::BasisLabel> labels;
  labels.reserve(std::size_t{1} << n);
  for (std::size_t k = 0; k < (std::size_t{1} << n); ++k) {
    linalg::BasisLabel l(n);
    for (std::size_t i = 0; i < n; ++i) l[i] = static_cast<std::int64_t>((k >> (n - 1 - i)) & 1U);
    labels.push_back(std::move(l));
  }
  return linalg::Basis(std::move(labels));
}

}  // namespace

FermionChain::FermionChain(std::size_t n) : n_(n) {
  if (n < 1 || n > kMaxSites) {
    std::ostringstream os;
    os << "fermion chain length must be in [1, " << kMaxSites << "], got " << n;
    throw InvalidInput(os.str());
  }
  basis_ = occupation_basis(n);
}

void FermionChain::check_site(std::size_t site) const {
  if (site >= n_) throw InvalidInput("fermion site out of range");
}

void FermionChain::check_dense() const {
  if (n_ > kMaxDenseSites) {
    std::ostringstream os;
    os << "dense fermion matrices are limited to " << kMaxDenseSites << " sites, chain has " << n_;
    throw InvalidInput(os.str());
  }
}

bool FermionChain::occupied(std::size_t state, std::size_t site) const {
  return ((state >> (n_ - 1 - site)) & 1U) != 0;
}

FermionChain::Action FermionChain::annihilate(std::size_t site, std::size_t state) const {
  check_site(site);
  if (!occupied(state, site)) return {};
  int sign = 1;
  for (std::size_t j = 0; j < site; ++j) {
    if (occupied(state, j)) sign = -sign;
  }
  return {sign, state ^ (std::size_t{1} << (n_ - 1 - site))};
}

FermionChain::Action FermionChain::create(std::size_t site, std::size_t state) const {
  check_site(site);
  if (occupied(state, site)) return {};
  int sign = 1;
  for (std::size_t j = 0; j < site; ++j) {
    if (occupied(state, j)) sign = -sign;
  }
  return {sign, state ^ (std::size_t{1} << (n_ - 1 - site))};
}

linalg::ComplexMatrix FermionChain::annihilation(std::size_t site) const {
  check_dense();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(dim()));
  for (std::size_t k = 0; k < dim(); ++k) {
    const Action a = annihilate(site, k);
    if (a.sign != 0) m(static_cast<Eigen::Index>(a.target), static_cast<Eigen::Index>(k)) = double(a.sign);
  }
  return linalg::ComplexMatrix(std::move(m), basis_);
}

linalg::ComplexMatrix FermionChain::creation(std::size_t site) const {
  return annihilation(site).adjoint();
}

linalg::ComplexMatrix FermionChain::number(std::size_t site) const {
  check_dense();
  check_site(site);
  Eigen::VectorXcd d(static_cast<Eigen::Index>(dim()));
  for (std::size_t k = 0; k < dim(); ++k) d(static_cast<Eigen::Index>(k)) = occupied(k, site) ? 1.0 : 0.0;
  return linalg::ComplexMatrix::diagonal(d, basis_);
}

FermionChain jordan_wigner(std::size_t n) { return FermionChain(n); }

namespace {

using Action = FermionChain::Action;

// Coefficient of |k> in (first . second + third . fourth)|k> minus `diag`,
// plus any stray term; each product of two actions is a single signed state.
std::int64_t relation_deviation(Action ab, Action ba, std::size_t k, std::int64_t diag) {
  std::map<std::size_t, std::int64_t> terms{{k, -diag}};
  if (ab.sign != 0) terms[ab.target] += ab.sign;
  if (ba.sign != 0) terms[ba.target] += ba.sign;
  std::int64_t worst = 0;
  for (const auto& [idx, v] : terms) worst = std::max(worst, v < 0 ? -v : v);
  return worst;
}

Action compose(Action inner, const std::function<Action(std::size_t)>& outer) {
  if (inner.sign == 0) return {};
  Action a = outer(inner.target);
  a.sign *= inner.sign;
  return a;
}

}  // namespace

AnticommutatorReport verify_anticommutators(const FermionChain& chain) {
  AnticommutatorReport r;
  r.sites = chain.sites();
  const std::size_t n = chain.sites();
  for (std::size_t i = 0; i < n; ++i) {
    auto c_i = [&](std::size_t k) { return chain.annihilate(i, k); };
    for (std::size_t j = 0; j < n; ++j) {
      auto c_j = [&](std::size_t k) { return chain.annihilate(j, k); };
      auto cd_j = [&](std::size_t k) { return chain.create(j, k); };
      r.relations += 2;
      for (std::size_t k = 0; k < chain.dim(); ++k) {
        // {c_i, c_j^dag} - delta_ij I and {c_i, c_j}, column k
        const auto mixed = relation_deviation(compose(cd_j(k), c_i), compose(c_i(k), cd_j), k, i == j ? 1 : 0);
        const auto pair = relation_deviation(compose(c_j(k), c_i), compose(c_i(k), c_j), k, 0);
        r.max_deviation = std::max({r.max_deviation, mixed, pair});
      }
    }
    for (std::size_t k = 0; k < chain.dim(); ++k) {
      const auto a = chain.annihilate(i, k);
      if (a.sign != 0 && std::popcount(a.target) % 2 == std::popcount(k) % 2) ++r.parity_violations;
    }
  }
  return r;
}

double dense_anticommutator_defect(const FermionChain& chain) {
  const std::size_t n = chain.sites();
  std::vector<linalg::ComplexMatrix> c, cd;
  for (std::size_t i = 0; i < n; ++i) {
    c.push_back(chain.annihilation(i));
    cd.push_back(c.back().adjoint());
  }
  const auto id = linalg::ComplexMatrix::identity(chain.basis());
  const auto zero = linalg::ComplexMatrix::zero(chain.basis());
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      worst = std::max(worst, linalg::max_abs_diff(linalg::anticommutator(c[i], cd[j]), i == j ? id : zero));
      worst = std::max(worst, linalg::max_abs_diff(linalg::anticommutator(c[i], c[j]), zero));
    }
  }
  return worst;
}

linalg::ComplexVector encode_boolean_state(const std::vector<Spin>& slice, const FermionChain& chain) {
  if (slice.size() != chain.sites()) {
    std::ostringstream os;
    os << "slice has " << slice.size() << " sites, chain has " << chain.sites();
    throw InvalidInput(os.str());
  }
  std::size_t index = 0;
  for (std::size_t i = 0; i < slice.size(); ++i) {
    if (slice[i] != 1 && slice[i] != -1) throw InvalidInput("Boolean values must be +1 or -1");
    index = (index << 1U) | (slice[i] == -1 ? 1U : 0U);
  }
  return linalg::ComplexVector::basis_state(chain.basis(), index);
}

}  // namespace cadual::fermion
