#pragma once

// Boolean automaton s(x, t+1) = s(x-1, t) s(x+1, t) s(x, t-1) with s = +-1,
// its factorization into left and right movers, and Jordan-Wigner fermions
// on the occupation basis.

#include <cstdint>
#include <vector>

#include "cadual/errors.hpp"
#include "cadual/linalg.hpp"

namespace cadual::fermion {

using Spin = std::int8_t;
// slice[mu][x]
using SpinSlice = std::vector<std::vector<Spin>>;

class BooleanField {
public:
  // Closed fields are periodic; open fields mirror at the ends,
  // s(-1) = s(1) and s(L) = s(L-2).
  BooleanField(SpinSlice previous, SpinSlice current, bool closed = true, std::int64_t time = 0);

  const SpinSlice& previous() const { return previous_; }
  const SpinSlice& current() const { return current_; }
  bool closed() const { return closed_; }
  std::int64_t time() const { return time_; }
  std::size_t sites() const { return current_.front().size(); }
  std::size_t components() const { return current_.size(); }

  bool operator==(const BooleanField&) const = default;

private:
  SpinSlice previous_;
  SpinSlice current_;
  bool closed_;
  std::int64_t time_;
};

BooleanField boolean_step(const BooleanField& field);
BooleanField boolean_step_backward(const BooleanField& field);

// s(x, t) = s_L(x + t) s_R(x - t) on a ring. Both movers are periodic with
// the ring length and stored relative to the anchor time t0:
//   left[mu][(u - t0) mod L], right[mu][(v + t0) mod L].
// The sign gauge sets s_R = +1 at index 0, and also at index 1 when L is even
// (the two light-cone sublattices are then independent).
struct BooleanMovers {
  std::int64_t anchor_time = 0;
  SpinSlice left;
  SpinSlice right;

  Spin left_at(std::size_t mu, std::int64_t u) const;
  Spin right_at(std::size_t mu, std::int64_t v) const;
  SpinSlice slice_at(std::int64_t time) const;
};

// Throws InvalidInput when the slice pair admits no periodic factorization.
BooleanMovers split_boolean_movers(const BooleanField& field);

// Whether a closed slice pair factorizes into periodic movers.
bool factorizable(const BooleanField& field);

// Annihilation and creation operators on 2^n occupation states. A basis
// index is the occupation pattern read as a binary number with site 0 the
// most significant bit; index 0 is the vacuum.
class FermionChain {
public:
  static constexpr std::size_t kMaxSites = 12;
  static constexpr std::size_t kMaxDenseSites = 8;

  explicit FermionChain(std::size_t n);

  std::size_t sites() const { return n_; }
  std::size_t dim() const { return std::size_t{1} << n_; }
  const linalg::Basis& basis() const { return basis_; }

  bool occupied(std::size_t state, std::size_t site) const;
  // c_i |state> = sign |target>; sign 0 when site i is empty.
  struct Action {
    int sign = 0;
    std::size_t target = 0;
  };
  Action annihilate(std::size_t site, std::size_t state) const;
  Action create(std::size_t site, std::size_t state) const;

  // Dense matrices; sites() must not exceed kMaxDenseSites.
  linalg::ComplexMatrix annihilation(std::size_t site) const;
  linalg::ComplexMatrix creation(std::size_t site) const;
  linalg::ComplexMatrix number(std::size_t site) const;

private:
  void check_site(std::size_t site) const;
  void check_dense() const;

  std::size_t n_;
  linalg::Basis basis_;
};

FermionChain jordan_wigner(std::size_t n);

struct AnticommutatorReport {
  std::size_t sites = 0;
  std::size_t relations = 0;
  // Largest integer |entry| of {c_i, c_j^dag} - delta_ij I and {c_i, c_j}.
  std::int64_t max_deviation = 0;
  // Nonzero entries of some c_i that connect states of equal parity.
  std::size_t parity_violations = 0;
};

// Exact integer check from the structured action, for all n <= 12.
AnticommutatorReport verify_anticommutators(const FermionChain& chain);

// Same relations on the dense matrices, max entry deviation.
double dense_anticommutator_defect(const FermionChain& chain);

// Occupied iff s = -1.
linalg::ComplexVector encode_boolean_state(const std::vector<Spin>& slice, const FermionChain& chain);

}  // namespace cadual::fermion
