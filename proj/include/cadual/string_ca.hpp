#pragma once

// Integer-valued string automaton: transverse coordinates X^mu(sigma, tau)
// on a world-sheet lattice evolve by
//
//   X(sigma, tau + a) = X(sigma + a, tau) + X(sigma - a, tau) - X(sigma, tau - a)
//
// in exact integer arithmetic. Strings that meet at a lattice point exchange
// arms deterministically.

#include <cstdint>
#include <string>
#include <vector>

#include "cadual/errors.hpp"

namespace cadual::strings {

using Coord = std::int64_t;
// slice[mu][sigma]
using Slice = std::vector<std::vector<Coord>>;

struct WorldSheetLattice {
  std::size_t length = 3;
  std::int64_t step = 1;
  std::size_t transverse_dims = 1;
  // Closed strings are periodic in sigma. Open strings mirror at their end
  // points, X(-a) = X(a) and X(L-1+a) = X(L-1-a); this is still a linear,
  // reversible update. Periodic closure is offered as an engineering option.
  bool closed = true;

  bool operator==(const WorldSheetLattice&) const = default;
};

class StringConfiguration {
public:
  StringConfiguration(WorldSheetLattice lattice, Slice previous, Slice current,
                      int orientation = 1, std::int64_t time = 0);

  // Both slices equal: a string momentarily at rest.
  static StringConfiguration at_rest(WorldSheetLattice lattice, Slice slice, int orientation = 1);

  const WorldSheetLattice& lattice() const { return lattice_; }
  const Slice& previous() const { return previous_; }
  const Slice& current() const { return current_; }
  int orientation() const { return orientation_; }
  // Time index (in lattice steps) of the current slice.
  std::int64_t time() const { return time_; }
  std::size_t length() const { return lattice_.length; }

  std::vector<Coord> point(std::size_t sigma) const;

  bool operator==(const StringConfiguration&) const = default;

private:
  WorldSheetLattice lattice_;
  Slice previous_;
  Slice current_;
  int orientation_;
  std::int64_t time_;
};

StringConfiguration step(const StringConfiguration& config);
// The same recurrence solved for the bottom slice.
StringConfiguration step_backward(const StringConfiguration& config);

// max |X(s, t+a) + X(s, t-a) - X(s+a, t) - X(s-a, t)| over every site of a
// closed string, or the interior a <= s < L - a of an open one.
Coord wave_residual(const WorldSheetLattice& lattice, const Slice& previous, const Slice& current,
                    const Slice& next);

// Light-cone increments of a closed string, both L-periodic:
//   left[mu][u mod L]  = X(s, t) - X(s - a, t - 1),  u = s + a t
//   right[mu][v mod L] = X(s, t) - X(s + a, t - 1),  v = s - a t
// The first is a function of s + a t alone and the second of s - a t alone,
// so a step rotates each sequence and leaves its values intact.
struct MoverIncrements {
  std::vector<std::vector<Coord>> left;
  std::vector<std::vector<Coord>> right;
};
MoverIncrements mover_increments(const StringConfiguration& config);

// X(s, t) = X_L(s + a t) + X_R(s - a t) for a closed string. The split is
// fixed by X_R = 0 on the 2a light-cone lines v = -a t0, ..., -a t0 + 2a - 1
// through the current slice (t0 its time); X_L and X_R are then defined on
// the whole line through the periodic increments.
class StringMovers {
public:
  StringMovers(WorldSheetLattice lattice, std::int64_t anchor_time,
               std::vector<std::vector<Coord>> left_window, std::vector<std::vector<Coord>> right_window,
               MoverIncrements increments);

  Coord left(std::size_t mu, std::int64_t u) const;
  Coord right(std::size_t mu, std::int64_t v) const;
  Slice slice_at(std::int64_t time) const;

  const WorldSheetLattice& lattice() const { return lattice_; }
  std::int64_t anchor_time() const { return anchor_time_; }

private:
  WorldSheetLattice lattice_;
  std::int64_t anchor_time_;
  std::int64_t left_origin_;
  std::int64_t right_origin_;
  std::vector<std::vector<Coord>> left_window_;
  std::vector<std::vector<Coord>> right_window_;
  MoverIncrements increments_;
};

StringMovers split_string_movers(const StringConfiguration& config);

// 2 pi sqrt(alpha')
double spacetime_lattice_constant(double alpha_prime);

enum class ExchangeKind { OpenPair, ClosedMerge, OpenAbsorb, ClosedSplit, OpenSplit };
std::string to_string(ExchangeKind kind);

struct ExchangeEvent {
  std::int64_t step = 0;
  std::size_t string_a = 0;
  std::size_t string_b = 0;
  std::size_t sigma_a = 0;
  std::size_t sigma_b = 0;
  std::vector<Coord> coordinates;
  ExchangeKind kind = ExchangeKind::OpenPair;
};

struct ExchangeOptions {
  // Between two different strings.
  bool pair_exchange = true;
  // Between two sites of the same string (splitting off a closed loop).
  bool self_exchange = false;
};

struct ExchangeResult {
  std::vector<StringConfiguration> strings;
  std::vector<ExchangeEvent> events;
};

// Finds sites whose transverse coordinate vectors coincide on the current
// slice and reconnects arms there. Strings are first put into arrow order
// (orientation -1 reverses sigma) so that an incoming arm always continues
// into an outgoing one. Candidates are taken lowest (string, sigma) first;
// each coordinate point hosts at most one exchange per call. A coincidence
// whose reconnection would leave a string shorter than its minimum length
// (2a + 1 closed, 2 open) is skipped.
ExchangeResult exchange_interaction(std::vector<StringConfiguration> strings,
                                    const ExchangeOptions& options = {}, std::int64_t step_index = 0);

// `steps` rounds of: step every string, then run the exchange scan.
ExchangeResult evolve_interacting(std::vector<StringConfiguration> strings, std::int64_t steps,
                                  const ExchangeOptions& options = {});

}  // namespace cadual::strings
