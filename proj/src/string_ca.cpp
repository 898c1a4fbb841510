#include "cadual/string_ca.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <queue>
#include <set>
#include <sstream>

namespace cadual::strings {

namespace {

std::int64_t mod(std::int64_t x, std::int64_t m) { return ((x % m) + m) % m; }

void check_slice(const WorldSheetLattice& lattice, const Slice& s, const char* which) {
  if (s.size() != lattice.transverse_dims) {
    std::ostringstream os;
    os << which << " slice has " << s.size() << " components, lattice expects "
       << lattice.transverse_dims;
    throw InvalidInput(os.str());
  }
  for (const auto& row : s) {
    if (row.size() != lattice.length) {
      std::ostringstream os;
      os << which << " slice row has " << row.size() << " sites, lattice length is "
         << lattice.length;
      throw InvalidInput(os.str());
    }
  }
}

std::size_t min_length(const WorldSheetLattice& lattice) {
  return lattice.closed ? static_cast<std::size_t>(2 * lattice.step + 1) : 2;
}

void check_lattice(const WorldSheetLattice& lattice) {
  if (lattice.step < 1) throw InvalidInput("world-sheet lattice step a must be a positive integer");
  if (lattice.transverse_dims < 1) throw InvalidInput("need at least one transverse dimension");
  if (lattice.length < min_length(lattice)) {
    std::ostringstream os;
    os << (lattice.closed ? "closed" : "open") << " string needs at least " << min_length(lattice)
       << " sites, got " << lattice.length;
    throw InvalidInput(os.str());
  }
  if (!lattice.closed && static_cast<std::size_t>(lattice.step) >= lattice.length) {
    throw InvalidInput("open string shorter than its lattice step");
  }
}

// Neighbour index at sigma + offset: periodic or mirrored at the ends.
std::size_t neighbor(const WorldSheetLattice& lattice, std::int64_t sigma) {
  const auto n = static_cast<std::int64_t>(lattice.length);
  if (lattice.closed) return static_cast<std::size_t>(mod(sigma, n));
  if (sigma < 0) sigma = -sigma;
  if (sigma > n - 1) sigma = 2 * (n - 1) - sigma;
  return static_cast<std::size_t>(sigma);
}

Slice advance(const WorldSheetLattice& lattice, const Slice& older, const Slice& middle) {
  Slice out(lattice.transverse_dims, std::vector<Coord>(lattice.length));
  const std::int64_t a = lattice.step;
  for (std::size_t mu = 0; mu < lattice.transverse_dims; ++mu) {
    for (std::size_t s = 0; s < lattice.length; ++s) {
      const auto si = static_cast<std::int64_t>(s);
      out[mu][s] = middle[mu][neighbor(lattice, si + a)] + middle[mu][neighbor(lattice, si - a)] -
                   older[mu][s];
    }
  }
  return out;
}

void require_closed(const StringConfiguration& config, const char* what) {
  if (!config.lattice().closed) {
    throw InvalidInput(std::string(what) + " is defined for closed (periodic) strings only");
  }
}

}  // namespace

StringConfiguration::StringConfiguration(WorldSheetLattice lattice, Slice previous, Slice current,
                                         int orientation, std::int64_t time)
    : lattice_(lattice),
      previous_(std::move(previous)),
      current_(std::move(current)),
      orientation_(orientation),
      time_(time) {
  check_lattice(lattice_);
  check_slice(lattice_, previous_, "previous");
  check_slice(lattice_, current_, "current");
  if (orientation_ != 1 && orientation_ != -1) throw InvalidInput("orientation must be +1 or -1");
}

StringConfiguration StringConfiguration::at_rest(WorldSheetLattice lattice, Slice slice,
                                                 int orientation) {
  Slice copy = slice;
  return StringConfiguration(lattice, std::move(copy), std::move(slice), orientation, 0);
}

std::vector<Coord> StringConfiguration::point(std::size_t sigma) const {
  if (sigma >= lattice_.length) throw InvalidInput("sigma out of range");
  std::vector<Coord> p(lattice_.transverse_dims);
  for (std::size_t mu = 0; mu < p.size(); ++mu) p[mu] = current_[mu][sigma];
  return p;
}

StringConfiguration step(const StringConfiguration& config) {
  Slice next = advance(config.lattice(), config.previous(), config.current());
  return StringConfiguration(config.lattice(), config.current(), std::move(next),
                             config.orientation(), config.time() + 1);
}

StringConfiguration step_backward(const StringConfiguration& config) {
  Slice before = advance(config.lattice(), config.current(), config.previous());
  return StringConfiguration(config.lattice(), std::move(before), config.previous(),
                             config.orientation(), config.time() - 1);
}

Coord wave_residual(const WorldSheetLattice& lattice, const Slice& previous, const Slice& current,
                    const Slice& next) {
  check_slice(lattice, previous, "previous");
  check_slice(lattice, current, "current");
  check_slice(lattice, next, "next");
  const std::int64_t a = lattice.step;
  const auto n = static_cast<std::int64_t>(lattice.length);
  const std::int64_t lo = lattice.closed ? 0 : a;
  const std::int64_t hi = lattice.closed ? n : n - a;
  Coord worst = 0;
  for (std::size_t mu = 0; mu < lattice.transverse_dims; ++mu) {
    for (std::int64_t s = lo; s < hi; ++s) {
      const Coord r = next[mu][static_cast<std::size_t>(s)] + previous[mu][static_cast<std::size_t>(s)] -
                      current[mu][neighbor(lattice, s + a)] - current[mu][neighbor(lattice, s - a)];
      worst = std::max(worst, r < 0 ? -r : r);
    }
  }
  return worst;
}

MoverIncrements mover_increments(const StringConfiguration& config) {
  require_closed(config, "mover_increments");
  const auto& lat = config.lattice();
  const auto n = static_cast<std::int64_t>(lat.length);
  const std::int64_t a = lat.step, t = config.time();
  MoverIncrements inc;
  inc.left.assign(lat.transverse_dims, std::vector<Coord>(lat.length));
  inc.right.assign(lat.transverse_dims, std::vector<Coord>(lat.length));
  for (std::size_t mu = 0; mu < lat.transverse_dims; ++mu) {
    for (std::int64_t s = 0; s < n; ++s) {
      const Coord x = config.current()[mu][static_cast<std::size_t>(s)];
      inc.left[mu][static_cast<std::size_t>(mod(s + a * t, n))] =
          x - config.previous()[mu][neighbor(lat, s - a)];
      inc.right[mu][static_cast<std::size_t>(mod(s - a * t, n))] =
          x - config.previous()[mu][neighbor(lat, s + a)];
    }
  }
  return inc;
}

// ---------------------------------------------------------------- movers

StringMovers::StringMovers(WorldSheetLattice lattice, std::int64_t anchor_time,
                           std::vector<std::vector<Coord>> left_window,
                           std::vector<std::vector<Coord>> right_window, MoverIncrements increments)
    : lattice_(lattice),
      anchor_time_(anchor_time),
      left_origin_(lattice.step * (anchor_time - 1)),
      right_origin_(-lattice.step * anchor_time),
      left_window_(std::move(left_window)),
      right_window_(std::move(right_window)),
      increments_(std::move(increments)) {}

Coord StringMovers::left(std::size_t mu, std::int64_t u) const {
  const auto n = static_cast<std::int64_t>(lattice_.length);
  const std::int64_t two_a = 2 * lattice_.step;
  const auto width = static_cast<std::int64_t>(left_window_[mu].size());
  const auto& inc = increments_.left[mu];
  Coord acc = 0;
  // X_L(u) = X_L(u - 2a) + left(u)
  while (u >= left_origin_ + width) {
    acc += inc[static_cast<std::size_t>(mod(u, n))];
    u -= two_a;
  }
  while (u < left_origin_) {
    acc -= inc[static_cast<std::size_t>(mod(u + two_a, n))];
    u += two_a;
  }
  return acc + left_window_[mu][static_cast<std::size_t>(u - left_origin_)];
}

Coord StringMovers::right(std::size_t mu, std::int64_t v) const {
  const auto n = static_cast<std::int64_t>(lattice_.length);
  const std::int64_t two_a = 2 * lattice_.step;
  const auto width = static_cast<std::int64_t>(right_window_[mu].size());
  const auto& inc = increments_.right[mu];
  Coord acc = 0;
  // X_R(v) = X_R(v + 2a) + right(v)
  while (v >= right_origin_ + width) {
    acc -= inc[static_cast<std::size_t>(mod(v - two_a, n))];
    v -= two_a;
  }
  while (v < right_origin_) {
    acc += inc[static_cast<std::size_t>(mod(v, n))];
    v += two_a;
  }
  return acc + right_window_[mu][static_cast<std::size_t>(v - right_origin_)];
}

Slice StringMovers::slice_at(std::int64_t time) const {
  Slice out(lattice_.transverse_dims, std::vector<Coord>(lattice_.length));
  const std::int64_t a = lattice_.step;
  for (std::size_t mu = 0; mu < lattice_.transverse_dims; ++mu) {
    for (std::size_t s = 0; s < lattice_.length; ++s) {
      const auto si = static_cast<std::int64_t>(s);
      out[mu][s] = left(mu, si + a * time) + right(mu, si - a * time);
    }
  }
  return out;
}

StringMovers split_string_movers(const StringConfiguration& config) {
  require_closed(config, "split_string_movers");
  const auto& lat = config.lattice();
  const std::int64_t a = lat.step;
  const auto n = static_cast<std::int64_t>(lat.length);
  const auto width = static_cast<std::size_t>(n + a);

  // Window-relative indices: left node i <-> u = a(t0 - 1) + i, right node
  // j <-> v = -a t0 + j. The current slice at sigma links left sigma + a to
  // right sigma; the previous slice links left sigma to right sigma + a.
  struct Edge {
    std::size_t left, right;
    bool current;
    std::size_t sigma;
  };
  std::vector<Edge> edges;
  std::vector<std::vector<std::size_t>> left_adj(width), right_adj(width);
  for (std::int64_t s = 0; s < n; ++s) {
    const auto su = static_cast<std::size_t>(s);
    const auto sa = static_cast<std::size_t>(s + a);
    edges.push_back({sa, su, true, su});
    edges.push_back({su, sa, false, su});
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    left_adj[edges[e].left].push_back(e);
    right_adj[edges[e].right].push_back(e);
  }

  std::vector<std::vector<Coord>> lw(lat.transverse_dims), rw(lat.transverse_dims);
  for (std::size_t mu = 0; mu < lat.transverse_dims; ++mu) {
    std::vector<std::optional<Coord>> lv(width), rv(width);
    std::queue<std::pair<bool, std::size_t>> todo;  // (is_left, node)
    for (std::size_t j = 0; j < static_cast<std::size_t>(2 * a); ++j) {
      rv[j] = 0;
      todo.push({false, j});
    }
    while (!todo.empty()) {
      auto [is_left, node] = todo.front();
      todo.pop();
      const auto& adj = is_left ? left_adj[node] : right_adj[node];
      for (std::size_t e : adj) {
        const Edge& ed = edges[e];
        const Coord x = ed.current ? config.current()[mu][ed.sigma] : config.previous()[mu][ed.sigma];
        if (is_left && !rv[ed.right]) {
          rv[ed.right] = x - *lv[node];
          todo.push({false, ed.right});
        } else if (!is_left && !lv[ed.left]) {
          lv[ed.left] = x - *rv[node];
          todo.push({true, ed.left});
        }
      }
    }
    for (std::size_t i = 0; i < width; ++i) {
      if (!lv[i] || !rv[i]) throw NumericalError("split_string_movers: light-cone graph not covered");
      lw[mu].push_back(*lv[i]);
      rw[mu].push_back(*rv[i]);
    }
  }
  return StringMovers(lat, config.time(), std::move(lw), std::move(rw), mover_increments(config));
}

double spacetime_lattice_constant(double alpha_prime) {
  if (!(alpha_prime > 0.0) || !std::isfinite(alpha_prime)) {
    throw InvalidInput("alpha' must be a positive finite number");
  }
  return 2.0 * std::numbers::pi * std::sqrt(alpha_prime);
}

// ---------------------------------------------------------------- exchange

std::string to_string(ExchangeKind kind) {
  switch (kind) {
    case ExchangeKind::OpenPair: return "open-pair";
    case ExchangeKind::ClosedMerge: return "closed-merge";
    case ExchangeKind::OpenAbsorb: return "open-absorb";
    case ExchangeKind::ClosedSplit: return "closed-split";
    case ExchangeKind::OpenSplit: return "open-split";
  }
  return "unknown";
}

namespace {

// Site-major copy of a string in arrow order: sites[k] = (previous, current).
struct Strand {
  WorldSheetLattice lattice;
  std::int64_t time = 0;
  std::vector<std::pair<std::vector<Coord>, std::vector<Coord>>> sites;
};

Strand to_strand(const StringConfiguration& c) {
  Strand st{c.lattice(), c.time(), {}};
  const std::size_t n = c.length();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t s = c.orientation() == 1 ? k : n - 1 - k;
    std::vector<Coord> prev(c.lattice().transverse_dims), cur(c.lattice().transverse_dims);
    for (std::size_t mu = 0; mu < prev.size(); ++mu) {
      prev[mu] = c.previous()[mu][s];
      cur[mu] = c.current()[mu][s];
    }
    st.sites.emplace_back(std::move(prev), std::move(cur));
  }
  return st;
}

StringConfiguration from_strand(const Strand& st, bool closed) {
  WorldSheetLattice lat = st.lattice;
  lat.length = st.sites.size();
  lat.closed = closed;
  Slice prev(lat.transverse_dims, std::vector<Coord>(lat.length));
  Slice cur(lat.transverse_dims, std::vector<Coord>(lat.length));
  for (std::size_t k = 0; k < lat.length; ++k) {
    for (std::size_t mu = 0; mu < lat.transverse_dims; ++mu) {
      prev[mu][k] = st.sites[k].first[mu];
      cur[mu][k] = st.sites[k].second[mu];
    }
  }
  return StringConfiguration(lat, std::move(prev), std::move(cur), 1, st.time);
}

using Sites = decltype(Strand::sites);

// Half-open [from, to) of a site list.
Sites range(const Sites& s, std::size_t from, std::size_t to) {
  return Sites(s.begin() + static_cast<std::ptrdiff_t>(from), s.begin() + static_cast<std::ptrdiff_t>(to));
}

Sites concat(std::initializer_list<Sites> parts) {
  Sites out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// Loop read starting just after position j and ending at j.
Sites rotated_after(const Sites& s, std::size_t j) {
  return concat({range(s, j + 1, s.size()), range(s, 0, j + 1)});
}

std::size_t arrow_index(const StringConfiguration& c, std::size_t sigma) {
  return c.orientation() == 1 ? sigma : c.length() - 1 - sigma;
}

struct Reconnection {
  std::vector<StringConfiguration> replacements;  // first replaces string a
  bool removes_b = false;                         // pair exchange that fuses a and b
  ExchangeKind kind;
};

bool long_enough(const Sites& s, bool closed, std::int64_t a) {
  return s.size() >= (closed ? static_cast<std::size_t>(2 * a + 1) : 2);
}

std::optional<Reconnection> reconnect_pair(const StringConfiguration& ca, std::size_t sa,
                                           const StringConfiguration& cb, std::size_t sb) {
  Strand A = to_strand(ca), B = to_strand(cb);
  const std::size_t i = arrow_index(ca, sa), j = arrow_index(cb, sb);
  const bool a_closed = ca.lattice().closed, b_closed = cb.lattice().closed;
  const std::int64_t step = ca.lattice().step;
  Reconnection r;
  if (!a_closed && !b_closed) {
    Sites a2 = concat({range(A.sites, 0, i + 1), range(B.sites, j + 1, B.sites.size())});
    Sites b2 = concat({range(B.sites, 0, j + 1), range(A.sites, i + 1, A.sites.size())});
    if (!long_enough(a2, false, step) || !long_enough(b2, false, step)) return std::nullopt;
    A.sites = std::move(a2);
    B.sites = std::move(b2);
    r.replacements = {from_strand(A, false), from_strand(B, false)};
    r.kind = ExchangeKind::OpenPair;
  } else if (a_closed && b_closed) {
    A.sites = concat({range(A.sites, 0, i + 1), rotated_after(B.sites, j),
                      range(A.sites, i + 1, A.sites.size())});
    r.replacements = {from_strand(A, true)};
    r.removes_b = true;
    r.kind = ExchangeKind::ClosedMerge;
  } else {
    // The open string takes the loop in at the meeting point.
    Strand& open = a_closed ? B : A;
    const Strand& loop = a_closed ? A : B;
    const std::size_t oi = a_closed ? j : i, li = a_closed ? i : j;
    open.sites = concat({range(open.sites, 0, oi + 1), rotated_after(loop.sites, li),
                         range(open.sites, oi + 1, open.sites.size())});
    r.replacements = {from_strand(open, false)};
    r.removes_b = true;
    r.kind = ExchangeKind::OpenAbsorb;
  }
  return r;
}

std::optional<Reconnection> reconnect_self(const StringConfiguration& c, std::size_t s1, std::size_t s2) {
  Strand S = to_strand(c);
  std::size_t i = arrow_index(c, s1), j = arrow_index(c, s2);
  if (i > j) std::swap(i, j);
  const bool closed = c.lattice().closed;
  const std::int64_t step = c.lattice().step;
  Sites loop = range(S.sites, i + 1, j + 1);
  Sites rest = concat({range(S.sites, 0, i + 1), range(S.sites, j + 1, S.sites.size())});
  if (!long_enough(loop, true, step) || !long_enough(rest, closed, step)) return std::nullopt;
  Strand L = S;
  L.sites = std::move(loop);
  S.sites = std::move(rest);
  Reconnection r;
  r.replacements = {from_strand(S, closed), from_strand(L, true)};
  r.kind = closed ? ExchangeKind::ClosedSplit : ExchangeKind::OpenSplit;
  return r;
}

}  // namespace

ExchangeResult exchange_interaction(std::vector<StringConfiguration> strings,
                                    const ExchangeOptions& options, std::int64_t step_index) {
  ExchangeResult result;
  if (strings.empty()) return result;
  const auto& ref = strings.front().lattice();
  for (const auto& s : strings) {
    if (s.lattice().transverse_dims != ref.transverse_dims || s.lattice().step != ref.step) {
      throw InvalidInput("exchange_interaction: strings must share transverse dimension and lattice step");
    }
  }

  std::set<std::vector<Coord>> consumed;
  for (;;) {
    std::map<std::vector<Coord>, std::vector<std::pair<std::size_t, std::size_t>>> occupancy;
    for (std::size_t k = 0; k < strings.size(); ++k) {
      for (std::size_t s = 0; s < strings[k].length(); ++s) {
        auto p = strings[k].point(s);
        if (!consumed.contains(p)) occupancy[std::move(p)].emplace_back(k, s);
      }
    }
    // Candidate pairs ordered by (string_a, sigma_a, string_b, sigma_b).
    std::vector<std::array<std::size_t, 4>> candidates;
    for (const auto& [pt, sites] : occupancy) {
      for (std::size_t x = 0; x < sites.size(); ++x) {
        for (std::size_t y = x + 1; y < sites.size(); ++y) {
          auto lo = std::min(sites[x], sites[y]), hi = std::max(sites[x], sites[y]);
          const bool same = lo.first == hi.first;
          if (same ? !options.self_exchange : !options.pair_exchange) continue;
          candidates.push_back({lo.first, lo.second, hi.first, hi.second});
        }
      }
    }
    std::sort(candidates.begin(), candidates.end());

    bool applied = false;
    for (const auto& [ka, sa, kb, sb] : candidates) {
      std::optional<Reconnection> rec =
          ka == kb ? reconnect_self(strings[ka], sa, sb)
                   : reconnect_pair(strings[ka], sa, strings[kb], sb);
      if (!rec) continue;
      ExchangeEvent ev{step_index, ka, kb, sa, sb, strings[ka].point(sa), rec->kind};
      consumed.insert(ev.coordinates);
      if (ka == kb) {
        strings[ka] = rec->replacements[0];
        strings.push_back(rec->replacements[1]);
      } else {
        strings[ka] = rec->replacements[0];
        if (rec->removes_b) {
          strings.erase(strings.begin() + static_cast<std::ptrdiff_t>(kb));
        } else {
          strings[kb] = rec->replacements[1];
        }
      }
      result.events.push_back(std::move(ev));
      applied = true;
      break;
    }
    if (!applied) break;
  }
  result.strings = std::move(strings);
  return result;
}

ExchangeResult evolve_interacting(std::vector<StringConfiguration> strings, std::int64_t steps,
                                  const ExchangeOptions& options) {
  if (steps < 0) throw InvalidInput("evolve_interacting: steps must be non-negative");
  ExchangeResult out;
  out.strings = std::move(strings);
  for (std::int64_t t = 1; t <= steps; ++t) {
    for (auto& s : out.strings) s = step(s);
    ExchangeResult r = exchange_interaction(std::move(out.strings), options, t);
    out.strings = std::move(r.strings);
    out.events.insert(out.events.end(), r.events.begin(), r.events.end());
  }
  return out;
}

}  // namespace cadual::strings
