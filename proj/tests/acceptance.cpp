// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cadual/ca_engine.hpp"
#include "cadual/fermion_ca.hpp"
#include "cadual/field_lattice.hpp"
#include "cadual/pq_map.hpp"
#include "cadual/random.hpp"
#include "cadual/report.hpp"
#include "cadual/string_ca.hpp"

using namespace cadual;
using linalg::Complex;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

// ---------------------------------------------------------------- 1, 2, 3

Outcome eta_identity() {
  double worst = 0.0;
  for (std::int64_t n : {4, 16, 64}) worst = std::max(worst, pq::eta_commutator_check(pq::TruncationWindow(n)));
  return {worst <= 1e-12, "max deviation " + fmt(worst)};
}

Outcome fourier_quadrature() {
  using boost::math::quadrature::gauss_kronrod;
  double worst = 0.0;
  for (std::int64_t n = -64; n <= 64; ++n) {
    const double w = linalg::kTwoPi * static_cast<double>(n);
    double re = 0.0, im = 0.0;
    const int pieces = 2 * static_cast<int>(std::abs(n)) + 2;
    for (int k = 0; k < pieces; ++k) {
      const double a = -0.5 + static_cast<double>(k) / pieces, b = -0.5 + static_cast<double>(k + 1) / pieces;
      re += gauss_kronrod<double, 61>::integrate([w](double x) { return x * std::cos(w * x); }, a, b, 0, 0);
      im += gauss_kronrod<double, 61>::integrate([w](double x) { return -x * std::sin(w * x); }, a, b, 0, 0);
    }
    worst = std::max(worst, std::abs(pq::eta_fourier_coefficient(n) - Complex(re, im)));
  }
  return {worst <= 1e-10, "max |alpha_N - quadrature| " + fmt(worst)};
}

Outcome qp_decay() {
  std::vector<double> d;
  for (std::int64_t n : {4, 8, 16}) d.push_back(pq::qp_commutator_defect(pq::PQLattice::square(n), n / 2).defect);
  bool monotone = true;
  for (std::size_t i = 1; i < d.size(); ++i) monotone = monotone && d[i] <= d[i - 1];

  std::string baseline_note;
  const std::filesystem::path baseline = "qp_defect_baseline_N16.txt";
  if (std::filesystem::exists(baseline)) {
    double prior = 0.0;
    std::ifstream(baseline) >> prior;
    const bool same = std::abs(prior - d[2]) <= 1e-12;
    baseline_note = same ? ", matches baseline" : ", differs from baseline " + fmt(prior);
    monotone = monotone && same;
  } else {
    std::ofstream(baseline) << std::setprecision(17) << d[2] << '\n';
    baseline_note = ", baseline recorded";
  }
  return {monotone, "defects N=4,8,16: " + fmt(d[0]) + ", " + fmt(d[1]) + ", " + fmt(d[2]) + baseline_note};
}

// ---------------------------------------------------------------- 4, 5

Outcome hamiltonian_round_trip() {
  Rng rng(2024);
  double recon = 0.0, herm = 0.0;
  bool branch = true;
  for (int k = 0; k < 20; ++k) {
    const auto n = static_cast<std::size_t>(rng.between(1, 256));
    const double dt = k % 4 == 3 ? 0.5 : 1.0;
    std::vector<std::size_t> rule(n);
    std::iota(rule.begin(), rule.end(), std::size_t{0});
    rng.shuffle(rule);
    const auto u = ca::build_evolution(ca::AutomatonSpec::from_rule(rule, dt));
    const auto h = ca::extract_hamiltonian(u, dt);
    recon = std::max(recon, linalg::max_abs_diff(linalg::unitary_exp(h, dt), u.matrix()));
    herm = std::max(herm, linalg::hermiticity_defect(h));
    const auto eig = linalg::hermitian_eigenvalues(h);
    branch = branch && eig.front() >= -1e-12 && eig.back() < linalg::kTwoPi / dt;
  }
  return {recon <= 1e-10 && herm <= 1e-12 && branch,
          "reconstruction " + fmt(recon) + ", hermiticity " + fmt(herm) + (branch ? "" : ", spectrum out of range")};
}

Outcome lattice_commutators() {
  const auto r = field::verify_lattice_commutators(3, pq::TruncationWindow(2));
  const double nn = std::max(r.left_neighbor.max_deviation, r.right_neighbor.max_deviation);
  const bool ok = r.cross.max_deviation == 0.0 && r.distant.max_deviation == 0.0 && r.same_site.max_deviation == 0.0 &&
                  nn <= 1e-12 && r.cross.pairs == 9;
  return {ok, "neighbor " + fmt(nn) + ", cross " + fmt(r.cross.max_deviation) + ", same-site " +
                  fmt(r.same_site.max_deviation)};
}

// ---------------------------------------------------------------- 6, 7

std::vector<std::vector<strings::Coord>> sorted_rows(std::vector<std::vector<strings::Coord>> rows) {
  for (auto& r : rows) std::sort(r.begin(), r.end());
  return rows;
}

Outcome string_exactness() {
  Rng rng(606);
  strings::Coord residual = 0;
  bool movers = true, reverse = true;
  for (int k = 0; k < 50; ++k) {
    const auto len = static_cast<std::size_t>(rng.between(3, 64));
    const strings::WorldSheetLattice lat{len, 1, 3, true};
    strings::Slice prev(3, std::vector<strings::Coord>(len)), cur = prev;
    for (std::size_t mu = 0; mu < 3; ++mu) {
      for (std::size_t s = 0; s < len; ++s) {
        prev[mu][s] = rng.between(-1000, 1000);
        cur[mu][s] = rng.between(-1000, 1000);
      }
    }
    const strings::StringConfiguration start(lat, prev, cur);
    const auto inc = strings::mover_increments(start);
    const auto left = sorted_rows(inc.left), right = sorted_rows(inc.right);
    auto c = start;
    for (int t = 0; t < 1000; ++t) {
      const auto next = strings::step(c);
      residual = std::max(residual, strings::wave_residual(lat, c.previous(), c.current(), next.current()));
      c = next;
      const auto now = strings::mover_increments(c);
      movers = movers && sorted_rows(now.left) == left && sorted_rows(now.right) == right;
    }
    for (int t = 0; t < 1000; ++t) c = strings::step_backward(c);
    reverse = reverse && c == start;
  }
  return {residual == 0 && movers && reverse, "residual " + std::to_string(residual) +
                                                  (movers ? ", movers kept" : ", movers changed") +
                                                  (reverse ? ", reversed exactly" : ", reversal failed")};
}

using PointBag = std::map<std::vector<strings::Coord>, int>;

PointBag point_bag(const std::vector<strings::StringConfiguration>& v) {
  PointBag bag;
  for (const auto& c : v) {
    for (std::size_t s = 0; s < c.length(); ++s) {
      std::vector<strings::Coord> key{0};
      for (std::size_t mu = 0; mu < c.lattice().transverse_dims; ++mu) key.push_back(c.previous()[mu][s]);
      ++bag[key];
      key = {1};
      for (std::size_t mu = 0; mu < c.lattice().transverse_dims; ++mu) key.push_back(c.current()[mu][s]);
      ++bag[key];
    }
  }
  return bag;
}

strings::StringConfiguration path(const std::vector<std::pair<strings::Coord, strings::Coord>>& pts, bool closed,
                                  int orientation = 1) {
  strings::Slice s(2, std::vector<strings::Coord>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k) {
    s[0][k] = pts[k].first;
    s[1][k] = pts[k].second;
  }
  return strings::StringConfiguration::at_rest({pts.size(), 1, 2, closed}, s, orientation);
}

Outcome exchange_conservation() {
  const auto h = path({{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}}, false);
  const auto v = path({{2, -2}, {2, -1}, {2, 0}, {2, 1}, {2, 2}}, false);
  const auto vr = path({{2, -2}, {2, -1}, {2, 0}, {2, 1}, {2, 2}}, false, -1);
  const auto d = path({{-1, -1}, {0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}}, false);
  const auto loop_a = path({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, true);
  const auto loop_b = path({{1, 1}, {2, 1}, {2, 2}, {1, 2}}, true);
  const auto tail = path({{1, 2}, {1, 3}, {1, 4}}, false);

  const std::vector<std::vector<strings::StringConfiguration>> cases{
      {h, v}, {h, vr}, {h, v, d}, {loop_a, loop_b}, {loop_b, tail}};
  std::size_t events = 0;
  bool conserved = true, involution = true;
  for (const auto& in : cases) {
    const auto r = strings::exchange_interaction(in);
    events += r.events.size();
    conserved = conserved && point_bag(r.strings) == point_bag(in);
  }
  // Double swap on open pairs restores the original connectivity.
  for (const auto& in : {std::vector{h, v}, std::vector{h, d}}) {
    const auto once = strings::exchange_interaction(in);
    const auto twice = strings::exchange_interaction(once.strings);
    involution = involution && once.events.size() == 1 && twice.strings == in;
  }
  return {conserved && involution && events >= cases.size(),
          std::to_string(events) + " exchanges" + (conserved ? ", multisets conserved" : ", multisets changed") +
              (involution ? ", double swap restores" : ", double swap failed")};
}

// ---------------------------------------------------------------- 8, 9, 10

using fermion::Spin;

fermion::BooleanField from_movers(const std::vector<Spin>& l, const std::vector<Spin>& r) {
  const std::size_t n = l.size();
  std::vector<Spin> prev(n), cur(n);
  for (std::size_t x = 0; x < n; ++x) {
    cur[x] = static_cast<Spin>(l[x] * r[x]);
    prev[x] = static_cast<Spin>(l[(x + n - 1) % n] * r[(x + 1) % n]);
  }
  return fermion::BooleanField({prev}, {cur});
}

std::vector<Spin> spins(std::uint64_t bits, std::size_t n) {
  std::vector<Spin> s(n);
  for (std::size_t x = 0; x < n; ++x) s[x] = (bits >> x) & 1U ? Spin{-1} : Spin{1};
  return s;
}

// Movers of the initial slice recompose every later slice, and the field
// is recovered by stepping back.
bool preserved(const fermion::BooleanField& f0, std::int64_t steps) {
  const auto m = fermion::split_boolean_movers(f0);
  auto f = f0;
  for (std::int64_t t = 0; t < steps; ++t) {
    f = fermion::boolean_step(f);
    if (m.slice_at(f.time()) != f.current() || !fermion::factorizable(f)) return false;
  }
  for (std::int64_t t = 0; t < steps; ++t) f = fermion::boolean_step_backward(f);
  return f == f0;
}

Outcome boolean_factorization() {
  std::size_t checked = 0;
  bool ok = true;
  for (std::size_t n = 3; n <= 6; ++n) {
    for (std::uint64_t lb = 0; lb < (1U << n); ++lb) {
      for (std::uint64_t rb = 0; rb < (1U << n); ++rb) {
        ok = ok && preserved(from_movers(spins(lb, n), spins(rb, n)), static_cast<std::int64_t>(2 * n));
        ++checked;
      }
    }
  }
  Rng rng(808);
  for (int k = 0; k < 200; ++k) {
    ok = ok && preserved(from_movers(spins(rng.next(), 32), spins(rng.next(), 32)), 200);
    ++checked;
  }
  return {ok, std::to_string(checked) + " factorized fields" + (ok ? ", all preserved and reversed" : ", mismatch")};
}

Outcome jordan_wigner() {
  std::int64_t exact = 0;
  std::size_t parity = 0;
  double dense = 0.0;
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto chain = fermion::jordan_wigner(n);
    const auto r = fermion::verify_anticommutators(chain);
    exact = std::max(exact, r.max_deviation);
    parity += r.parity_violations;
    dense = std::max(dense, fermion::dense_anticommutator_defect(chain));
  }
  return {exact == 0 && parity == 0 && dense == 0.0,
          "integer deviation " + std::to_string(exact) + ", dense " + fmt(dense) + ", parity violations " +
              std::to_string(parity)};
}

Outcome lattice_constant() {
  const double pi = std::numbers::pi;
  const std::pair<double, double> cases[] = {{1.0, 2.0 * pi}, {1.0 / (4.0 * pi * pi), 1.0}, {4.0, 4.0 * pi}};
  double worst = 0.0;
  for (const auto& [alpha, expected] : cases) {
    worst = std::max(worst, std::abs(strings::spacetime_lattice_constant(alpha) - expected));
  }
  return {worst <= 1e-14, "max deviation " + fmt(worst)};
}

// ---------------------------------------------------------------- 11

std::string run_cli(const std::string& args, const std::string& out) {
  const std::string cmd = std::string(CADUAL_CLI_PATH) + " " + args + " --output " + out + " > /dev/null 2>&1";
  if (std::system(cmd.c_str()) == -1) return {};
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const auto a = run_cli("verify-all --seed 11", "acceptance_verify_all_a.txt");
  const auto b = run_cli("verify-all --seed 11", "acceptance_verify_all_b.txt");
  const auto ma = report::machine_section(a), mb = report::machine_section(b);
  const bool ok = !ma.empty() && ma == mb && a.find(report::kMachineMarker) != std::string::npos;
  return {ok, std::to_string(ma.size()) + " bytes" + (ok ? ", identical" : ", differ or missing")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"eta commutator identity", eta_identity},
      {"eta Fourier coefficients", fourier_quadrature},
      {"[q,p] truncation decay", qp_decay},
      {"CA Hamiltonian round trip", hamiltonian_round_trip},
      {"lattice mover commutators", lattice_commutators},
      {"string automaton exactness", string_exactness},
      {"exchange conservation", exchange_conservation},
      {"Boolean factorization", boolean_factorization},
      {"Jordan-Wigner algebra", jordan_wigner},
      {"spacetime lattice constant", lattice_constant},
      {"verify-all determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << std::setw(2) << i + 1 << "  " << criteria[i].first << "  ("
              << o.detail << "; " << std::fixed << std::setprecision(2) << secs << " s)" << std::defaultfloat
              << std::endl;
  }
  std::cout << criteria.size() - static_cast<std::size_t>(failures) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
