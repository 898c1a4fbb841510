#pragma once

// Verification suites and simulations behind the command-line driver. Each
// returns a Report whose checks are named "<module>.<property>".

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cadual/ca_engine.hpp"
#include "cadual/fermion_ca.hpp"
#include "cadual/report.hpp"
#include "cadual/string_ca.hpp"

namespace cadual::suites {

struct SuiteConfig {
  std::optional<std::int64_t> window;
  std::optional<std::size_t> sites;
  std::int64_t steps = 100;
  std::optional<std::int64_t> margin;
  double tolerance = 1e-10;
  std::size_t chain = 8;
  double alpha_prime = 1.0;
  std::uint64_t seed = 1;
  double dt = 1.0;
  std::string input;

  report::Json echo() const;
};

report::Report verify_pq(const SuiteConfig& config);
report::Report verify_field(const SuiteConfig& config);
report::Report verify_all(const SuiteConfig& config);

// Names of every check verify_all emits, in emission order.
const std::vector<std::string>& verify_all_manifest();

struct StringInput {
  std::vector<strings::StringConfiguration> strings;
  strings::ExchangeOptions options;
};
// {"lattice": {"length", "step", "transverse_dims", "closed"},
//  "strings": [{"previous": [[...]], "current": [[...]], "orientation"}],
//  "pair_exchange": bool, "self_exchange": bool}
// A string may override "length" and "closed" individually.
StringInput parse_string_input(const report::Json& json);
// One random closed string, 3 transverse dimensions, length from `sites` (default 16).
StringInput random_string_input(const SuiteConfig& config);

// Trajectory rows: step,string,mu,X(0),...,X(L-1)
report::Report simulate_string(const SuiteConfig& config, const StringInput& input,
                               std::ostream* trajectory = nullptr);

// {"closed": bool, "previous": [[...]], "current": [[...]]}
fermion::BooleanField parse_boolean_input(const report::Json& json);
// A random factorizable ring, one component, length from `sites` (default 32).
fermion::BooleanField random_boolean_input(const SuiteConfig& config);

// Trajectory rows: step,mu,s(0),...,s(L-1)
report::Report simulate_fermion(const SuiteConfig& config, const fermion::BooleanField& field,
                                std::ostream* trajectory = nullptr);

// {"rule": [...]} | {"state_count", "pairs": [[from, to], ...]} |
// {"cells": {"cell_count", "alphabet_size", "radius", "table"}}, optional "dt".
ca::AutomatonSpec parse_rule_input(const report::Json& json, double default_dt);

report::Report extract_hamiltonian(const SuiteConfig& config, const ca::AutomatonSpec& spec);

}  // namespace cadual::suites
