// cadual: verification suites and simulations for the integer automata.
//
//   cadual verify-all --seed 7 --format machine --output report.json
//   cadual simulate-string --input strings.json --steps 100 --trajectory traj.csv
//   cadual extract-hamiltonian --input rule.json
//
// Exit status: 0 all checks pass, 1 some check failed, 2 usage or input error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>

#include <CLI11.hpp>

#include "cadual/errors.hpp"
#include "cadual/report.hpp"
#include "cadual/suites.hpp"

namespace {

using cadual::report::Format;
using cadual::report::Json;
using cadual::suites::SuiteConfig;

struct Options {
  SuiteConfig config;
  std::int64_t window = 0;
  std::size_t sites = 0;
  std::int64_t margin = 0;
  std::string output;
  std::string trajectory;
  Format format = Format::Human;
};

void add_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--window", o.window, "Truncation window N (integers -N..N)")->check(CLI::PositiveNumber);
  cmd->add_option("--sites", o.sites, "Lattice sites or string length")->check(CLI::PositiveNumber);
  cmd->add_option("--steps", o.config.steps, "Time steps")->check(CLI::NonNegativeNumber);
  cmd->add_option("--margin", o.margin, "Interior margin for commutator defects")->check(CLI::NonNegativeNumber);
  cmd->add_option("--tolerance", o.config.tolerance, "Numerical tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--chain", o.config.chain, "Fermion chain length (1..12)")->check(CLI::Range(1, 12));
  cmd->add_option("--alpha-prime", o.config.alpha_prime, "String slope alpha'")->check(CLI::PositiveNumber);
  cmd->add_option("--dt", o.config.dt, "Automaton time step")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.config.seed, "Seed for generated test states");
  cmd->add_option("--input", o.config.input, "JSON input (rule table, strings or Boolean field)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--output", o.output, "Report path (default stdout)");
  cmd->add_option("--trajectory", o.trajectory, "Trajectory table path (simulations)");
  const std::map<std::string, Format> formats{{"human", Format::Human}, {"machine", Format::Machine}};
  cmd->add_option("--format", o.format, "Report format: human or machine")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cadual::InvalidInput("cannot open input file " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw cadual::InvalidInput("input " + path + " is not valid JSON: " + e.what());
  }
}

cadual::report::Report dispatch(const std::string& name, const Options& o) {
  namespace s = cadual::suites;
  const SuiteConfig& c = o.config;
  std::unique_ptr<std::ofstream> traj;
  if (!o.trajectory.empty()) {
    traj = std::make_unique<std::ofstream>(o.trajectory);
    if (!*traj) throw cadual::InvalidInput("cannot open trajectory file " + o.trajectory);
  }
  if (name == "verify-pq") return s::verify_pq(c);
  if (name == "verify-field") return s::verify_field(c);
  if (name == "verify-all") return s::verify_all(c);
  if (name == "simulate-string") {
    const auto in = c.input.empty() ? s::random_string_input(c) : s::parse_string_input(read_json(c.input));
    return s::simulate_string(c, in, traj.get());
  }
  if (name == "simulate-fermion") {
    const auto in = c.input.empty() ? s::random_boolean_input(c) : s::parse_boolean_input(read_json(c.input));
    return s::simulate_fermion(c, in, traj.get());
  }
  if (c.input.empty()) throw cadual::InvalidInput("extract-hamiltonian needs --input with a rule table");
  return s::extract_hamiltonian(c, s::parse_rule_input(read_json(c.input), c.dt));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integer automata, their quantum operators and exact verification suites"};
  app.require_subcommand(1);
  Options options;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"verify-pq", "Integer/bounded operator identities on truncated windows"},
      {"verify-field", "Lattice field movers and operator commutators"},
      {"simulate-string", "Evolve integer strings with arm exchange"},
      {"simulate-fermion", "Evolve a Boolean field; Jordan-Wigner algebra"},
      {"extract-hamiltonian", "Hamiltonian of a reversible rule table"},
      {"verify-all", "Every module's invariant checks"},
  };
  for (const auto& [name, help] : commands) add_options(app.add_subcommand(name, help), options);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--window") > 0) options.config.window = options.window;
  if (sub->count("--sites") > 0) options.config.sites = options.sites;
  if (sub->count("--margin") > 0) options.config.margin = options.margin;

  try {
    const auto start = std::chrono::steady_clock::now();
    auto report = dispatch(name, options);
    report.set_runtime(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    cadual::report::emit_report(report, options.output, options.format);
    if (!options.output.empty() && options.format == Format::Human) std::cout << report.human_summary();
    return report.all_passed() ? 0 : 1;
  } catch (const cadual::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
