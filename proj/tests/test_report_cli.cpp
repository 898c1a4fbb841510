#include <gtest/gtest.h>

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>

#include "cadual/report.hpp"
#include "cadual/suites.hpp"

using namespace cadual;
using report::Json;

namespace {

namespace fs = std::filesystem;

struct Run {
  int exit_code = -1;
  std::string out;
};

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "cadual_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run cli(const std::string& args, const std::string& tag) {
  const auto out = scratch(tag + ".out");
  const std::string cmd = std::string(CADUAL_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

fs::path write_input(const std::string& name, const Json& j) {
  const auto p = scratch(name);
  std::ofstream(p) << j.dump();
  return p;
}

}  // namespace

TEST(Report, EmptyReportPasses) {
  const report::Report r("noop");
  EXPECT_TRUE(r.all_passed());
  const auto m = r.machine();
  EXPECT_EQ(m["command"], "noop");
  EXPECT_EQ(m["summary"]["total"], 0);
  EXPECT_FALSE(m.contains("data"));
}

TEST(Report, RecordsAndContracts) {
  report::Report r("demo", Json{{"steps", 3}});
  r.add_bound("a.bound", "x", 0.5, 1.0);
  r.add_bound("a.over", "x", 2.0, 1.0);
  r.add_exact("a.exact", "y", 0.0);
  r.add_flag("a.flag", "z", false, "holds");
  EXPECT_EQ(r.passed(), 2U);
  EXPECT_EQ(r.failed(), 2U);
  EXPECT_FALSE(r.all_passed());
  const auto m = r.machine();
  EXPECT_EQ(m["checks"].size(), 4U);
  EXPECT_EQ(m["checks"][1]["name"], "a.over");
  EXPECT_EQ(m["checks"][1]["pass"], false);
  EXPECT_EQ(m["config"]["steps"], 3);
}

TEST(Report, MachineSectionSplitsRenderedText) {
  report::Report r("demo");
  r.add_exact("a", "t", 0.0);
  r.set_runtime(1.25);
  const auto human = r.render(report::Format::Human);
  EXPECT_NE(human.find(report::kMachineMarker), std::string::npos);
  EXPECT_EQ(Json::parse(report::machine_section(human)), r.machine());
  const auto machine = r.render(report::Format::Machine);
  EXPECT_EQ(report::machine_section(machine), machine);
  EXPECT_EQ(machine.find("1.25"), std::string::npos);
}

TEST(Report, UnwritablePathThrows) {
  const report::Report r("demo");
  EXPECT_THROW(report::emit_report(r, "/nonexistent-dir/x/report.json", report::Format::Machine), InvalidInput);
}

TEST(Suites, VerifyAllMatchesManifest) {
  const auto r = suites::verify_all({});
  const auto& manifest = suites::verify_all_manifest();
  ASSERT_EQ(r.checks().size(), manifest.size());
  for (std::size_t i = 0; i < manifest.size(); ++i) EXPECT_EQ(r.checks()[i].name, manifest[i]);
}

TEST(Suites, RuleInputForms) {
  EXPECT_EQ(suites::parse_rule_input(Json{{"rule", {1, 2, 0}}}, 1.0).step_rule(), (std::vector<std::size_t>{1, 2, 0}));
  const auto pairs = suites::parse_rule_input(Json{{"state_count", 2}, {"pairs", {{0, 1}, {1, 0}}}, {"dt", 0.5}}, 1.0);
  EXPECT_EQ(pairs.step_rule(), (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(pairs.dt(), 0.5);
  EXPECT_THROW(suites::parse_rule_input(Json{{"nothing", 1}}, 1.0), InvalidInput);
}

TEST(Cli, BadFlagExitsTwo) {
  EXPECT_EQ(cli("verify-pq --no-such-flag", "badflag").exit_code, 2);
  EXPECT_EQ(cli("verify-pq --window abc", "badvalue").exit_code, 2);
  EXPECT_EQ(cli("extract-hamiltonian", "noinput").exit_code, 2);
}

TEST(Cli, FourCycleHamiltonian) {
  const auto in = write_input("cycle.json", Json{{"rule", {1, 2, 3, 0}}});
  const auto r = cli("extract-hamiltonian --input " + in.string() + " --format machine", "cycle");
  EXPECT_EQ(r.exit_code, 0);
  const auto j = Json::parse(r.out);
  const auto ev = j["data"]["eigenvalues"];
  ASSERT_EQ(ev.size(), 4U);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(ev[k].get<double>(), k * std::numbers::pi / 2, 1e-12);
}

TEST(Cli, NonBijectiveRuleExitsTwo) {
  const auto in = write_input("collide.json", Json{{"rule", {1, 1, 0}}});
  EXPECT_EQ(cli("extract-hamiltonian --input " + in.string(), "collide").exit_code, 2);
}

TEST(Cli, ConstantStringTrajectoryIsFlat) {
  const Json input{{"lattice", {{"length", 5}, {"step", 1}, {"transverse_dims", 1}, {"closed", true}}},
                   {"strings", {{{"previous", {{2, 2, 2, 2, 2}}}, {"current", {{2, 2, 2, 2, 2}}}}}}};
  const auto in = write_input("flat.json", input);
  const auto traj = scratch("flat.csv");
  const auto r = cli("simulate-string --steps 6 --input " + in.string() + " --trajectory " + traj.string() +
                         " --format machine",
                     "flat");
  EXPECT_EQ(r.exit_code, 0);
  std::ifstream csv(traj);
  std::string line;
  int rows = 0;
  while (std::getline(csv, line)) {
    if (line.empty() || !std::isdigit(static_cast<unsigned char>(line[0]))) continue;
    EXPECT_NE(line.find(",2,2,2,2,2"), std::string::npos) << line;
    ++rows;
  }
  EXPECT_GE(rows, 6);
}

TEST(Cli, VerifyPqReportsEtaIdentity) {
  const auto r = cli("verify-pq --window 16 --margin 8 --format machine", "pq");
  const auto j = Json::parse(r.out);
  bool seen = false;
  for (const auto& c : j["checks"]) {
    if (c["name"] == "pq.eta_commutator") {
      seen = true;
      EXPECT_TRUE(c["pass"].get<bool>());
    }
  }
  EXPECT_TRUE(seen);
  EXPECT_EQ(r.exit_code, j["summary"]["failed"].get<int>() == 0 ? 0 : 1);
}

TEST(Cli, MachineOutputIsReproducible) {
  const auto a = cli("simulate-fermion --seed 9 --steps 20", "repro_a");
  const auto b = cli("simulate-fermion --seed 9 --steps 20", "repro_b");
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(report::machine_section(a.out), report::machine_section(b.out));
  EXPECT_NE(a.out.find(report::kMachineMarker), std::string::npos);
}
