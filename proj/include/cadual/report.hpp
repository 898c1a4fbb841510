#pragma once

// Verification reports: a human summary followed by a JSON record list.
// The JSON part carries no clock readings, so identical runs produce
// identical bytes.

#include <string>
#include <vector>

#include <json.hpp>

namespace cadual::report {

using Json = nlohmann::ordered_json;

struct CheckRecord {
  std::string name;
  // The identity or property the check exercises.
  std::string tag;
  double measured = 0.0;
  std::string contract;
  bool pass = false;
};

enum class Format { Human, Machine };

// Separates the human summary from the JSON section in human-format output.
inline constexpr const char* kMachineMarker = "--- machine-readable ---";

class Report {
public:
  explicit Report(std::string command, Json config = Json::object());

  void add(CheckRecord record);
  // measured <= bound
  void add_bound(std::string name, std::string tag, double measured, double bound);
  // measured == 0, for exact-arithmetic checks
  void add_exact(std::string name, std::string tag, double measured);
  void add_flag(std::string name, std::string tag, bool holds, std::string contract);
  void set_data(const std::string& key, Json value);
  void set_runtime(double seconds) { runtime_seconds_ = seconds; }

  const std::string& command() const { return command_; }
  const std::vector<CheckRecord>& checks() const { return checks_; }
  std::size_t passed() const;
  std::size_t failed() const { return checks_.size() - passed(); }
  bool all_passed() const { return failed() == 0; }

  Json machine() const;
  std::string human_summary() const;
  std::string render(Format format) const;

private:
  std::string command_;
  Json config_;
  std::vector<CheckRecord> checks_;
  Json data_ = Json::object();
  double runtime_seconds_ = 0.0;
};

// Writes render(format) to path, or to stdout when path is empty or "-".
void emit_report(const Report& report, const std::string& path, Format format);

// The JSON text of a rendered report (everything after the marker, or the
// whole text if no marker is present).
std::string machine_section(const std::string& rendered);

}  // namespace cadual::report
