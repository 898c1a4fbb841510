#include "cadual/report.hpp"

#include <cerrno>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "cadual/errors.hpp"

namespace cadual::report {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string format_value(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

Report::Report(std::string command, Json config) : command_(std::move(command)), config_(std::move(config)) {}

void Report::add(CheckRecord record) { checks_.push_back(std::move(record)); }

void Report::add_bound(std::string name, std::string tag, double measured, double bound) {
  std::ostringstream contract;
  contract << "<= " << std::setprecision(3) << bound;
  add({std::move(name), std::move(tag), measured, contract.str(), measured <= bound});
}

void Report::add_exact(std::string name, std::string tag, double measured) {
  add({std::move(name), std::move(tag), measured, "== 0 (exact)", measured == 0.0});
}

void Report::add_flag(std::string name, std::string tag, bool holds, std::string contract) {
  add({std::move(name), std::move(tag), holds ? 1.0 : 0.0, std::move(contract), holds});
}

void Report::set_data(const std::string& key, Json value) { data_[key] = std::move(value); }

std::size_t Report::passed() const {
  std::size_t n = 0;
  for (const auto& c : checks_) n += c.pass ? 1 : 0;
  return n;
}

Json Report::machine() const {
  Json records = Json::array();
  for (const auto& c : checks_) {
    records.push_back(Json{{"name", c.name},
                           {"tag", c.tag},
                           {"measured", c.measured},
                           {"contract", c.contract},
                           {"pass", c.pass}});
  }
  Json out;
  out["command"] = command_;
  out["version"] = kVersion;
  out["config"] = config_;
  out["checks"] = std::move(records);
  out["summary"] = Json{{"total", checks_.size()}, {"passed", passed()}, {"failed", failed()}};
  if (!data_.empty()) out["data"] = data_;
  return out;
}

std::string Report::human_summary() const {
  std::ostringstream os;
  os << "cadual " << kVersion << "  " << command_ << "\n";
  os << "generated " << utc_timestamp() << ", runtime " << std::fixed << std::setprecision(3)
     << runtime_seconds_ << " s\n";
  os.unsetf(std::ios::floatfield);
  std::size_t width = 4;
  for (const auto& c : checks_) width = std::max(width, c.name.size());
  for (const auto& c : checks_) {
    os << (c.pass ? "  PASS  " : "  FAIL  ") << std::left << std::setw(static_cast<int>(width)) << c.name
       << "  " << format_value(c.measured) << "  (" << c.contract << ")\n";
  }
  os << passed() << "/" << checks_.size() << " checks passed\n";
  return os.str();
}

std::string Report::render(Format format) const {
  const std::string json = machine().dump(2) + "\n";
  if (format == Format::Machine) return json;
  return human_summary() + kMachineMarker + "\n" + json;
}

void emit_report(const Report& report, const std::string& path, Format format) {
  const std::string text = report.render(format);
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open report file " + path + ": " + std::strerror(errno));
  out << text;
  if (!out) throw InvalidInput("failed writing report file " + path + ": " + std::strerror(errno));
}

std::string machine_section(const std::string& rendered) {
  const std::string marker = std::string(kMachineMarker) + "\n";
  const auto pos = rendered.find(marker);
  return pos == std::string::npos ? rendered : rendered.substr(pos + marker.size());
}

}  // namespace cadual::report
