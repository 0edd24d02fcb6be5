#include "g2strom/report.hpp"

#include <sstream>

namespace g2strom {

CheckEntry CheckEntry::pass_fail(const std::string& name, bool ok, nlohmann::json data) {
  return CheckEntry{name, ok ? "PASS" : "FAIL", std::move(data)};
}

CheckEntry CheckEntry::error(const std::string& name, const std::string& message) {
  return CheckEntry{name, "ERROR", nlohmann::json{{"message", message}}};
}

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (c.status != "PASS") return false;
  return true;
}

bool Report::any_error() const {
  for (const auto& c : checks)
    if (c.status == "ERROR") return true;
  return false;
}

int Report::exit_code() const {
  if (any_error()) return 2;
  return all_pass() ? 0 : 1;
}

nlohmann::json Report::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["version"] = version;
  j["config"] = config;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks)
    arr.push_back(nlohmann::json{{"name", c.name}, {"status", c.status}, {"data", c.data}});
  j["checks"] = arr;
  if (include_timing) j["wall_time_ms"] = wall_time_ms;
  return j;
}

std::string Report::to_text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << "[" << c.status << "] " << c.name;
    if (c.status == "ERROR" && c.data.contains("message"))
      os << ": " << c.data["message"].get<std::string>();
    os << "\n";
  }
  os << (all_pass() ? "all checks passed" : "FAILURES present") << "\n";
  return os.str();
}

} // namespace g2strom
