#ifndef G2STROM_REPORT_HPP
#define G2STROM_REPORT_HPP

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace g2strom {

/// One verification entry: PASS, FAIL, or ERROR plus a numeric payload.
struct CheckEntry {
  std::string name;
  std::string status; // "PASS" | "FAIL" | "ERROR"
  nlohmann::json data;

  static CheckEntry pass_fail(const std::string& name, bool ok, nlohmann::json data);
  static CheckEntry error(const std::string& name, const std::string& message);
};

/// Machine-readable run report. Serialization is deterministic for a fixed
/// config and seed (keys sorted, shortest round-trip doubles); the wall
/// time is emitted only on request so that default reports are
/// byte-reproducible.
struct Report {
  std::string command;
  nlohmann::json config;
  std::vector<CheckEntry> checks;
  double wall_time_ms = 0.0;
  bool include_timing = false;
  std::string version = "0.1.0";

  void add(CheckEntry entry) { checks.push_back(std::move(entry)); }
  bool all_pass() const;
  bool any_error() const;
  /// 0 all PASS, 1 any FAIL, 2 any ERROR.
  int exit_code() const;

  nlohmann::json to_json() const;
  std::string to_text() const; // one line per check for the console
};

} // namespace g2strom

#endif
