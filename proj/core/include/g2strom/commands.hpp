#ifndef G2STROM_COMMANDS_HPP
#define G2STROM_COMMANDS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "g2strom/report.hpp"

namespace g2strom {

/// Configuration shared by every CLI subcommand; all verification runs are
/// reproducible from these fields alone.
struct RunConfig {
  std::string command;
  double tol = 1e-10;
  double rank_tol = 1e-9;
  uint64_t seed = 42;
  int cutoff = 1;
  std::string lie = "su2";
  double alpha_prime = 1.0;
  int samples = 1000;
  std::string input;
  std::string phi_input;
  std::string theta_input;
  std::string output;
  std::vector<double> perturb_bianchi;
  std::string which = "all"; // moduli: KS | genKS | metric-only | instanton-only | all
  bool timing = false;

  void validate() const; // tolerances > 0, cutoff >= 0
  nlohmann::json to_json() const;
};

Report cmd_verify_algebra(const RunConfig& cfg);
Report cmd_symbols(const RunConfig& cfg);
Report cmd_moduli(const RunConfig& cfg);
Report cmd_torsion(const RunConfig& cfg);
Report cmd_courant(const RunConfig& cfg);

/// Dispatch on cfg.command; exceptions become ERROR entries (exit code 2).
Report run_command(const RunConfig& cfg);

/// Write the JSON report to cfg.output when set; always returns the text
/// summary for the console.
std::string finalize_report(const RunConfig& cfg, Report& report);

} // namespace g2strom

#endif
