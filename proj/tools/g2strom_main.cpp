#include <CLI11.hpp>
#include <iostream>

#include "g2strom/commands.hpp"

namespace {

void add_common_flags(CLI::App* sub, g2strom::RunConfig& cfg) {
  sub->add_option("--tol", cfg.tol, "residual tolerance");
  sub->add_option("--rank-tol", cfg.rank_tol, "relative singular-value threshold for ranks");
  sub->add_option("--seed", cfg.seed, "RNG seed");
  sub->add_option("--cutoff", cfg.cutoff, "Fourier cutoff K");
  sub->add_option("--lie", cfg.lie, "structure algebra: trivial, su2, u1")
      ->check(CLI::IsMember({"trivial", "su2", "u1"}));
  sub->add_option("--alpha-prime", cfg.alpha_prime, "alpha' scale of the pairing");
  sub->add_option("--samples", cfg.samples, "number of random samples");
  sub->add_option("--input", cfg.input, "input file");
  sub->add_option("--output", cfg.output, "write the JSON report here");
  sub->add_flag("--timing", cfg.timing, "include wall time in the JSON report");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification engine for coupled G2 instanton systems on the flat 7-torus"};
  app.require_subcommand(1);
  g2strom::RunConfig cfg;

  CLI::App* verify = app.add_subcommand("verify-algebra", "exterior algebra and G2 projector suite");
  add_common_flags(verify, cfg);

  CLI::App* symbols = app.add_subcommand("symbols", "principal symbol exactness and injectivity");
  add_common_flags(symbols, cfg);

  CLI::App* moduli = app.add_subcommand("moduli", "per-mode cohomology dimensions and flux map");
  add_common_flags(moduli, cfg);
  moduli->add_option("--which", cfg.which,
                     "complex: KS, genKS, metric-only, instanton-only, all");

  CLI::App* torsion = app.add_subcommand("torsion", "torsion classification of a 3-form field");
  add_common_flags(torsion, cfg);
  torsion->add_option("--phi", cfg.phi_input, "dilaton field file");
  torsion->add_option("--theta", cfg.theta_input, "connection potential field file");

  CLI::App* courant = app.add_subcommand("courant", "Courant algebroid axiom residuals");
  add_common_flags(courant, cfg);
  courant->add_option("--perturb-bianchi", cfg.perturb_bianchi,
                      "epsilon sweep violating the Bianchi identity");

  CLI11_PARSE(app, argc, argv);

  for (CLI::App* sub : {verify, symbols, moduli, torsion, courant})
    if (sub->parsed()) cfg.command = sub->get_name();

  g2strom::Report report = g2strom::run_command(cfg);
  std::cout << g2strom::finalize_report(cfg, report);
  if (cfg.timing) std::cout << "wall time: " << report.wall_time_ms << " ms\n";
  return report.exit_code();
}
