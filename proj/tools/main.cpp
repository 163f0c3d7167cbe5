// Command-line laboratory for the harmonic-dipole deformation and its
// bi-Lipschitz regularizations: energy tables, estimate ledgers, degree
// fields, weak pairings and the acceptance report.

#include <CLI11.hpp>
#include <cstdio>

#include "dlab/acceptance.hpp"
#include "dlab/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"dipolelab - numerical verification of the harmonic-dipole construction"};
  app.set_config("--config", "", "key=value configuration file (flags override)");

  dlab::RunConfig config;
  std::vector<std::string> formats = {"csv", "json"};
  app.add_option("--eps", config.eps_list, "regularization parameters (decreasing)")
      ->capture_default_str();
  app.add_option("--gamma", config.gamma, "radial exponent in (0, 1/3]")
      ->capture_default_str();
  app.add_option("--h-function", config.h_function,
                 "volumetric penalty: 'default' or 'power:p,q'")
      ->capture_default_str();
  app.add_option("--tol-abs", config.tol_abs, "quadrature absolute tolerance")
      ->capture_default_str();
  app.add_option("--tol-rel", config.tol_rel, "quadrature relative tolerance")
      ->capture_default_str();
  app.add_option("--out", config.out_dir, "output directory")->capture_default_str();
  app.add_option("--format", formats, "output formats: csv, json")
      ->capture_default_str();
  app.add_option("--seed", config.seed, "seed for sampling operations")
      ->capture_default_str();
  app.add_option("--regions", config.regions, "region filter (e.g. a_prime,e_prime)")
      ->delimiter(',');
  app.add_option("--ball", config.ball, "degree ball, e.g. P,0.3 or O,0.2")
      ->capture_default_str();

  app.require_subcommand(1);
  auto* energy = app.add_subcommand("energy-table", "per-region energy convergence table");
  auto* lemmas = app.add_subcommand("lemmas", "estimate ledger (JSON array + table)");
  auto* incomp = app.add_subcommand("incompressibility", "det = 1 verification");
  auto* degree = app.add_subcommand("degree", "degree / cavity-indicator grid");
  auto* detp = app.add_subcommand("det-pairing", "weak determinant pairing vs oracle");
  auto* surf = app.add_subcommand("surface", "created-surface pairing vs oracle");
  auto* report = app.add_subcommand("report", "full acceptance report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  config.write_csv = false;
  config.write_json = false;
  for (const auto& f : formats) {
    if (f == "csv") config.write_csv = true;
    else if (f == "json") config.write_json = true;
    else {
      std::fprintf(stderr, "unknown format: %s\n", f.c_str());
      return 3;
    }
  }
  if (!(config.gamma > 0.0) || config.gamma > 1.0 / 3.0 + 1e-12) {
    std::fprintf(stderr, "gamma must lie in (0, 1/3]\n");
    return 3;
  }

  try {
    if (energy->parsed()) return dlab::cmd_energy_table(config);
    if (lemmas->parsed()) return dlab::cmd_lemmas(config);
    if (incomp->parsed()) return dlab::cmd_incompressibility(config);
    if (degree->parsed()) return dlab::cmd_degree(config);
    if (detp->parsed()) return dlab::cmd_det_pairing(config);
    if (surf->parsed()) return dlab::cmd_surface(config);
    if (report->parsed()) return dlab::cmd_report(config);
  } catch (const dlab::HypothesisViolated& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 3;
  } catch (const dlab::OutOfDomain& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  }
  return 3;
}
