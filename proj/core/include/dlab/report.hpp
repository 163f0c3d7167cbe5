#pragma once

#include <string>
#include <vector>

#include "dlab/energy.hpp"
#include "dlab/lemmas.hpp"
#include "dlab/topology.hpp"

namespace dlab {

/// Settings shared by all commands. Parsed from flags and an optional
/// key=value config file; unknown keys are rejected by the CLI layer.
struct RunConfig {
  std::vector<double> eps_list = {1e-1, 1e-2, 1e-3};
  double gamma = 1.0 / 3.0;
  std::string h_function = "default";  // "default" or "power:p,q"
  double tol_abs = 1e-9;
  double tol_rel = 1e-7;
  std::string out_dir = "out";
  bool write_csv = true;
  bool write_json = true;
  unsigned seed = 12345;
  std::vector<std::string> regions;  // empty = all
  std::string ball = "P,0.3";

  HFunction make_h() const;
  QuadSpec make_quad_spec() const;
  /// Parses "P,0.3" / "O,0.2" / "0,0,1,0.3".
  std::pair<Vec3, double> parse_ball() const;
};

std::string format_double(double v);  // shortest round-trip decimal

/// RFC-4180 CSV with a header row.
void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows);

/// One top-level object {config, results, versions}; `results_json` must be a
/// serialized JSON array.
void write_json_report(const std::string& path, const RunConfig& config,
                       const std::string& results_json);

std::string energy_rows_json(const EnergyTable& table);
std::string lemma_rows_json(const std::vector<LemmaCheck>& checks);
std::string pairing_rows_json(const std::vector<PairingResult>& results);
std::string lemma_table_text(const std::vector<LemmaCheck>& checks);

// Command bodies shared by the CLI and the tests. Exit codes: 0 pass,
// 2 numerical failure, 3 configuration error.
int cmd_energy_table(const RunConfig& config);
int cmd_lemmas(const RunConfig& config);
int cmd_incompressibility(const RunConfig& config);
int cmd_degree(const RunConfig& config);
int cmd_det_pairing(const RunConfig& config);
int cmd_surface(const RunConfig& config);
int cmd_report(const RunConfig& config);

}  // namespace dlab
