#include "dlab/report.hpp"

#include <cinttypes>
#include <cstdarg>
#include <map>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dlab/acceptance.hpp"

namespace dlab {

using ordered_json = nlohmann::ordered_json;

HFunction RunConfig::make_h() const {
  if (h_function == "default") return default_H();
  if (h_function.rfind("power:", 0) == 0) {
    double p = 1.25, q = 0.25;
    if (std::sscanf(h_function.c_str(), "power:%lf,%lf", &p, &q) != 2)
      throw OutOfDomain("bad h-function spec: " + h_function);
    return power_H(p, q);
  }
  throw OutOfDomain("unknown h-function: " + h_function);
}

QuadSpec RunConfig::make_quad_spec() const {
  QuadSpec spec;
  spec.atol = tol_abs;
  spec.rtol = tol_rel;
  spec.order = 7;
  spec.max_cells = 60000;
  return spec;
}

std::pair<Vec3, double> RunConfig::parse_ball() const {
  double r = 0.3;
  char which = 'P';
  if (std::sscanf(ball.c_str(), "%c,%lf", &which, &r) == 2) {
    if (which == 'P' || which == 'p') return {point_P(), r};
    if (which == 'O' || which == 'o' || which == '0') return {point_O(), r};
  }
  double x = 0, y = 0, z = 0;
  if (std::sscanf(ball.c_str(), "%lf,%lf,%lf,%lf", &x, &y, &z, &r) == 4)
    return {Vec3(x, y, z), r};
  throw OutOfDomain("bad ball spec: " + ball);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {
std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
}

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["eps"] = c.eps_list;
  j["gamma"] = c.gamma;
  j["h_function"] = c.h_function;
  j["tol_abs"] = c.tol_abs;
  j["tol_rel"] = c.tol_rel;
  j["out"] = c.out_dir;
  j["seed"] = c.seed;
  j["regions"] = c.regions;
  j["ball"] = c.ball;
  return j;
}
}  // namespace

void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << csv_escape(header[i]);
  out << "\r\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(row[i]);
    out << "\r\n";
  }
}

void write_json_report(const std::string& path, const RunConfig& config,
                       const std::string& results_json) {
  ordered_json j;
  j["config"] = config_json(config);
  j["results"] = ordered_json::parse(results_json);
  j["versions"] = {{"dipolelab", "0.1.0"}, {"format", 1}};
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << "\n";
}

std::string energy_rows_json(const EnergyTable& table) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : table.rows) {
    ordered_json j;
    j["eps"] = r.eps;
    j["gamma"] = r.gamma;
    j["region"] = r.region;
    j["dirichlet"] = r.dirichlet;
    j["dirichlet_err"] = r.dirichlet_err;
    j["h_energy"] = r.h_energy;
    j["h_err"] = r.h_err;
    j["expected"] = r.expected;
    j["deviation"] = r.deviation;
    j["limit_dirichlet"] = r.limit_dirichlet;
    j["limit_h"] = r.limit_h;
    arr.push_back(j);
  }
  return arr.dump();
}

std::string lemma_rows_json(const std::vector<LemmaCheck>& checks) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : checks) {
    ordered_json j;
    j["id"] = c.id;
    j["eps"] = c.eps;
    j["gamma"] = c.gamma;
    j["pass"] = c.pass;
    j["worst_margin"] = c.worst_margin;
    j["fitted_exponent"] = c.fitted_exponent;
    j["claimed_exponent"] = c.claimed_exponent;
    j["fitted_constant"] = c.fitted_constant;
    j["note"] = c.note;
    arr.push_back(j);
  }
  return arr.dump();
}

std::string pairing_rows_json(const std::vector<PairingResult>& results) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : results) {
    ordered_json j;
    j["test_fn"] = r.test_fn;
    j["value"] = r.value;
    j["oracle"] = r.oracle;
    j["deviation"] = r.deviation;
    arr.push_back(j);
  }
  return arr.dump();
}

std::string lemma_table_text(const std::vector<LemmaCheck>& checks) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-18s %-9s %-6s %-5s %12s %9s %9s  %s\n", "lemma",
                "eps", "gamma", "pass", "margin", "fit_exp", "claim", "note");
  out << line;
  for (const auto& c : checks) {
    std::snprintf(line, sizeof(line), "%-18s %-9g %-6.3f %-5s %12.3e %9.3f %9.3f  %s\n",
                  c.id.c_str(), c.eps, c.gamma, c.pass ? "ok" : "FAIL", c.worst_margin,
                  c.fitted_exponent, c.claimed_exponent, c.note.c_str());
    out << line;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_energy_table(const RunConfig& config) {
  ensure_dir(config.out_dir);
  LimitMap limit;
  QuadSpec spec = config.make_quad_spec();
  spec.atol = std::max(spec.atol, 1e-7);
  spec.rtol = std::max(spec.rtol, 1e-6);
  EnergyTable table = energy_gap_table(config.eps_list, config.gamma, limit,
                                       config.make_h(), spec);
  if (!config.regions.empty()) {
    EnergyTable filtered;
    for (const auto& row : table.rows)
      for (const auto& want : config.regions)
        if (row.region.rfind(want, 0) == 0) filtered.rows.push_back(row);
    table = filtered;
  }
  if (config.write_csv) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : table.rows)
      rows.push_back({format_double(r.eps), format_double(r.gamma), r.region,
                      format_double(r.dirichlet), format_double(r.dirichlet_err),
                      format_double(r.h_energy), format_double(r.h_err),
                      format_double(r.expected), format_double(r.deviation)});
    write_csv_file(config.out_dir + "/energy_table.csv",
                   {"eps", "gamma", "region", "dirichlet", "dirichlet_err", "h_energy",
                    "h_err", "expected", "deviation"},
                   rows);
  }
  if (config.write_json)
    write_json_report(config.out_dir + "/energy_table.json", config,
                      energy_rows_json(table));
  // tube rows must approach 2 pi from above for decreasing eps
  double prev = 1e300;
  bool monotone = true;
  for (double eps : config.eps_list) {
    for (const auto* r : table.for_eps(eps))
      if (r->region == "c_eps") {
        const double dev = std::abs(r->dirichlet - kTwoPi);
        if (dev > prev) monotone = false;
        prev = dev;
      }
  }
  return monotone ? 0 : 2;
}

int cmd_lemmas(const RunConfig& config) {
  ensure_dir(config.out_dir);
  const auto checks = run_lemma_checks(config.eps_list, config.gamma, config.make_h());
  std::fputs(lemma_table_text(checks).c_str(), stdout);
  if (config.write_json)
    write_json_report(config.out_dir + "/lemmas.json", config, lemma_rows_json(checks));
  for (const auto& c : checks)
    if (!c.pass) return 2;
  return 0;
}

int cmd_incompressibility(const RunConfig& config) {
  ensure_dir(config.out_dir);
  LimitMap limit;
  const double eps = config.eps_list.empty() ? 0.05 : config.eps_list.front();
  RecoveryMap rec(RecoveryParams(eps, config.gamma), &limit);
  double worst = 0;
  const long n = 10000;
  for (long i = 0; i < n; ++i) {
    const Vec3 h = halton3(i);
    const Vec3 pts[3] = {
        rec.eval_tube(eps * (0.01 + 0.98 * h.x()), 0.01 + 0.98 * h.y()).point,
        rec.cap_lower_point(0.01 + 0.98 * h.x(), 0.5 * kPi * (0.01 + 0.98 * h.y())),
        rec.cap_upper_point(0.01 + 0.98 * h.x(), 0.5 * kPi * (0.01 + 0.98 * h.y()))};
    for (const Vec3& p : pts)
      worst = std::max(worst, std::abs(determinant(rec.eval(p).grad) - 1.0));
  }
  std::printf("max |det Du_eps - 1| over incompressible regions: %.3e\n", worst);
  if (config.write_json) {
    ordered_json res = ordered_json::array();
    res.push_back({{"eps", eps}, {"max_abs_det_minus_one", worst}});
    write_json_report(config.out_dir + "/incompressibility.json", config, res.dump());
  }
  return worst <= 1e-8 ? 0 : 2;
}

int cmd_degree(const RunConfig& config) {
  ensure_dir(config.out_dir);
  LimitMap limit;
  const auto [center, radius] = config.parse_ball();
  const DeltaField field =
      delta_field([&](const Vec3& p) { return limit.value(p); }, center, radius,
                  Vec2(0.0, 0.8), Vec2(-0.3, 1.3), 0.01);
  std::vector<std::vector<std::string>> rows;
  std::map<int, long> histogram;
  for (int j = 0; j < field.nz; ++j)
    for (int i = 0; i < field.ns; ++i) {
      const Vec2 q = field.point(i, j);
      const int v = field.at(i, j);
      if (v != DeltaField::kInvalid) ++histogram[v];
      rows.push_back({format_double(q.x()), format_double(q.y()),
                      v == DeltaField::kInvalid ? "" : std::to_string(v)});
    }
  if (config.write_csv)
    write_csv_file(config.out_dir + "/delta_grid.csv", {"s", "z", "value"}, rows);
  ordered_json hist = ordered_json::array();
  for (const auto& [k, v] : histogram) {
    std::printf("delta = %+d : %ld probes\n", k, v);
    hist.push_back({{"delta", k}, {"count", v}});
  }
  if (config.write_json)
    write_json_report(config.out_dir + "/degree.json", config, hist.dump());
  return 0;
}

int cmd_det_pairing(const RunConfig& config) {
  ensure_dir(config.out_dir);
  LimitMap limit;
  const auto atlas = limit_atlas(limit);
  QuadSpec spec = config.make_quad_spec();
  spec.atol = std::max(spec.atol, 2e-6);
  spec.rtol = std::max(spec.rtol, 1e-6);
  spec.max_cells = 20000;
  std::vector<PairingResult> results;
  bool ok = true;
  for (const auto& phi : standard_test_functions()) {
    PairingResult pr = det_pairing(atlas, phi, true, spec);
    std::printf("det pairing %-12s value %+.6f oracle %+.6f dev %.2e (tol %.2e)\n",
                pr.test_fn.c_str(), pr.value, pr.oracle, std::abs(pr.deviation),
                1e-3 * phi.c1_norm);
    ok = ok && std::abs(pr.deviation) <= 1e-3 * phi.c1_norm;
    results.push_back(pr);
  }
  if (config.write_json)
    write_json_report(config.out_dir + "/det_pairing.json", config,
                      pairing_rows_json(results));
  return ok ? 0 : 2;
}

int cmd_surface(const RunConfig& config) {
  ensure_dir(config.out_dir);
  LimitMap limit;
  const auto atlas = limit_atlas(limit);
  QuadSpec spec = config.make_quad_spec();
  spec.atol = std::max(spec.atol, 1e-5);
  spec.rtol = std::max(spec.rtol, 1e-5);
  spec.max_cells = 20000;
  std::vector<PairingResult> results;
  bool ok = true;
  for (const auto& f : standard_test_fields()) {
    if (f.name == "y_only") continue;  // zero oracle; exercised by the tests
    PairingResult pr = surface_pairing(atlas, f, true, spec);
    const double tol = 0.01 * std::max(std::abs(pr.oracle), f.sup_norm);
    std::printf("surface pairing %-14s value %+.6f oracle %+.6f dev %.2e (tol %.2e)\n",
                pr.test_fn.c_str(), pr.value, pr.oracle, std::abs(pr.deviation), tol);
    ok = ok && std::abs(pr.deviation) <= tol;
    results.push_back(pr);
  }
  if (config.write_json)
    write_json_report(config.out_dir + "/surface_pairing.json", config,
                      pairing_rows_json(results));
  return ok ? 0 : 2;
}

int cmd_report(const RunConfig& config) {
  ensure_dir(config.out_dir);
  const auto results = run_acceptance(config);
  bool all = true;
  for (const auto& r : results) {
    std::printf("[%2d] %-34s %s  (%.1fs) %s\n", r.id, r.name.c_str(),
                r.pass ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
    all = all && r.pass;
  }
  if (config.write_json)
    write_json_report(config.out_dir + "/report.json", config, criteria_json(results));
  return all ? 0 : 2;
}

}  // namespace dlab
