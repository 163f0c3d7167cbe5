#pragma once

#include <string>
#include <vector>

#include "dlab/energy.hpp"
#include "dlab/recovery_map.hpp"

namespace dlab {

/// One verified estimate: pointwise inequalities carry worst normalized
/// margins (>= -1e-12 means pass); scaling claims carry a fitted exponent
/// compared against the claimed one minus 0.1.
struct LemmaCheck {
  std::string id;
  double eps = 0;     // 0 for eps-independent checks
  double gamma = 0;
  bool pass = false;
  double worst_margin = 0;       // min over the grid, normalized by the local scale
  double fitted_exponent = 0;    // scaling checks only
  double claimed_exponent = 0;
  double fitted_constant = 0;    // value / model at the smallest eps
  std::string note;
};

/// The seventeen registry identifiers, in run order.
std::vector<std::string> lemma_registry();

/// Runs every registry check over the eps grid at fixed gamma.
/// grid_n controls the per-axis sample counts (cell centers, log-graded
/// toward r = 0). Throws HypothesisViolated if an eps is outside a check's
/// validity range.
std::vector<LemmaCheck> run_lemma_checks(const std::vector<double>& eps_list, double gamma,
                                         const HFunction& h, int grid_n = 200);

/// Least-squares slope of log(value / |log eps|^log_power) against log eps.
double fit_exponent(const std::vector<double>& eps, const std::vector<double>& values,
                    double log_power);

}  // namespace dlab
