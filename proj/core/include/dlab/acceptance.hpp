#pragma once

#include <string>
#include <vector>

#include "dlab/report.hpp"

namespace dlab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

/// Runs the thirteen acceptance criteria at their pinned tolerances.
/// `quick` shrinks sample counts for smoke testing (not used by the
/// acceptance gate itself).
std::vector<CriterionResult> run_acceptance(const RunConfig& config, bool quick = false);

std::string criteria_json(const std::vector<CriterionResult>& results);

}  // namespace dlab
