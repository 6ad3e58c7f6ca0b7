#pragma once

// Cross-tier consistency checks: every closed form against its quadrature,
// kernel variants against each other, the two dynamics routes, and the full
// simulation against the analytic steady state.

#include <ostream>
#include <string>
#include <vector>

namespace eitcav {

struct CheckResult {
  std::string name;
  bool passed;
  double value;      ///< measured discrepancy (or metric)
  double tolerance;  ///< bound the value had to satisfy
  std::string detail;
  double seconds;
};

std::vector<CheckResult> run_validation(int threads = 1);

/// One line per check and a summary; returns true if all passed.
bool print_validation(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace eitcav
