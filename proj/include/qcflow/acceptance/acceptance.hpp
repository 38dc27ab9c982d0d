#pragma once

// The acceptance suite: one function per criterion, each printing a
// PASS/FAIL line with the measured and required values. Criteria run against
// closed-form oracles on the builtin fields.

#include <ostream>
#include <string>
#include <vector>

namespace qcflow::acceptance {

struct Options {
  std::string filter;       // substring match on criterion names; empty = all
  double tol_scale = 1.0;   // scales integrator tolerances (negative-control hook)
};

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<CriterionResult> run_suite(const Options& options, std::ostream& os);

// Number of failing criteria after printing the summary table.
int run_and_report(const Options& options, std::ostream& os);

}  // namespace qcflow::acceptance
