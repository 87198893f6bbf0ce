// acceptance.hpp - the end-to-end verification suite: one entry per
// criterion, each with its tolerance pinned in code.
#pragma once

#include <string>
#include <vector>

namespace cglab {

struct AcceptanceOptions {
  double sigma2_coefficient = 1.5;  // radial sigma_2 coefficient under test
  double delta = 0.1;
  double delta0 = 0.1;
  int quadrature_nodes = 24;
};

struct CriterionResult {
  int index = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

// Runs all criteria, in order. Individual failures do not stop the run.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

// Pass/fail line per criterion, "ok" summary at the end.
std::string format_results(const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

// Calibration helper: minimum of (w_max - log(mass)/2) over the
// randomized admissible profile family used by the mass/max criterion.
// The frozen constant kMassMaxConstant is this minimum minus 1e-3.
double derive_mass_max_constant(int profiles = 100);

}  // namespace cglab
