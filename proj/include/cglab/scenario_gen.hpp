// scenario_gen.hpp - planted scenario templates with their expected
// extraction forests (generation-from-answer, used as test oracles).
#pragma once

#include <string>

#include "cglab/bubble_tree.hpp"

namespace cglab {

struct GeneratedScenario {
  std::string name;
  Scenario scenario;
  std::vector<TreeShape> expected;
};

// Templates: "single", "separable_pair", "nested_chain" (depth 3),
// "exotic_triple" (iterated grouping), "random" (seeded mixed forest
// with n bubbles). Scenarios come realized at the given epsilon.
GeneratedScenario gen_scenario(const std::string& tmpl, int n = 8,
                               unsigned seed = 0, double epsilon = 1e-3);

// The fixed recovery suite used by the acceptance run: the four
// canonical templates plus seeded random scenarios, twenty in total.
std::vector<GeneratedScenario> recovery_suite();

}  // namespace cglab
