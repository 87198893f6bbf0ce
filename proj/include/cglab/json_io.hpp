// json_io.hpp - serialization of bundles, reports, scenarios and trees.
#pragma once

#include <string>

#include <json.hpp>

#include "cglab/bubble_tree.hpp"
#include "cglab/curvature.hpp"
#include "cglab/functionals.hpp"
#include "cglab/neck_ode.hpp"

namespace cglab {

using Json = nlohmann::json;

// {point, R, E, W, sigma: [s1..s4], bach}, tensor components row-major.
Json bundle_to_json(const CurvatureBundle& b);

// {model, chi, weyl_energy, sigma2_mass, gb_residual, volume}
Json gb_report_to_json(const std::string& model, int chi,
                       const GaussBonnetReport& rep);

// {c3, mass, w_max, lemma65_slack, cone_dev, admissible}
Json neck_diagnostics_to_json(double c3, const NeckDiagnostics& d);

// CSV with header t,w,w',sigma2,R,slice_diam. Reading recovers w'' from
// the sigma2 column, which requires the radial coefficient in force when
// the trace was written.
std::string profile_to_csv(const RadialProfile& p);
RadialProfile profile_from_csv(const std::string& text,
                               double coeff = kSigma2Coefficient);

// CSV with header r,s,vol,ratio.
std::string volume_growth_to_csv(const std::vector<VolumeGrowthRow>& rows);

Json scenario_to_json(const Scenario& sc);
Scenario scenario_from_json(const Json& j);

Json tree_to_json(const BubbleTree& tree);
std::string tree_to_dot(const BubbleTree& tree);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace cglab
