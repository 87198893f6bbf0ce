// cglab.cpp - command-line front end: curvature dumps, global integrals,
// neck ODE runs, bubble-tree extraction, scenario generation, and the
// verification suite.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "cglab/acceptance.hpp"
#include "cglab/json_io.hpp"
#include "cglab/scenario_gen.hpp"

using namespace cglab;

namespace {

Vec4 parse_point(const std::string& s) {
  Vec4 p;
  if (std::sscanf(s.c_str(), "%lf,%lf,%lf,%lf", &p[0], &p[1], &p[2], &p[3]) != 4)
    fail(ErrorCode::InvalidArgument, "point must be 'x0,x1,x2,x3': " + s);
  return p;
}

std::pair<double, double> parse_range(const std::string& s) {
  double a, b;
  if (std::sscanf(s.c_str(), "%lf:%lf", &a, &b) != 2)
    fail(ErrorCode::InvalidArgument, "range must be 'a:b': " + s);
  return {a, b};
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cglab - curvature workbench for conformal 4-manifold analysis"};
  app.require_subcommand(1);

  // curvature ------------------------------------------------------------
  auto* cmd_curv = app.add_subcommand("curvature", "curvature bundle at chart points");
  std::string curv_chart = "flat";
  std::vector<std::string> curv_points;
  bool curv_bach = false;
  std::string curv_out;
  cmd_curv->add_option("--chart", curv_chart, "chart name, e.g. s4_round(1)");
  cmd_curv->add_option("--point", curv_points, "point 'x0,x1,x2,x3' (repeatable)")
      ->required();
  cmd_curv->add_flag("--bach", curv_bach, "include the Bach tensor");
  cmd_curv->add_option("--out", curv_out, "output file (default stdout)");

  // gauss-bonnet ----------------------------------------------------------
  auto* cmd_gb = app.add_subcommand("gauss-bonnet", "global integrals on a closed model");
  std::string gb_model = "s4(1)";
  int gb_nq = 24;
  std::string gb_out;
  cmd_gb->add_option("--model", gb_model, "s4(r) | torus(L) | s3xs1(r,L) | s4_conformal(a) | perturbed_torus(L,seed,amp)");
  cmd_gb->add_option("--nq", gb_nq, "Gauss-Legendre nodes per axis");
  cmd_gb->add_option("--out", gb_out, "output file");

  // neck-ode ---------------------------------------------------------------
  auto* cmd_neck = app.add_subcommand("neck-ode", "shoot the radial sigma_2 equation");
  double nk_target = 1.0, nk_w0 = 0.25 * std::log(1.5), nk_wp0 = 0.0;
  double nk_step = 1e-3, nk_coeff = kSigma2Coefficient, nk_c3 = -1;
  std::string nk_range = "0:5", nk_csv, nk_json;
  cmd_neck->add_option("--target", nk_target, "sigma_2 target");
  cmd_neck->add_option("--w0", nk_w0, "w at the left end");
  cmd_neck->add_option("--wp0", nk_wp0, "w' at the left end");
  cmd_neck->add_option("--t-range", nk_range, "integration interval a:b");
  cmd_neck->add_option("--step", nk_step, "grid step");
  cmd_neck->add_option("--coefficient", nk_coeff, "radial sigma_2 coefficient");
  cmd_neck->add_option("--c3", nk_c3, "admissibility floor (default: target)");
  cmd_neck->add_option("--out-csv", nk_csv, "trace CSV file");
  cmd_neck->add_option("--out-json", nk_json, "diagnostics JSON file");

  // interpolate --------------------------------------------------------------
  auto* cmd_interp = app.add_subcommand("interpolate", "harmonic-mean profile interpolation");
  std::string ip_a, ip_b, ip_out;
  double ip_t = 0.5, ip_coeff = kSigma2Coefficient;
  cmd_interp->add_option("--profile1", ip_a, "first profile CSV")->required();
  cmd_interp->add_option("--profile2", ip_b, "second profile CSV")->required();
  cmd_interp->add_option("--t-param", ip_t, "interpolation parameter in [0,1]");
  cmd_interp->add_option("--coefficient", ip_coeff, "radial sigma_2 coefficient");
  cmd_interp->add_option("--out-csv", ip_out, "interpolated trace CSV file");

  // bubbletree ----------------------------------------------------------------
  auto* cmd_tree = app.add_subcommand("bubbletree", "extract the bubble tree of a scenario");
  std::string bt_scenario, bt_mode = "limit", bt_emit = "json", bt_out;
  double bt_delta = 0.1, bt_delta0 = 0.1, bt_eps = -1;
  long long bt_seed = -1;
  cmd_tree->add_option("--scenario", bt_scenario, "scenario JSON file")->required();
  cmd_tree->add_option("--mode", bt_mode, "limit | numeric");
  cmd_tree->add_option("--delta", bt_delta, "extraction quantum");
  cmd_tree->add_option("--delta0", bt_delta0, "neck energy bound");
  cmd_tree->add_option("--epsilon", bt_eps, "override the scenario epsilon");
  cmd_tree->add_option("--seed", bt_seed, "override the scenario seed");
  cmd_tree->add_option("--emit", bt_emit, "json | dot");
  cmd_tree->add_option("--out", bt_out, "output file");

  // gen-scenario ----------------------------------------------------------------
  auto* cmd_gen = app.add_subcommand("gen-scenario", "write a planted scenario file");
  std::string gs_template = "single", gs_out;
  int gs_n = 8;
  unsigned gs_seed = 0;
  double gs_eps = 1e-3;
  cmd_gen->add_option("--template", gs_template,
                      "single | separable_pair | nested_chain | exotic_triple | random");
  cmd_gen->add_option("--n", gs_n, "bubble budget for random scenarios");
  cmd_gen->add_option("--seed", gs_seed, "generator seed");
  cmd_gen->add_option("--epsilon", gs_eps, "evaluation epsilon");
  cmd_gen->add_option("--out", gs_out, "output file (default stdout)");

  // suite ---------------------------------------------------------------------
  auto* cmd_suite = app.add_subcommand("suite", "run the verification suite");
  AcceptanceOptions sopts;
  std::string suite_json;
  cmd_suite->add_option("--coefficient", sopts.sigma2_coefficient,
                        "radial sigma_2 coefficient");
  cmd_suite->add_option("--delta", sopts.delta, "extraction quantum");
  cmd_suite->add_option("--delta0", sopts.delta0, "neck energy bound");
  cmd_suite->add_option("--nq", sopts.quadrature_nodes, "quadrature nodes per axis");
  cmd_suite->add_option("--json", suite_json, "machine-readable summary file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_curv) {
      MetricChart chart = parse_chart(curv_chart);
      Json arr = Json::array();
      for (const auto& ps : curv_points) {
        Vec4 p = parse_point(ps);
        CurvatureOptions opts;
        opts.want_bach = curv_bach;
        arr.push_back(bundle_to_json(curvature(chart, p, opts)));
      }
      emit(arr.dump(2) + "\n", curv_out);
    } else if (*cmd_gb) {
      ClosedModel model = parse_model(gb_model);
      model.n_q = gb_nq;
      GaussBonnetReport rep = gauss_bonnet_check(model);
      emit(gb_report_to_json(model.name, model.euler_char, rep).dump(2) + "\n", gb_out);
    } else if (*cmd_neck) {
      auto [ta, tb] = parse_range(nk_range);
      ShootOptions so;
      so.coeff = nk_coeff;
      RadialProfile p = shoot(nk_target, nk_w0, nk_wp0, ta, tb, nk_step, so);
      if (!nk_csv.empty()) write_text_file(nk_csv, profile_to_csv(p));
      double c3 = nk_c3 > 0 ? nk_c3 : nk_target;
      NeckDiagnostics d = mass_max_check(p, c3);
      std::string dj = neck_diagnostics_to_json(c3, d).dump(2) + "\n";
      if (!nk_json.empty())
        write_text_file(nk_json, dj);
      else
        std::cout << dj;
    } else if (*cmd_interp) {
      RadialProfile a = profile_from_csv(read_text_file(ip_a), ip_coeff);
      RadialProfile b = profile_from_csv(read_text_file(ip_b), ip_coeff);
      double ms = 0, mr = 0;
      RadialProfile mid = interpolate_profiles(a, b, ip_t, &ms, &mr);
      if (!ip_out.empty()) write_text_file(ip_out, profile_to_csv(mid));
      Json j;
      j["t_param"] = ip_t;
      j["min_sigma2"] = ms;
      j["min_R"] = mr;
      j["positive"] = ms > 0 && mr > 0;
      std::cout << j.dump(2) << "\n";
    } else if (*cmd_tree) {
      Json sj = Json::parse(read_text_file(bt_scenario));
      Scenario sc = scenario_from_json(sj);
      bool touched = false;
      if (bt_eps > 0) {
        sc.epsilon = bt_eps;
        touched = true;
      }
      if (bt_seed >= 0) {
        sc.seed = static_cast<unsigned>(bt_seed);
        touched = true;
      }
      if (touched) sc.realize();
      ExtractionConfig cfg;
      cfg.delta = bt_delta;
      cfg.delta0 = bt_delta0;
      cfg.mode = bt_mode == "numeric" ? ExtractionMode::numeric : ExtractionMode::limit;
      BubbleTree tree = build_tree(sc, cfg);
      if (bt_emit == "dot")
        emit(tree_to_dot(tree), bt_out);
      else
        emit(tree_to_json(tree).dump(2) + "\n", bt_out);
    } else if (*cmd_gen) {
      GeneratedScenario g = gen_scenario(gs_template, gs_n, gs_seed, gs_eps);
      emit(scenario_to_json(g.scenario).dump(2) + "\n", gs_out);
    } else if (*cmd_suite) {
      if (sopts.delta0 > sopts.delta) {
        std::cerr << "config error: delta0 must not exceed delta\n";
        return 2;
      }
      auto results = run_acceptance(sopts);
      std::cout << format_results(results);
      if (!suite_json.empty()) {
        Json arr = Json::array();
        for (const auto& r : results) {
          Json e;
          e["index"] = r.index;
          e["name"] = r.name;
          e["passed"] = r.passed;
          e["detail"] = r.detail;
          e["seconds"] = r.seconds;
          arr.push_back(e);
        }
        write_text_file(suite_json, arr.dump(2) + "\n");
      }
      int failures = 0;
      for (const auto& r : results) failures += r.passed ? 0 : 1;
      return failures;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
