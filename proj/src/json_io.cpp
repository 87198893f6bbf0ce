// json_io.cpp - serialization helpers.

#include "cglab/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cglab {

namespace {

Json mat_to_json(const Mat4& m) {
  Json arr = Json::array();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) arr.push_back(m(i, j));
  return arr;
}

Json ten4_to_json(const Ten4& t) {
  Json arr = Json::array();
  for (double v : t.a) arr.push_back(v);
  return arr;
}

Json vec_to_json(const Vec4& v) {
  return Json::array({v[0], v[1], v[2], v[3]});
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::leaf: return "leaf";
    case NodeKind::intermediate: return "intermediate";
    case NodeKind::exotic: return "exotic";
    case NodeKind::root: return "root";
  }
  return "?";
}

}  // namespace

Json bundle_to_json(const CurvatureBundle& b) {
  Json j;
  j["point"] = vec_to_json(b.point);
  j["R"] = b.R;
  j["E"] = mat_to_json(b.E);
  j["W"] = ten4_to_json(b.W);
  Json sigma = Json::array();
  auto s = sigma_all(b.A_ws, b.g);
  for (double v : s) sigma.push_back(v);
  j["sigma"] = sigma;
  j["bach"] = b.bach ? mat_to_json(*b.bach) : Json();
  return j;
}

Json gb_report_to_json(const std::string& model, int chi,
                       const GaussBonnetReport& rep) {
  Json j;
  j["model"] = model;
  j["chi"] = chi;
  j["weyl_energy"] = rep.weyl_term;
  j["sigma2_mass"] = rep.sigma2_term;
  j["gb_residual"] = rep.residual;
  j["volume"] = rep.volume;
  return j;
}

Json neck_diagnostics_to_json(double c3, const NeckDiagnostics& d) {
  Json j;
  j["c3"] = c3;
  j["mass"] = d.mass;
  j["w_max"] = d.w_max;
  j["lemma65_slack"] = d.mass_max_slack;
  j["cone_dev"] = d.cone_dev;
  j["admissible"] = d.admissible;
  return j;
}

std::string profile_to_csv(const RadialProfile& p) {
  std::ostringstream out;
  out << "t,w,w',sigma2,R,slice_diam\n";
  const double pi = 3.14159265358979323846;
  for (std::size_t i = 0; i < p.size(); ++i) {
    out << fmt(p.t(i)) << ',' << fmt(p.w[i]) << ',' << fmt(p.wp[i]) << ','
        << fmt(p.sigma2_at(i)) << ',' << fmt(p.scalar_at(i)) << ','
        << fmt(pi * std::exp(p.w[i])) << '\n';
  }
  return out.str();
}

RadialProfile profile_from_csv(const std::string& text, double coeff) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    fail(ErrorCode::InvalidArgument, "empty profile CSV");
  RadialProfile p;
  p.coeff = coeff;
  p.provenance = ProfileProvenance::interpolated;
  std::vector<double> ts;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double t, w, wp, s2, r, diam;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &t, &w, &wp, &s2,
                    &r, &diam) != 6)
      fail(ErrorCode::InvalidArgument, "malformed profile CSV row: " + line);
    ts.push_back(t);
    p.w.push_back(w);
    p.wp.push_back(wp);
    // w'' back from the sigma_2 column.
    double denom = 1.0 - wp * wp;
    p.wpp.push_back(-s2 * std::exp(4.0 * w) / (p.coeff * denom));
  }
  if (ts.size() < 2) fail(ErrorCode::InvalidArgument, "profile CSV too short");
  p.t0 = ts.front();
  p.dt = ts[1] - ts[0];
  for (std::size_t i = 1; i < ts.size(); ++i)
    if (std::abs(ts[i] - ts[i - 1] - p.dt) > 1e-9)
      fail(ErrorCode::GridMismatch, "profile CSV grid not uniform");
  return p;
}

std::string volume_growth_to_csv(const std::vector<VolumeGrowthRow>& rows) {
  std::ostringstream out;
  out << "r,s,vol,ratio\n";
  for (const auto& r : rows)
    out << fmt(r.r) << ',' << fmt(r.s) << ',' << fmt(r.vol) << ',' << fmt(r.ratio)
        << '\n';
  return out.str();
}

Json scenario_to_json(const Scenario& sc) {
  Json j;
  Json planted = Json::array();
  for (const auto& b : sc.planted) {
    Json pb;
    pb["id"] = b.id;
    pb["parent"] = b.parent ? Json(*b.parent) : Json();
    pb["offset_dir"] = vec_to_json(b.offset_dir);
    pb["gamma"] = b.gamma;
    pb["d0"] = b.d0;
    pb["lambda0"] = b.lambda0;
    pb["beta"] = b.beta;
    pb["energy"] = b.energy;
    planted.push_back(pb);
  }
  j["planted"] = planted;
  j["Lambda"] = sc.lambda_total;
  j["epsilon"] = sc.epsilon;
  j["seed"] = sc.seed;
  j["background"] = Json{{"count", sc.background.count},
                         {"total_mass", sc.background.total_mass},
                         {"extent", sc.background.extent}};
  return j;
}

Scenario scenario_from_json(const Json& j) {
  Scenario sc;
  for (const auto& pb : j.at("planted")) {
    PlantedBubble b;
    b.id = pb.at("id").get<int>();
    if (!pb.at("parent").is_null()) b.parent = pb.at("parent").get<int>();
    auto dir = pb.at("offset_dir");
    for (int i = 0; i < 4; ++i) b.offset_dir[i] = dir.at(i).get<double>();
    b.gamma = pb.at("gamma").get<double>();
    b.d0 = pb.at("d0").get<double>();
    b.lambda0 = pb.at("lambda0").get<double>();
    b.beta = pb.at("beta").get<double>();
    b.energy = pb.at("energy").get<double>();
    sc.planted.push_back(b);
  }
  sc.lambda_total = j.at("Lambda").get<double>();
  sc.epsilon = j.at("epsilon").get<double>();
  sc.seed = j.at("seed").get<unsigned>();
  if (j.contains("background") && !j.at("background").is_null()) {
    sc.background.count = j.at("background").at("count").get<int>();
    sc.background.total_mass = j.at("background").at("total_mass").get<double>();
    sc.background.extent = j.at("background").at("extent").get<double>();
  }
  sc.realize();
  return sc;
}

namespace {

Json cert_to_json(const NeckCertificate& c) {
  Json j;
  j["r1"] = c.r1;
  j["r2"] = c.r2;
  j["annulus_energy"] = c.annulus_energy;
  j["ratio"] = c.ratio;
  j["component_count"] = c.component_count;
  j["empty_annulus"] = c.empty_annulus;
  j["shell_atom_count"] = c.shell_atom_count;
  j["h3_surrogate_ok"] = c.h3_surrogate_ok;
  j["passed"] = c.passed;
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

Json node_to_json(const BubbleTree& t, int id) {
  const BubbleNode& n = t.node(id);
  Json j;
  j["id"] = n.id;
  j["kind"] = kind_name(n.kind);
  j["center"] = vec_to_json(n.center);
  j["scale"] = n.scale.value;
  j["scale_exponent"] = n.scale.exponent;
  j["energy"] = n.captured_energy;
  if (n.neck) j["neck"] = cert_to_json(*n.neck);
  Json kids = Json::array();
  for (int c : n.children) kids.push_back(node_to_json(t, c));
  j["children"] = kids;
  return j;
}

}  // namespace

Json tree_to_json(const BubbleTree& tree) {
  Json j;
  Json roots = Json::array();
  for (int r : tree.roots) roots.push_back(node_to_json(tree, r));
  j["roots"] = roots;
  j["extraction_count"] = tree.extraction_count;
  Json trace = Json::array();
  for (const auto& ev : tree.trace) {
    Json e;
    e["step"] = ev.step;
    e["center"] = vec_to_json(ev.center);
    e["scale"] = ev.scale.value;
    e["action"] = ev.action;
    e["divergence_ok"] = ev.divergence_ok;
    trace.push_back(e);
  }
  j["trace"] = trace;
  return j;
}

std::string tree_to_dot(const BubbleTree& tree) {
  std::ostringstream out;
  out << "digraph bubbletree {\n  node [shape=box];\n";
  for (const auto& n : tree.nodes) {
    out << "  n" << n.id << " [label=\"" << kind_name(n.kind) << " #" << n.id
        << "\\nscale=" << fmt(n.scale.value) << "\"];\n";
  }
  out << "  ambient [shape=ellipse,label=\"ambient\"];\n";
  for (const auto& n : tree.nodes) {
    std::string label = n.neck ? (n.neck->passed ? "pass" : "fail") : "none";
    if (n.parent >= 0)
      out << "  n" << n.parent << " -> n" << n.id << " [label=\"" << label
          << "\"];\n";
    else
      out << "  ambient -> n" << n.id << " [label=\"" << label << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::InvalidArgument, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + path);
  out << text;
}

}  // namespace cglab
