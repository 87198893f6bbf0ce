// scenario_gen.cpp - planted-scenario templates and the recovery suite.

#include "cglab/scenario_gen.hpp"

#include <cmath>
#include <random>

namespace cglab {

namespace {

PlantedBubble bubble(int id, std::optional<int> parent, const Vec4& dir,
                     double d0, double gamma, double lambda0, double beta,
                     double energy) {
  PlantedBubble b;
  b.id = id;
  b.parent = parent;
  b.offset_dir = dir.norm() > 0 ? Vec4(dir.normalized()) : Vec4(Vec4::Zero());
  b.d0 = d0;
  b.gamma = gamma;
  b.lambda0 = lambda0;
  b.beta = beta;
  b.energy = energy;
  return b;
}

TreeShape leaf() { return TreeShape{NodeKind::leaf, {}}; }

Vec4 axis(int a) { return Vec4::Unit(a); }

Vec4 fresh_dir(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec4 v;
  do {
    for (int i = 0; i < 4; ++i) v[i] = n(rng);
  } while (v.norm() < 1e-3);
  return v.normalized();
}

GeneratedScenario make_single(double epsilon) {
  GeneratedScenario g;
  g.name = "single";
  g.scenario.planted.push_back(bubble(0, std::nullopt, axis(0), 0.0, 0.0, 0.5, 1.0, 0.25));
  g.scenario.lambda_total = 0.5;
  g.scenario.epsilon = epsilon;
  g.expected = {leaf()};
  return g;
}

GeneratedScenario make_separable_pair(double epsilon) {
  GeneratedScenario g;
  g.name = "separable_pair";
  g.scenario.planted.push_back(bubble(0, std::nullopt, axis(0), 1.5, 0.0, 0.5, 1.0, 0.25));
  g.scenario.planted.push_back(bubble(1, std::nullopt, -axis(0), 1.5, 0.0, 0.5, 1.0, 0.25));
  g.scenario.lambda_total = 0.8;
  g.scenario.epsilon = epsilon;
  g.expected = {leaf(), leaf()};
  return g;
}

GeneratedScenario make_nested_chain(double epsilon) {
  GeneratedScenario g;
  g.name = "nested_chain";
  g.scenario.planted.push_back(bubble(0, std::nullopt, axis(0), 0.0, 0.0, 0.5, 1.0, 0.25));
  g.scenario.planted.push_back(bubble(1, 0, axis(1), 0.3, 1.0, 0.5, 2.0, 0.25));
  g.scenario.planted.push_back(bubble(2, 1, axis(2), 0.3, 2.0, 0.5, 3.0, 0.25));
  g.scenario.lambda_total = 1.0;
  g.scenario.epsilon = epsilon;
  TreeShape root{NodeKind::root, {TreeShape{NodeKind::intermediate, {leaf()}}}};
  g.expected = {root};
  return g;
}

GeneratedScenario make_exotic_triple(double epsilon) {
  GeneratedScenario g;
  g.name = "exotic_triple";
  // Parent at scale eps; three deep bubbles at scale eps^4 whose mutual
  // distances sit at eps^3 (closest pair) and eps^2 (third), so grouping
  // runs twice before adoption.
  g.scenario.planted.push_back(bubble(0, std::nullopt, axis(0), 0.0, 0.0, 0.5, 1.0, 0.25));
  g.scenario.planted.push_back(bubble(1, 0, axis(1), 0.3, 1.0, 0.5, 4.0, 0.25));
  g.scenario.planted.push_back(bubble(2, 1, axis(2), 0.3, 3.0, 0.5, 4.0, 0.25));
  g.scenario.planted.push_back(bubble(3, 1, axis(3), 0.3, 2.0, 0.5, 4.0, 0.25));
  g.scenario.lambda_total = 1.2;
  g.scenario.epsilon = epsilon;
  TreeShape inner{NodeKind::exotic, {leaf(), leaf()}};
  TreeShape outer{NodeKind::exotic, {inner, leaf()}};
  TreeShape root{NodeKind::root, {outer}};
  g.expected = {root};
  return g;
}

GeneratedScenario make_random(int n, unsigned seed, double epsilon) {
  GeneratedScenario g;
  g.name = "random(" + std::to_string(n) + "," + std::to_string(seed) + ")";
  g.scenario.epsilon = epsilon;
  g.scenario.seed = seed;
  std::mt19937_64 rng(0xC0FFEEull + seed);
  std::uniform_real_distribution<double> d0r(0.22, 0.4);

  int next_id = 0;
  int budget = std::max(1, n);
  // Root centers on a widely separated deterministic frame.
  static const Vec4 frame[] = {Vec4(1.6, 0, 0, 0),  Vec4(-1.6, 0.2, 0, 0),
                               Vec4(0, 1.7, 0.3, 0), Vec4(0.2, -1.8, 0, 0.4),
                               Vec4(0, 0.3, 1.9, 0)};
  int tree_count = 0;
  while (budget > 0 && tree_count < 5) {
    Vec4 center = frame[tree_count];
    int kind = static_cast<int>(rng() % 5);
    if (kind == 4 && budget < 4) kind = static_cast<int>(rng() % 4);
    if (kind >= 2 && budget < 3) kind = budget >= 2 ? 1 : 0;
    if (kind == 1 && budget < 2) kind = 0;

    int root = next_id++;
    g.scenario.planted.push_back(
        bubble(root, std::nullopt, center, center.norm(), 0.0, 0.5, 1.0, 0.25));
    g.scenario.planted.back().offset_dir = center.normalized();

    TreeShape shape;
    switch (kind) {
      case 0: {  // lone leaf
        shape = leaf();
        budget -= 1;
        break;
      }
      case 1: {  // depth-2 chain
        int c = next_id++;
        g.scenario.planted.push_back(bubble(c, root, fresh_dir(rng), d0r(rng), 1.0, 0.5, 2.0, 0.25));
        shape = TreeShape{NodeKind::root, {leaf()}};
        budget -= 2;
        break;
      }
      case 2: {  // depth-3 chain
        int c = next_id++;
        g.scenario.planted.push_back(bubble(c, root, fresh_dir(rng), d0r(rng), 1.0, 0.5, 2.0, 0.25));
        int gc = next_id++;
        g.scenario.planted.push_back(bubble(gc, c, fresh_dir(rng), d0r(rng), 2.0, 0.5, 3.0, 0.25));
        shape = TreeShape{NodeKind::root, {TreeShape{NodeKind::intermediate, {leaf()}}}};
        budget -= 3;
        break;
      }
      case 3: {  // two-child star
        Vec4 u1 = fresh_dir(rng), u2 = fresh_dir(rng);
        while ((u1 - u2).norm() < 0.5 || (u1 + u2).norm() < 0.5) u2 = fresh_dir(rng);
        int c1 = next_id++;
        g.scenario.planted.push_back(bubble(c1, root, u1, d0r(rng), 1.0, 0.5, 2.0, 0.25));
        int c2 = next_id++;
        g.scenario.planted.push_back(bubble(c2, root, u2, d0r(rng), 1.0, 0.5, 2.0, 0.25));
        shape = TreeShape{NodeKind::root, {leaf(), leaf()}};
        budget -= 3;
        break;
      }
      default: {  // exotic triple under this root
        int b1 = next_id++;
        g.scenario.planted.push_back(bubble(b1, root, fresh_dir(rng), d0r(rng), 1.0, 0.5, 4.0, 0.25));
        int b2 = next_id++;
        g.scenario.planted.push_back(bubble(b2, b1, fresh_dir(rng), d0r(rng), 3.0, 0.5, 4.0, 0.25));
        int b3 = next_id++;
        g.scenario.planted.push_back(bubble(b3, b1, fresh_dir(rng), d0r(rng), 2.0, 0.5, 4.0, 0.25));
        TreeShape inner{NodeKind::exotic, {leaf(), leaf()}};
        TreeShape outer{NodeKind::exotic, {inner, leaf()}};
        shape = TreeShape{NodeKind::root, {outer}};
        budget -= 4;
        break;
      }
    }
    g.expected.push_back(shape);
    tree_count++;
  }
  if (rng() % 2 == 0) {
    g.scenario.background.count = 16;
    g.scenario.background.total_mass = 0.02;
    g.scenario.background.extent = 3.0;
  }
  double total = 0;
  for (const auto& b : g.scenario.planted) total += b.energy;
  g.scenario.lambda_total = total + g.scenario.background.total_mass + 0.1;
  return g;
}

}  // namespace

GeneratedScenario gen_scenario(const std::string& tmpl, int n, unsigned seed,
                               double epsilon) {
  GeneratedScenario g;
  if (tmpl == "single")
    g = make_single(epsilon);
  else if (tmpl == "separable_pair")
    g = make_separable_pair(epsilon);
  else if (tmpl == "nested_chain")
    g = make_nested_chain(epsilon);
  else if (tmpl == "exotic_triple")
    g = make_exotic_triple(epsilon);
  else if (tmpl == "random")
    g = make_random(n, seed, epsilon);
  else
    fail(ErrorCode::InvalidArgument, "unknown scenario template '" + tmpl + "'");
  g.scenario.seed = tmpl == "random" ? seed : g.scenario.seed;
  g.scenario.realize();
  return g;
}

std::vector<GeneratedScenario> recovery_suite() {
  std::vector<GeneratedScenario> suite;
  suite.push_back(gen_scenario("single"));
  suite.push_back(gen_scenario("separable_pair"));
  suite.push_back(gen_scenario("nested_chain"));
  suite.push_back(gen_scenario("exotic_triple"));
  for (unsigned s = 0; s < 16; ++s) suite.push_back(gen_scenario("random", 9, s));
  return suite;
}

}  // namespace cglab
