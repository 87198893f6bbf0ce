// bubble_tree.cpp - scenario realization and the iterative extraction.

#include "cglab/bubble_tree.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace cglab {

Vec4 EpsPath::eval(double eps) const {
  Vec4 x = Vec4::Zero();
  for (const auto& [e, v] : terms) x += std::pow(eps, e) * v;
  return x;
}

void EpsPath::add_term(double exponent, const Vec4& coeff) {
  if (coeff.isZero(0.0)) return;
  for (auto& [e, v] : terms)
    if (e == exponent) {
      v += coeff;
      if (v.isZero(0.0)) {
        terms.erase(std::remove_if(terms.begin(), terms.end(),
                                   [&](const auto& t) { return t.second.isZero(0.0); }),
                    terms.end());
      }
      return;
    }
  terms.push_back({exponent, coeff});
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
}

EpsPath EpsPath::operator-(const EpsPath& o) const {
  EpsPath out = *this;
  for (const auto& [e, v] : o.terms) out.add_term(e, -v);
  return out;
}

std::pair<double, double> EpsPath::leading() const {
  for (const auto& [e, v] : terms) {
    double n = v.norm();
    if (n > 0) return {e, n};
  }
  return {std::numeric_limits<double>::infinity(), 0.0};
}

EpsPath Scenario::center_path(int bubble_id) const {
  auto it = center_paths.find(bubble_id);
  if (it == center_paths.end())
    fail(ErrorCode::InconsistentFamily, "unknown bubble id " + std::to_string(bubble_id));
  return it->second;
}

namespace {

std::mt19937_64 bubble_rng(unsigned seed, int salt) {
  return std::mt19937_64(0x9E3779B97F4A7C15ull * (static_cast<uint64_t>(salt) + 17) +
                         seed);
}

Vec4 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec4 v;
  do {
    for (int i = 0; i < 4; ++i) v[i] = n(rng);
  } while (v.norm() < 1e-6);
  return v.normalized();
}

bool lex_less(const Vec4& a, const Vec4& b) {
  for (int i = 0; i < 4; ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

}  // namespace

void Scenario::realize() {
  center_paths.clear();
  scale_values.clear();
  atoms.clear();

  std::map<int, const PlantedBubble*> by_id;
  for (const auto& b : planted) {
    if (by_id.count(b.id))
      fail(ErrorCode::InconsistentFamily, "duplicate bubble id");
    by_id[b.id] = &b;
  }
  // Center paths compose along parent chains.
  std::function<EpsPath(int)> path_of = [&](int id) -> EpsPath {
    auto it = center_paths.find(id);
    if (it != center_paths.end()) return it->second;
    const PlantedBubble* b = by_id.at(id);
    EpsPath p;
    if (b->parent) p = path_of(*b->parent);
    p.add_term(b->gamma, b->d0 * b->offset_dir);
    center_paths[id] = p;
    return p;
  };
  for (const auto& b : planted) {
    path_of(b.id);
    scale_values[b.id] = b.lambda0 * std::pow(epsilon, b.beta);
  }

  for (const auto& b : planted) {
    auto rng = bubble_rng(seed, b.id + 1);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double mass = b.energy / b.atom_count;
    for (int k = 0; k < b.atom_count; ++k) {
      Vec4 dir = random_unit(rng);
      double frac = std::pow(u01(rng), 0.25);  // uniform in the 4-ball
      EnergyAtom atom;
      atom.bubble_id = b.id;
      atom.mass = mass;
      atom.path = center_paths[b.id];
      atom.path.add_term(b.beta, b.lambda0 * frac * dir);
      atom.pos = atom.path.eval(epsilon);
      atoms.push_back(std::move(atom));
    }
  }
  if (background.count > 0) {
    auto rng = bubble_rng(seed, -7);
    std::uniform_real_distribution<double> u(-background.extent, background.extent);
    double mass = background.total_mass / background.count;
    for (int k = 0; k < background.count; ++k) {
      EnergyAtom atom;
      atom.bubble_id = -1;
      atom.mass = mass;
      Vec4 pos(u(rng), u(rng), u(rng), u(rng));
      atom.path.add_term(0.0, pos);
      atom.pos = pos;
      atoms.push_back(std::move(atom));
    }
  }
}

void validate_scenario(const Scenario& sc, double delta) {
  double total = 0;
  for (const auto& b : sc.planted) {
    if (!(b.energy >= delta))
      fail(ErrorCode::InconsistentFamily,
           "bubble " + std::to_string(b.id) + " energy below delta");
    if (b.atom_count < 32)
      fail(ErrorCode::InconsistentFamily, "bubble needs at least 32 atoms");
    if (b.parent && !(b.beta > b.gamma))
      fail(ErrorCode::InconsistentFamily,
           "bubble " + std::to_string(b.id) + ": scale must shrink faster than offset");
    total += b.energy;
  }
  total += sc.background.total_mass;
  if (total > sc.lambda_total + 1e-12)
    fail(ErrorCode::InconsistentFamily, "total energy exceeds the cap");
  if (sc.atoms.empty())
    fail(ErrorCode::InconsistentFamily, "scenario not realized");

  // Non-ancestral clouds must be disjoint at the evaluation epsilon.
  auto is_ancestor = [&](int a, int b) {
    std::map<int, const PlantedBubble*> by_id;
    for (const auto& p : sc.planted) by_id[p.id] = &p;
    for (std::optional<int> cur = b; cur;) {
      if (*cur == a) return true;
      cur = by_id.at(*cur)->parent;
    }
    return false;
  };
  for (const auto& a : sc.planted)
    for (const auto& b : sc.planted) {
      if (a.id >= b.id) continue;
      if (is_ancestor(a.id, b.id) || is_ancestor(b.id, a.id)) continue;
      Vec4 ca = sc.center_path(a.id).eval(sc.epsilon);
      Vec4 cb = sc.center_path(b.id).eval(sc.epsilon);
      double ra = sc.scale_values.at(a.id), rb = sc.scale_values.at(b.id);
      if ((ca - cb).norm() <= ra + rb)
        fail(ErrorCode::InconsistentFamily,
             "clouds " + std::to_string(a.id) + "/" + std::to_string(b.id) +
                 " overlap at the evaluation epsilon");
    }
}

void validate_config(const ExtractionConfig& cfg) {
  if (!(cfg.delta0 > 0) || !(cfg.delta0 <= cfg.delta))
    fail(ErrorCode::InvalidArgument, "need 0 < delta0 <= delta");
  if (!(cfg.sep_threshold > 1))
    fail(ErrorCode::InvalidArgument, "sep_threshold must exceed 1");
  if (!(cfg.halo_k >= 1)) fail(ErrorCode::InvalidArgument, "halo multiplier K >= 1");
}

namespace {

bool excluded(const Vec4& p, const std::vector<ExclusionBall>& excl) {
  for (const auto& e : excl)
    if ((p - e.center).norm() <= e.radius) return true;
  return false;
}

}  // namespace

double ball_energy(const Scenario& sc, const Vec4& p, double r,
                   const std::vector<ExclusionBall>& excl) {
  if (r < 0) fail(ErrorCode::InvalidArgument, "radius must be nonnegative");
  double acc = 0;
  for (const auto& a : sc.atoms) {
    if ((a.pos - p).norm() > r) continue;
    if (excluded(a.pos, excl)) continue;
    acc += a.mass;
  }
  return acc;
}

std::optional<ConcentrationScale> concentration_scale(
    const Scenario& sc, const Vec4& p, double delta,
    const std::vector<ExclusionBall>& excl) {
  std::vector<std::pair<double, int>> dist;
  dist.reserve(sc.atoms.size());
  for (std::size_t i = 0; i < sc.atoms.size(); ++i) {
    if (excluded(sc.atoms[i].pos, excl)) continue;
    dist.push_back({(sc.atoms[i].pos - p).norm(), static_cast<int>(i)});
  }
  std::sort(dist.begin(), dist.end());
  double acc = 0;
  for (const auto& [d, idx] : dist) {
    acc += sc.atoms[idx].mass;
    if (acc >= 0.5 * delta - 1e-15) return ConcentrationScale{d, idx};
  }
  return std::nullopt;
}

SelectedCenter select_center(const Scenario& sc, const ExtractionConfig& cfg,
                             const std::vector<ExclusionBall>& excl) {
  struct Candidate {
    Vec4 point;
    const EpsPath* path;
  };
  std::vector<Candidate> cands;
  for (const auto& a : sc.atoms) cands.push_back({a.pos, &a.path});
  std::vector<std::pair<int, EpsPath>> planted_paths;
  planted_paths.reserve(sc.planted.size());
  for (const auto& b : sc.planted) planted_paths.push_back({b.id, sc.center_path(b.id)});
  for (const auto& [id, path] : planted_paths)
    cands.push_back({path.eval(sc.epsilon), &path});

  bool found = false;
  SelectedCenter best;
  for (const auto& c : cands) {
    if (excluded(c.point, excl)) continue;
    auto s = concentration_scale(sc, c.point, cfg.delta, excl);
    if (!s || s->radius > cfg.nu) continue;
    bool better = false;
    if (!found)
      better = true;
    else if (s->radius < best.scale.value)
      better = true;
    else if (s->radius == best.scale.value && lex_less(c.point, best.point))
      better = true;
    if (better) {
      found = true;
      best.point = c.point;
      best.path = *c.path;
      best.atom_index = s->atom_index;
      best.scale.value = s->radius;
      best.scale.exponent =
          (*c.path - sc.atoms[s->atom_index].path).leading().first;
    }
  }
  if (!found)
    fail(ErrorCode::NoConcentration, "remaining energy below delta/2 at every scale");
  return best;
}

namespace {

struct RatioView {
  // dist / scale behavior as eps -> 0.
  bool diverges;
  bool vanishes;
  bool bounded;        // stays bounded above
  bool bounded_below;  // stays bounded away from zero
};

RatioView ratio_view(double dist_exp, double dist_val, const Magnitude& scale,
                     ExtractionMode mode, double thr) {
  RatioView v{};
  if (mode == ExtractionMode::limit) {
    v.diverges = dist_exp < scale.exponent;
    v.vanishes = dist_exp > scale.exponent;
    v.bounded = dist_exp >= scale.exponent;
    v.bounded_below = dist_exp <= scale.exponent;
  } else {
    double r = dist_val / scale.value;
    v.diverges = r > thr;
    v.vanishes = r < 1.0 / thr;
    v.bounded = !v.diverges;
    v.bounded_below = !v.vanishes;
  }
  return v;
}

}  // namespace

PairClass classify_pair(const BubbleRef& a, const BubbleRef& b,
                        const ExtractionConfig& cfg, double eps) {
  EpsPath diff = a.path - b.path;
  auto [de, dc] = diff.leading();
  // Coincident centers (infinite distance exponent) are still
  // classifiable through the scale comparison: a vanishing distance is
  // bounded relative to either scale. A bubble paired with itself ends
  // in the terminal failure below.
  double dval = diff.eval(eps).norm();

  RatioView va = ratio_view(de, dval, a.scale, cfg.mode, cfg.sep_threshold);
  RatioView vb = ratio_view(de, dval, b.scale, cfg.mode, cfg.sep_threshold);
  bool a_diverges_over_b, b_diverges_over_a;
  if (cfg.mode == ExtractionMode::limit) {
    a_diverges_over_b = a.scale.exponent < b.scale.exponent;
    b_diverges_over_a = b.scale.exponent < a.scale.exponent;
  } else {
    a_diverges_over_b = a.scale.value / b.scale.value > cfg.sep_threshold;
    b_diverges_over_a = b.scale.value / a.scale.value > cfg.sep_threshold;
  }

  if (va.diverges && vb.diverges) return PairClass::Separable;
  if (va.bounded && a_diverges_over_b) return PairClass::ParentOf;
  if (vb.bounded && b_diverges_over_a) return PairClass::ChildOf;
  fail(ErrorCode::InconsistentFamily,
       "pair admits no limit classification (dist exponent " + std::to_string(de) + ")");
}

bool extraction_divergence_check(const BubbleRef& prev, const BubbleRef& next,
                   const ExtractionConfig& cfg, double eps) {
  EpsPath diff = next.path - prev.path;
  auto [de, dc] = diff.leading();
  if (cfg.mode == ExtractionMode::limit)
    return next.scale.exponent < prev.scale.exponent || de < prev.scale.exponent;
  double ratio = next.scale.value / prev.scale.value +
                 diff.eval(eps).norm() / prev.scale.value;
  return ratio > cfg.sep_threshold;
}

namespace {

struct DistEntry {
  double exponent;
  double value;
  int i, j;
};

bool closer(const DistEntry& a, const DistEntry& b, ExtractionMode mode) {
  if (mode == ExtractionMode::limit) {
    if (a.exponent != b.exponent) return a.exponent > b.exponent;
    return a.value < b.value;
  }
  return a.value < b.value;
}

}  // namespace

std::vector<int> group_exotic(BubbleTree& tree, std::vector<int> members,
                              const Magnitude& parent_scale,
                              const ExtractionConfig& cfg, double eps) {
  std::sort(members.begin(), members.end());
  while (members.size() > 1) {
    // Closest pair of the current collection.
    bool have = false;
    DistEntry min_e{};
    for (std::size_t x = 0; x < members.size(); ++x)
      for (std::size_t y = x + 1; y < members.size(); ++y) {
        EpsPath d = tree.node(members[x]).center_path - tree.node(members[y]).center_path;
        auto [de, dc] = d.leading();
        DistEntry ent{de, d.eval(eps).norm(), members[x], members[y]};
        if (!have || closer(ent, min_e, cfg.mode)) {
          min_e = ent;
          have = true;
        }
      }
    // Stop once the uniform gap relative to the parent scale holds.
    RatioView rv = ratio_view(min_e.exponent, min_e.value, parent_scale, cfg.mode,
                              cfg.sep_threshold);
    if (!rv.vanishes) break;

    Magnitude mu{min_e.value, min_e.exponent};
    const EpsPath anchor_path = tree.node(min_e.i).center_path;
    std::vector<int> grouped;
    for (int m : members) {
      if (m == min_e.i) {
        grouped.push_back(m);
        continue;
      }
      EpsPath d = tree.node(m).center_path - anchor_path;
      auto [de, dc] = d.leading();
      RatioView rm = ratio_view(de, d.eval(eps).norm(), mu, cfg.mode, cfg.sep_threshold);
      if (rm.bounded) grouped.push_back(m);
    }

    BubbleNode ex;
    ex.id = static_cast<int>(tree.nodes.size());
    ex.kind = NodeKind::exotic;
    ex.center_path = anchor_path;
    ex.center = tree.node(min_e.i).center;
    ex.scale = mu;
    double cap = 0;
    for (int m : grouped) {
      cap += tree.node(m).captured_energy;
      tree.nodes[m].parent = ex.id;
      ex.children.push_back(m);
    }
    ex.captured_energy = cap;
    tree.nodes.push_back(ex);

    std::vector<int> next;
    for (int m : members)
      if (std::find(grouped.begin(), grouped.end(), m) == grouped.end())
        next.push_back(m);
    next.push_back(ex.id);
    std::sort(next.begin(), next.end());
    members = std::move(next);
  }
  return members;
}

NeckCertificate certify_neck(const Scenario& sc, const Vec4& p, double r1,
                             double r2, const ExtractionConfig& cfg) {
  if (!(r1 < r2)) fail(ErrorCode::InvalidArgument, "need r1 < r2");
  NeckCertificate cert;
  cert.r1 = r1;
  cert.r2 = r2;
  cert.ratio = r1 / r2;

  std::vector<int> annulus;
  for (std::size_t i = 0; i < sc.atoms.size(); ++i) {
    double d = (sc.atoms[i].pos - p).norm();
    if (d >= r1 && d <= r2) {
      annulus.push_back(static_cast<int>(i));
      cert.annulus_energy += sc.atoms[i].mass;
    }
    if (d >= r1 && d <= 100.0 * r1) cert.shell_atom_count++;
  }
  cert.energy_ok = cert.annulus_energy <= cfg.delta0 + 1e-15;
  cert.ratio_ok = r1 <= cfg.delta0 * r2 + 1e-15;
  cert.h3_surrogate_ok = cert.shell_atom_count <= cfg.shell_count_bound;

  // Connected components of the annulus atom graph restricted to those
  // meeting the outer shell. An empty annulus (or one with no component
  // touching the outer sphere) passes vacuously.
  cert.empty_annulus = annulus.empty();
  double edge_r = cfg.edge_radius_factor * (r2 - r1);
  std::vector<int> comp(annulus.size());
  for (std::size_t i = 0; i < annulus.size(); ++i) comp[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  for (std::size_t i = 0; i < annulus.size(); ++i)
    for (std::size_t j = i + 1; j < annulus.size(); ++j)
      if ((sc.atoms[annulus[i]].pos - sc.atoms[annulus[j]].pos).norm() <= edge_r)
        comp[find(static_cast<int>(i))] = find(static_cast<int>(j));
  std::set<int> outer_components;
  for (std::size_t i = 0; i < annulus.size(); ++i)
    if ((sc.atoms[annulus[i]].pos - p).norm() >= r2 - edge_r)
      outer_components.insert(find(static_cast<int>(i)));
  // Census: components meeting the outer shell with non-negligible mass.
  double floor_mass = cfg.component_mass_floor * cfg.delta0;
  int census = 0;
  for (int root : outer_components) {
    double mass = 0;
    for (std::size_t i = 0; i < annulus.size(); ++i)
      if (find(static_cast<int>(i)) == root) mass += sc.atoms[annulus[i]].mass;
    if (mass >= floor_mass) census++;
  }
  cert.component_count = census == 0 ? 1 : census;
  cert.component_ok = cert.component_count == 1;

  cert.passed = cert.energy_ok && cert.ratio_ok && cert.component_ok;
  std::ostringstream why;
  if (!cert.energy_ok) why << "annulus energy " << cert.annulus_energy << " above delta0; ";
  if (!cert.ratio_ok) why << "r1/r2 " << cert.ratio << " above delta0; ";
  if (!cert.component_ok) why << cert.component_count << " outer components; ";
  cert.detail = why.str();
  return cert;
}

BubbleTree build_tree(const Scenario& sc, const ExtractionConfig& cfg) {
  validate_config(cfg);
  validate_scenario(sc, cfg.delta);

  BubbleTree tree;
  std::vector<ExclusionBall> exclusions;
  std::vector<int> roots;
  std::optional<BubbleRef> prev;
  const int bound = static_cast<int>(std::ceil(2.0 * sc.lambda_total / cfg.delta));

  for (int step = 0;; ++step) {
    SelectedCenter sel;
    try {
      sel = select_center(sc, cfg, exclusions);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoConcentration) break;
      throw;
    }
    tree.extraction_count++;
    if (tree.extraction_count > bound + 1)
      fail(ErrorCode::IterationBoundExceeded,
           "extraction loop exceeded 2 Lambda / delta + 1 = " + std::to_string(bound + 1));

    BubbleNode node;
    node.id = static_cast<int>(tree.nodes.size());
    node.center = sel.point;
    node.center_path = sel.path;
    node.scale = sel.scale;
    node.captured_energy = ball_energy(sc, sel.point, sel.scale.value, exclusions);

    BubbleRef self{node.center_path, node.scale};
    ExtractionEvent ev;
    ev.step = step;
    ev.center = sel.point;
    ev.scale = sel.scale;
    ev.divergence_ok = prev ? extraction_divergence_check(*prev, self, cfg, sc.epsilon) : true;

    std::vector<int> adopted;
    for (int r : roots) {
      BubbleRef other{tree.node(r).center_path, tree.node(r).scale};
      PairClass pc = classify_pair(self, other, cfg, sc.epsilon);
      if (pc == PairClass::ParentOf)
        adopted.push_back(r);
      else if (pc == PairClass::ChildOf)
        fail(ErrorCode::InconsistentFamily,
             "smallest-first order violated: new bubble nests under an existing root");
    }

    tree.nodes.push_back(node);
    if (adopted.empty()) {
      ev.action = "root";
      roots.push_back(node.id);
    } else {
      ev.action = "adopt";
      std::vector<int> members = group_exotic(tree, adopted, node.scale, cfg, sc.epsilon);
      if (members.size() < adopted.size()) ev.action = "exotic+adopt";
      for (int m : members) {
        tree.nodes[m].parent = node.id;
        tree.nodes[node.id].children.push_back(m);
      }
      std::vector<int> next_roots;
      for (int r : roots)
        if (std::find(adopted.begin(), adopted.end(), r) == adopted.end())
          next_roots.push_back(r);
      next_roots.push_back(node.id);
      roots = std::move(next_roots);
    }
    tree.trace.push_back(ev);

    exclusions.push_back({sel.point, cfg.halo_k * sel.scale.value});
    tree.nodes.back().halo_captured =
        ball_energy(sc, sel.point, cfg.halo_k * sel.scale.value, {});
    prev = self;
  }

  // Roots must be pairwise separable.
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      BubbleRef a{tree.node(roots[i]).center_path, tree.node(roots[i]).scale};
      BubbleRef b{tree.node(roots[j]).center_path, tree.node(roots[j]).scale};
      if (classify_pair(a, b, cfg, sc.epsilon) != PairClass::Separable)
        fail(ErrorCode::InconsistentFamily, "final roots are not pairwise separable");
    }
  tree.roots = roots;

  // Kinds: exotic stays, childless nodes are leaves, roots with children
  // are roots, the rest are intermediate.
  for (auto& n : tree.nodes) {
    if (n.kind == NodeKind::exotic) continue;
    bool is_root = std::find(roots.begin(), roots.end(), n.id) != roots.end();
    if (n.children.empty())
      n.kind = NodeKind::leaf;
    else
      n.kind = is_root ? NodeKind::root : NodeKind::intermediate;
  }

  // Neck certificates: child-to-parent edges and root-to-ambient.
  for (auto& n : tree.nodes) {
    if (n.parent >= 0) {
      double r1 = cfg.halo_k * n.scale.value;
      double r2 = 0.5 * tree.node(n.parent).scale.value;
      if (r1 < r2) n.neck = certify_neck(sc, n.center, r1, r2, cfg);
    } else {
      double r1 = cfg.halo_k * n.scale.value;
      double r2 = cfg.ambient_sigma;
      if (r1 < r2) n.neck = certify_neck(sc, n.center, r1, r2, cfg);
    }
  }
  return tree;
}

namespace {

char kind_letter(NodeKind k) {
  switch (k) {
    case NodeKind::leaf: return 'L';
    case NodeKind::intermediate: return 'I';
    case NodeKind::exotic: return 'E';
    case NodeKind::root: return 'R';
  }
  return '?';
}

std::string node_canon(const BubbleTree& t, int id) {
  std::vector<std::string> kids;
  for (int c : t.node(id).children) kids.push_back(node_canon(t, c));
  std::sort(kids.begin(), kids.end());
  std::string s(1, kind_letter(t.node(id).kind));
  s += '(';
  for (const auto& k : kids) s += k;
  s += ')';
  return s;
}

std::string shape_canon(const TreeShape& sh) {
  std::vector<std::string> kids;
  for (const auto& c : sh.children) kids.push_back(shape_canon(c));
  std::sort(kids.begin(), kids.end());
  std::string s(1, kind_letter(sh.kind));
  s += '(';
  for (const auto& k : kids) s += k;
  s += ')';
  return s;
}

}  // namespace

std::string tree_canonical_string(const BubbleTree& tree) {
  std::vector<std::string> roots;
  for (int r : tree.roots) roots.push_back(node_canon(tree, r));
  std::sort(roots.begin(), roots.end());
  std::string s;
  for (const auto& r : roots) s += r + "|";
  return s;
}

std::string shape_canonical_string(const std::vector<TreeShape>& forest) {
  std::vector<std::string> roots;
  for (const auto& sh : forest) roots.push_back(shape_canon(sh));
  std::sort(roots.begin(), roots.end());
  std::string s;
  for (const auto& r : roots) s += r + "|";
  return s;
}

bool tree_isomorphic(const BubbleTree& extracted,
                     const std::vector<TreeShape>& expected) {
  return tree_canonical_string(extracted) == shape_canonical_string(expected);
}

}  // namespace cglab
