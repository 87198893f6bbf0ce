// bubble_tree.hpp - extraction of concentration bubbles from a synthetic
// curvature-energy field with a one-parameter degeneration family.
//
// The scenario encodes limits through declared epsilon-powers: every
// atom position is an exact vector polynomial in epsilon (its "path").
// Limit mode decides separability, adoption and exotic grouping by
// exponent arithmetic on those paths; numeric mode thresholds the same
// ratios at the evaluation epsilon. Both must produce the same forest.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cglab/errors.hpp"
#include "cglab/tensor.hpp"

namespace cglab {

// Vector polynomial in epsilon: sum of coeff * eps^exponent terms,
// sorted by exponent, exactly-zero coefficients dropped.
struct EpsPath {
  std::vector<std::pair<double, Vec4>> terms;

  Vec4 eval(double eps) const;
  EpsPath operator-(const EpsPath& o) const;
  void add_term(double exponent, const Vec4& coeff);
  // Leading monomial (smallest exponent with nonvanishing coefficient).
  // Zero paths report exponent +inf.
  std::pair<double, double> leading() const;  // (exponent, |coeff|)
};

// Scalar magnitude with its epsilon-exponent; `exponent` is meaningful
// only in limit mode.
struct Magnitude {
  double value = 0;
  double exponent = 0;
};

struct EnergyAtom {
  Vec4 pos;
  double mass = 0;
  int bubble_id = -1;  // -1 for background
  EpsPath path;
};

struct PlantedBubble {
  int id = 0;
  std::optional<int> parent;
  Vec4 offset_dir = Vec4::Zero();  // unit vector
  double gamma = 0;   // center offset exponent
  double d0 = 1;      // center offset coefficient
  double lambda0 = 1; // scale coefficient
  double beta = 1;    // scale exponent
  double energy = 0;
  int atom_count = 32;
};

struct BackgroundField {
  int count = 0;
  double total_mass = 0;
  double extent = 2.0;  // atoms uniform in [-extent, extent]^4
};

struct Scenario {
  std::vector<PlantedBubble> planted;
  double lambda_total = 1.0;  // energy cap
  double epsilon = 1e-3;
  unsigned seed = 0;
  BackgroundField background;

  // Derived data, filled by realize().
  std::vector<EnergyAtom> atoms;
  std::map<int, EpsPath> center_paths;
  std::map<int, double> scale_values;  // lambda_i at epsilon

  EpsPath center_path(int bubble_id) const;
  // Generates the atom field at `epsilon`. Deterministic in (seed, ids).
  void realize();
};

// Checks planted invariants: energies >= delta, beta > gamma for
// anchored bubbles, mass accounting below lambda_total, cloud
// disjointness at the evaluation epsilon. Throws InconsistentFamily.
void validate_scenario(const Scenario& sc, double delta);

enum class ExtractionMode { limit, numeric };

struct ExtractionConfig {
  double delta = 0.1;    // extraction quantum
  double delta0 = 0.1;   // neck energy bound, must be <= delta
  double halo_k = 10.0;  // exclusion-ball multiplier K
  double sep_threshold = 100.0;  // numeric-mode ratio cutoff (> 1)
  ExtractionMode mode = ExtractionMode::limit;
  double nu = 1.0;  // concentration scales beyond nu mean "no concentration"
  double ambient_sigma = 0.5;      // outer radius of root-to-ambient necks
  double edge_radius_factor = 0.25;  // annulus graph adjacency radius factor
  // A component counts toward the census only when it carries at least
  // this fraction of delta0; stray sprinkle atoms are not neck branches.
  double component_mass_floor = 0.25;
  int shell_count_bound = 64;        // surrogate density bound on [r1, 100 r1]
};

void validate_config(const ExtractionConfig& cfg);

struct ExclusionBall {
  Vec4 center;
  double radius = 0;
};

// Sum of atom masses in the closed ball B_r(p), skipping atoms inside
// any exclusion ball. Monotone nondecreasing in r.
double ball_energy(const Scenario& sc, const Vec4& p, double r,
                   const std::vector<ExclusionBall>& excl = {});

// Smallest radius at which the ball around p captures delta/2 of the
// non-excluded energy; nullopt when the remaining energy is below
// delta/2 ("no curvature concentration"). Exact selection over sorted
// atom distances. Also reports the index of the atom realizing it.
struct ConcentrationScale {
  double radius = 0;
  int atom_index = -1;
};
std::optional<ConcentrationScale> concentration_scale(
    const Scenario& sc, const Vec4& p, double delta,
    const std::vector<ExclusionBall>& excl = {});

// Argmin of the concentration scale over candidate points (atom
// positions and planted centers outside the exclusions), lexicographic
// tie-break on coordinates. Throws NoConcentration when no candidate
// has a finite scale within cfg.nu.
struct SelectedCenter {
  Vec4 point;
  EpsPath path;
  Magnitude scale;
  int atom_index = -1;  // atom realizing the scale
};
SelectedCenter select_center(const Scenario& sc, const ExtractionConfig& cfg,
                             const std::vector<ExclusionBall>& excl);

enum class PairClass { Separable, ParentOf, ChildOf };

struct BubbleRef {
  EpsPath path;
  Magnitude scale;
};

// Classifies bubble a against bubble b: Separable when dist/scale
// diverges both ways, ParentOf when b nests inside a (dist bounded by
// a's scale, a's scale diverges relative to b's), ChildOf for the
// mirror case. Throws InconsistentFamily for degenerate pairs.
PairClass classify_pair(const BubbleRef& a, const BubbleRef& b,
                        const ExtractionConfig& cfg, double eps);

// Divergence check between consecutive extractions:
// scale2/scale1 + dist/scale1 must blow up as epsilon -> 0.
bool extraction_divergence_check(const BubbleRef& prev, const BubbleRef& next,
                   const ExtractionConfig& cfg, double eps);

enum class NodeKind { leaf, intermediate, exotic, root };

struct NeckCertificate {
  double r1 = 0, r2 = 0;
  double annulus_energy = 0;
  double ratio = 0;  // r1 / r2
  int component_count = 1;
  bool empty_annulus = false;
  int shell_atom_count = 0;
  bool h3_surrogate_ok = true;  // count-density surrogate, reported only
  bool energy_ok = false, ratio_ok = false, component_ok = false;
  bool passed = false;
  std::string detail;
};

struct BubbleNode {
  int id = -1;
  NodeKind kind = NodeKind::leaf;
  Vec4 center = Vec4::Zero();
  EpsPath center_path;
  Magnitude scale;
  double captured_energy = 0;
  double halo_captured = 0;
  std::vector<int> children;
  int parent = -1;
  std::optional<NeckCertificate> neck;  // edge to parent, or to ambient for roots
};

struct ExtractionEvent {
  int step = 0;
  Vec4 center;
  Magnitude scale;
  std::string action;  // "root", "adopt", "exotic", "stop"
  bool divergence_ok = true;
};

struct BubbleTree {
  std::vector<BubbleNode> nodes;
  std::vector<int> roots;
  std::vector<ExtractionEvent> trace;
  int extraction_count = 0;

  const BubbleNode& node(int id) const { return nodes.at(id); }
};

// Iterated grouping of mutually-close bubbles under a candidate parent
// scale: repeatedly merges the closest cluster into an exotic node until
// the collection keeps a uniform gap relative to parent_scale. Node ids
// in `members` refer to `tree`; returns the reduced member list.
std::vector<int> group_exotic(BubbleTree& tree, std::vector<int> members,
                              const Magnitude& parent_scale,
                              const ExtractionConfig& cfg, double eps);

NeckCertificate certify_neck(const Scenario& sc, const Vec4& p, double r1,
                             double r2, const ExtractionConfig& cfg);

// The full iterative extraction. Throws IterationBoundExceeded when the
// loop outruns 2 Lambda / delta + 1, InconsistentFamily on degenerate
// classifications.
BubbleTree build_tree(const Scenario& sc, const ExtractionConfig& cfg);

// Expected-shape oracle trees for isomorphism checks.
struct TreeShape {
  NodeKind kind = NodeKind::leaf;
  std::vector<TreeShape> children;
};

// Rooted-forest isomorphism ignoring centers and scales: matches
// parent/child structure and the multiset of node kinds.
bool tree_isomorphic(const BubbleTree& extracted,
                     const std::vector<TreeShape>& expected);

std::string tree_canonical_string(const BubbleTree& tree);
std::string shape_canonical_string(const std::vector<TreeShape>& forest);

}  // namespace cglab
