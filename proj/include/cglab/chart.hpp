// chart.hpp - coordinate patches with metric components and derivative jets.
#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "cglab/errors.hpp"
#include "cglab/tensor.hpp"

namespace cglab {

// Partial-derivative blocks of the metric, derivative axes leftmost.
// Note Eigen matrices inside std::array are NOT zeroed by value
// initialization; use the zeroed_* helpers below.
using D1 = std::array<Mat4, 4>;
using D2 = std::array<D1, 4>;
using D3 = std::array<D2, 4>;
using D4 = std::array<D3, 4>;

inline D1 zeroed_d1() {
  D1 d;
  for (auto& m : d) m.setZero();
  return d;
}
inline D2 zeroed_d2() {
  D2 d;
  for (auto& r : d)
    for (auto& m : r) m.setZero();
  return d;
}
inline D3 zeroed_d3() {
  D3 d;
  for (auto& q : d)
    for (auto& r : q)
      for (auto& m : r) m.setZero();
  return d;
}
inline D4 zeroed_d4() {
  D4 d;
  for (auto& c : d)
    for (auto& q : c)
      for (auto& r : q)
        for (auto& m : r) m.setZero();
  return d;
}

enum class DerivScheme { analytic, finite_difference };

struct Box4 {
  std::array<double, 4> lo{-1, -1, -1, -1};
  std::array<double, 4> hi{1, 1, 1, 1};

  double min_extent() const {
    double m = hi[0] - lo[0];
    for (int a = 1; a < 4; ++a) m = std::min(m, hi[a] - lo[a]);
    return m;
  }
  bool contains(const Vec4& p, double margin = 0) const {
    for (int a = 0; a < 4; ++a)
      if (p[a] < lo[a] + margin || p[a] > hi[a] - margin) return false;
    return true;
  }
  Vec4 center() const {
    Vec4 c;
    for (int a = 0; a < 4; ++a) c[a] = 0.5 * (lo[a] + hi[a]);
    return c;
  }
};

// A coordinate patch on a 4-manifold. The metric closure is mandatory;
// analytic charts must also provide first and second derivative closures.
// Third/fourth derivative closures are optional; when absent they are
// completed by finite differences of the second-derivative closure.
struct MetricChart {
  std::string name;
  Box4 domain;
  DerivScheme scheme = DerivScheme::analytic;

  std::function<Mat4(const Vec4&)> g;
  std::function<D1(const Vec4&)> dg;
  std::function<D2(const Vec4&)> d2g;
  std::function<D3(const Vec4&)> d3g;
  std::function<D4(const Vec4&)> d4g;

  // Finite-difference steps; zero means "derive from domain extent"
  // (1e-4 x extent for the second-order jet, 1e-3 x extent for the
  // third/fourth orders feeding the Bach pipeline).
  double fd_step2 = 0;
  double fd_step4 = 0;

  // Metric condition-number cap; beyond it evaluation fails as
  // SingularMetric. Quadrature charts whose coordinates collapse at a
  // measure-zero excluded set may loosen this, since near-degenerate
  // nodes carry vanishing quadrature weight.
  double condition_cap = 1e8;

  double h2() const { return fd_step2 > 0 ? fd_step2 : 1e-4 * domain.min_extent(); }
  double h4() const { return fd_step4 > 0 ? fd_step4 : 1e-3 * domain.min_extent(); }
};

// Metric jet at a point: value and symmetric partial derivatives up to
// `depth` (2, 3 or 4). Blocks above depth are unspecified and must not
// be read.
struct MetricJet {
  int depth = 2;
  Mat4 g;
  Mat4 ginv;
  D1 dg{};
  D2 d2g{};
  D3 d3g{};
  D4 d4g{};
};

// Maximum admitted metric condition number; beyond it the metric is
// rejected as singular rather than regularized.
inline constexpr double kMaxConditionNumber = 1e8;

// Throws SingularMetric unless m is positive definite with condition
// number below the cap. Returns (inverse, condition).
std::pair<Mat4, double> checked_inverse(const Mat4& m, const std::string& where,
                                        double cap = kMaxConditionNumber);

// Builds the metric jet at p. Throws PointOutsideDomain when the finite
// difference stencil would leave the domain, SingularMetric for
// non-positive-definite g(p), DerivativeUnavailable for analytic charts
// missing required closures.
MetricJet metric_jet(const MetricChart& chart, const Vec4& p, int depth);

// Positive-definiteness sweep over a sample grid plus random interior
// points; throws on the first failure.
void validate_chart(const MetricChart& chart, int grid_per_axis = 3,
                    int random_points = 32, unsigned seed = 0);

// Scalar field with two derivative levels, used for conformal factors
// and quadrature test functions.
struct ScalarField {
  std::function<double(const Vec4&)> value;
  std::function<Vec4(const Vec4&)> grad;
  std::function<Mat4(const Vec4&)> hess;
};

ScalarField scalar_const(double c);
ScalarField scalar_log_sech_axis0();
ScalarField scalar_sphere_stereo();
ScalarField scalar_gaussian(double amplitude);
// w(x) = f(|x|) from radial value/first/second derivative closures.
ScalarField scalar_radial(std::function<double(double)> f,
                          std::function<double(double)> fp,
                          std::function<double(double)> fpp);

// ---- chart zoo ----
MetricChart chart_flat(double halfwidth = 1.0);
MetricChart chart_s4_round(double radius);
MetricChart chart_s3xs1(double r3, double circle_len);
MetricChart chart_cylinder(double t_halfwidth = 8.0);
MetricChart chart_conformal(const MetricChart& base, const ScalarField& w,
                            const std::string& label);
MetricChart chart_perturbed_flat(unsigned seed, double amplitude,
                                 DerivScheme scheme = DerivScheme::analytic);
// Flat box [0,L]^4 with a small seeded trigonometric perturbation,
// periodic with period L in every coordinate.
MetricChart chart_trig_torus(double side, unsigned seed, double amplitude);

// Parses zoo names: "flat", "s4_round(r)", "s3xs1(r3,L)", "cylinder",
// "perturbed_flat(seed,amp)", "conformal(base,profile)" where profile is
// one of log_sech_t | sphere_stereo | const:<c> | gauss:<amp>.
// Throws UnknownChart for anything else.
MetricChart parse_chart(const std::string& spec);

}  // namespace cglab
