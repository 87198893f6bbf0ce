// functionals.hpp - global integrals over closed model 4-manifolds by
// product Gauss-Legendre quadrature on a weighted chart atlas.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cglab/chart.hpp"
#include "cglab/curvature.hpp"

namespace cglab {

// Nodes and weights of the n-point Gauss-Legendre rule on [-1,1],
// computed from the Jacobi matrix and cached per n.
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const QuadRule& gauss_legendre(int n);

struct ModelChart {
  MetricChart chart;
  Box4 box;  // integration box, may be smaller than the chart domain
  std::function<double(const Vec4&)> weight;  // partition-of-unity factor
};

struct ClosedModel {
  std::string name;
  std::vector<ModelChart> charts;
  int euler_char = 0;
  int n_q = 24;  // Gauss-Legendre nodes per axis
  double expected_volume = -1;  // closed form when available
};

// Built-in models. The spherical models use a single global algebraic
// chart (cosine suspension coordinate over Hopf coordinates); the metric
// is rational, the volume density polynomial, and interior quadrature
// nodes never touch the excluded measure-zero set.
ClosedModel model_s4(double radius = 1.0);
ClosedModel model_flat_torus(double side);
ClosedModel model_s3xs1(double r3, double circle_len);
// Round S4 conformally rescaled by exp(2w), w a polynomial in the
// polar-axis embedding coordinate; used for conformal-invariance checks.
ClosedModel model_s4_conformal(double a);
// Flat torus with a small seeded trigonometric perturbation (chi = 0).
ClosedModel model_perturbed_torus(double side, unsigned seed, double amplitude);

ClosedModel parse_model(const std::string& spec);

// Validates chart positivity, chart weights, and (when a closed form is
// recorded) the computed volume.
void validate_model(const ClosedModel& model, double vol_tol = 1e-9);

// Integral of f dvol; f sees the curvature bundle at each node.
// Deterministic for fixed n_q: per-chart nodes are summed in a fixed
// order (Kahan-compensated), threads only fill independent slots.
using BundleFunctional = std::function<double(const CurvatureBundle&)>;
double integrate_scalar(const ClosedModel& model, const BundleFunctional& f);

// One bundle evaluation per node shared across several functionals.
std::vector<double> integrate_bundle(const ClosedModel& model,
                                     const std::vector<BundleFunctional>& fs);

struct GaussBonnetReport {
  double lhs = 0;         // 8 pi^2 chi
  double weyl_term = 0;   // integral of |W|^2 / 4
  double sigma2_term = 0; // integral of sigma_2(A_ws)
  double volume = 0;
  double residual = 0;          // |lhs - weyl_term - sigma2_term|
  double residual_relative = 0; // residual / max(|lhs|, terms, 1)
};
GaussBonnetReport gauss_bonnet_check(const ClosedModel& model);

// Test function on a model, given per-chart closures.
struct ModelScalarField {
  std::vector<ScalarField> per_chart;
};
ModelScalarField model_field_const(const ClosedModel& m, double c);
// First spherical harmonic (polar-axis embedding coordinate) on the
// two-chart S4 model.
ModelScalarField model_field_z_axis(const ClosedModel& m);

struct SobolevReport {
  double lhs = 0;  // Y (int u^4)^{1/2}
  double rhs = 0;  // 6 int |grad u|^2 + int R u^2
  bool satisfied = false;
};
SobolevReport sobolev_yamabe_check(const ClosedModel& model,
                                   const ModelScalarField& u, double yamabe_const);

// Yamabe constant of the round 4-sphere, vol^{-1/2} * total scalar
// curvature of the unit sphere: 12 sqrt(8 pi^2 / 3).
double yamabe_constant_s4();

struct MassBounds {
  double a0 = 0;
  double r_min = 0;
  double r_max = 12.0;
  double e_budget = 0;
};
// Scalar-curvature and traceless-Ricci budgets implied by a lower bound
// a0 on the sigma_2 mass at normalized volume. Requires 0 < a0 <= 16 pi^2.
MassBounds bounds_from_mass(double a0);

struct VolumeGrowthRow {
  double r = 0;         // coordinate radius
  double s = 0;         // geodesic radius
  double vol = 0;       // volume of the geodesic ball
  double ratio = 0;     // vol / s^4
};
// Radial conformal factor w(r) on flat R^4; reports geodesic radii,
// ball volumes and the vol/s^4 envelope at the given increasing radii.
std::vector<VolumeGrowthRow> volume_growth_radial(
    const std::function<double(double)>& w, const std::vector<double>& radii,
    int panels_per_unit = 64);

}  // namespace cglab
