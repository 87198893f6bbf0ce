// curvature.hpp - pointwise Riemannian tensor algebra on 4d charts:
// curvature decomposition, sigma_k invariants, Bach tensor (two routes),
// identity integrands, and the conformal change of the Schouten tensor.
//
// Index conventions (fixed throughout):
//   Gamma(k,i,j)      = Gamma^k_{ij}
//   Rm(i,j,k,l)       (0,4) tensor with Rm_{ijkl} = g_{im} R^m_{jkl},
//                     R^m_{jkl} = d_k Gamma^m_{lj} - d_l Gamma^m_{kj} + ...
//   so the unit round sphere has Rm_{ijkl} = g_ik g_jl - g_il g_jk,
//   Ric = 3g and R = 12.
#pragma once

#include <array>
#include <optional>

#include "cglab/chart.hpp"
#include "cglab/tensor.hpp"

namespace cglab {

// Two Schouten-type conventions appear in the scoped formulas: the
// Weyl-Schouten tensor A = Ric - (1/6) R g and the standard Schouten
// tensor, which is half of it. sigma_k scales by 2^{-k} between them.
enum class Convention { WeylSchouten, Schouten };

struct CurvatureBundle {
  Vec4 point;
  Mat4 g;
  Mat4 ginv;
  Ten3 Gamma;
  Ten4 Rm;
  Mat4 Ric;
  double R = 0;
  Mat4 E;      // trace-free Ricci
  Ten4 W;      // Weyl
  Mat4 A_ws;   // Ric - R g / 6
  Mat4 A_std;  // (1/2) A_ws

  // Filled when gradients were requested (third derivatives of g).
  std::optional<Ten3> covE;   // covE(a,i,j) = nabla_a E_ij
  std::optional<Vec4> gradR;  // nabla_a R

  // Filled when the Bach tensor was requested (fourth derivatives of g).
  std::optional<Mat4> bach;

  double weyl_norm2() const { return norm2_rank4(W, ginv); }
  double e_norm2() const { return norm2_rank2(E, ginv); }
};

struct CurvatureOptions {
  bool want_gradients = false;
  bool want_bach = false;
};

// Christoffel symbols at p; symmetric in the two lower slots.
Ten3 christoffel(const MetricChart& chart, const Vec4& p);

CurvatureBundle curvature(const MetricChart& chart, const Vec4& p,
                          const CurvatureOptions& opts = {});

// Same pipeline on a precomputed jet (used by quadrature loops).
CurvatureBundle curvature_from_jet(const MetricJet& jet, const Vec4& p,
                                   const CurvatureOptions& opts = {});

// Eigenvalues of g^{-1} A for symmetric A and positive definite g,
// ascending. Throws SingularMetric when g fails positivity or the
// conditioning cap.
std::array<double, 4> schouten_eigenvalues(const Mat4& A, const Mat4& g,
                                           double cap = kMaxConditionNumber);

// Elementary symmetric polynomial sigma_k of the eigenvalues of g^{-1}A,
// k in 1..4.
double sigma_k(const Mat4& A, const Mat4& g, int k);
std::array<double, 4> sigma_all(const Mat4& A, const Mat4& g);

// sigma_k of the bundle's Weyl-Schouten tensor under the requested
// convention. The Schouten value is the WeylSchouten value times 2^{-k},
// exactly by construction.
double sigma_k(const CurvatureBundle& b, int k, Convention conv);

// Bach tensor assembled from divergences of the Weyl tensor,
// B_ij = nabla^k nabla^l W_{kijl} + (1/2) Ric^{kl} W_{kijl}.
Mat4 bach_tensor(const MetricChart& chart, const Vec4& p);

// Bach tensor assembled from the Laplacian-of-E form (the Bianchi
// rewrite); agrees with bach_tensor for every metric.
Mat4 bach_via_e(const MetricChart& chart, const Vec4& p);

// Pointwise integrands of the Bach-flat integral identities.
struct FlatIdentityIntegrands {
  double first_identity = 0;  // 3(|nabla E|^2 - |nabla R|^2/12) + 6 tr E^3 + R|E|^2 - 6 W E E
  // Terms of the second identity, reported separately:
  double det_wplus_72 = 0;
  double det_wminus_72 = 0;
  double neg_half_r_w2 = 0;
  double two_wee = 0;
};
FlatIdentityIntegrands bachflat_identity_integrands(const MetricChart& chart,
                                                    const Vec4& p);

// Self-dual / anti-self-dual blocks of the Weyl operator on 2-forms.
// Basis: orthonormal coframe from the Cholesky factor of g (coordinate
// orientation), 2-forms indexed lexicographically (01,02,03,12,13,23).
struct WeylSplit {
  Eigen::Matrix<double, 6, 6> op;  // full Weyl operator on 2-forms
  Eigen::Matrix3d plus;
  Eigen::Matrix3d minus;
};
WeylSplit weyl_split(const Ten4& W, const Mat4& g);

// Schouten tensor of e^{2w} g0 from the conformal transformation law:
// A = -Hess0 w + dw (x) dw - (1/2)|dw|^2 g0 + A_std(g0).
Mat4 conformal_schouten(const MetricChart& chart0, const ScalarField& w,
                        const Vec4& p);

}  // namespace cglab
