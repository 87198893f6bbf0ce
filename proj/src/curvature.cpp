// curvature.cpp - the metric-jet curvature pipeline.
//
// All quantities are evaluated from a single symmetric derivative jet of
// the metric at the point. Partial-derivative levels of each intermediate
// are carried explicitly (value, d, d^2, ...), so both Bach routes see
// the same jet and the Bianchi-based identities hold to rounding error
// regardless of how accurate the jet itself is.

#include "cglab/curvature.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace cglab {

namespace {

using GammaLevel = std::array<Mat4, 4>;  // [k](i,j) = Gamma^k_{ij}

struct Pipeline {
  const MetricJet& jet;
  int depth;  // derivative levels carried beyond the plain bundle (0..2)

  Mat4 V0;
  D1 V1{};
  D2 V2{};
  D3 V3{};

  GammaLevel Gam0{};
  std::array<GammaLevel, 4> Gam1{};
  std::array<std::array<GammaLevel, 4>, 4> Gam2{};
  std::array<std::array<std::array<GammaLevel, 4>, 4>, 4> Gam3{};

  Ten4 Rup0;
  std::array<Ten4, 4> Rup1{};
  std::array<std::array<Ten4, 4>, 4> Rup2{};

  Ten4 Rlow0;
  Mat4 Ric0;
  std::array<Mat4, 4> Ric1{};
  std::array<std::array<Mat4, 4>, 4> Ric2{};
  double R0 = 0;
  Vec4 R1 = Vec4::Zero();
  Mat4 R2 = Mat4::Zero();  // partial (not covariant) second derivatives

  Mat4 E0, A0;
  std::array<Mat4, 4> E1{}, A1{};
  std::array<std::array<Mat4, 4>, 4> E2{}, A2{};

  Ten4 W0;
  std::array<Ten4, 4> W1{};
  std::array<std::array<Ten4, 4>, 4> W2{};

  explicit Pipeline(const MetricJet& j) : jet(j) {
    depth = std::max(0, jet.depth - 2);
    build_inverse();
    build_gamma();
    build_riemann();
    build_ricci_scalar();
    build_decomposition();
  }

  void build_inverse() {
    V0 = jet.ginv;
    for (int a = 0; a < 4; ++a) V1[a] = -V0 * jet.dg[a] * V0;
    if (depth < 1) return;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        V2[a][b] = -(V1[b] * jet.dg[a] * V0 + V0 * jet.d2g[a][b] * V0 +
                     V0 * jet.dg[a] * V1[b]);
    if (depth < 2) return;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c)
          V3[a][b][c] = -(V2[b][c] * jet.dg[a] * V0 + V1[b] * jet.d2g[a][c] * V0 +
                          V1[b] * jet.dg[a] * V1[c] + V1[c] * jet.d2g[a][b] * V0 +
                          V0 * jet.d3g[a][b][c] * V0 + V0 * jet.d2g[a][b] * V1[c] +
                          V1[c] * jet.dg[a] * V1[b] + V0 * jet.d2g[a][c] * V1[b] +
                          V0 * jet.dg[a] * V2[b][c]);
  }

  // S_l(i,j) = d_i g_jl + d_j g_il - d_l g_ij and its derivative levels.
  Mat4 S0(int l) const {
    Mat4 s;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        s(i, j) = jet.dg[i](j, l) + jet.dg[j](i, l) - jet.dg[l](i, j);
    return s;
  }
  Mat4 S1(int a, int l) const {
    Mat4 s;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        s(i, j) = jet.d2g[a][i](j, l) + jet.d2g[a][j](i, l) - jet.d2g[a][l](i, j);
    return s;
  }
  Mat4 S2(int a, int b, int l) const {
    Mat4 s;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        s(i, j) = jet.d3g[a][b][i](j, l) + jet.d3g[a][b][j](i, l) -
                  jet.d3g[a][b][l](i, j);
    return s;
  }
  Mat4 S3(int a, int b, int c, int l) const {
    Mat4 s;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        s(i, j) = jet.d4g[a][b][c][i](j, l) + jet.d4g[a][b][c][j](i, l) -
                  jet.d4g[a][b][c][l](i, j);
    return s;
  }

  void build_gamma() {
    std::array<Mat4, 4> s0;
    std::array<std::array<Mat4, 4>, 4> s1;
    for (int l = 0; l < 4; ++l) s0[l] = S0(l);
    for (int a = 0; a < 4; ++a)
      for (int l = 0; l < 4; ++l) s1[a][l] = S1(a, l);
    for (int k = 0; k < 4; ++k) {
      Gam0[k].setZero();
      for (int l = 0; l < 4; ++l) Gam0[k] += 0.5 * V0(k, l) * s0[l];
    }
    for (int a = 0; a < 4; ++a)
      for (int k = 0; k < 4; ++k) {
        Gam1[a][k].setZero();
        for (int l = 0; l < 4; ++l)
          Gam1[a][k] += 0.5 * (V1[a](k, l) * s0[l] + V0(k, l) * s1[a][l]);
      }
    if (depth < 1) return;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int k = 0; k < 4; ++k) {
          Gam2[a][b][k].setZero();
          for (int l = 0; l < 4; ++l)
            Gam2[a][b][k] +=
                0.5 * (V2[a][b](k, l) * S0(l) + V1[a](k, l) * S1(b, l) +
                       V1[b](k, l) * S1(a, l) + V0(k, l) * S2(a, b, l));
        }
    if (depth < 2) return;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c)
          for (int k = 0; k < 4; ++k) {
            Gam3[a][b][c][k].setZero();
            for (int l = 0; l < 4; ++l)
              Gam3[a][b][c][k] +=
                  0.5 * (V3[a][b][c](k, l) * S0(l) + V2[a][b](k, l) * S1(c, l) +
                         V2[a][c](k, l) * S1(b, l) + V2[b][c](k, l) * S1(a, l) +
                         V1[a](k, l) * S2(b, c, l) + V1[b](k, l) * S2(a, c, l) +
                         V1[c](k, l) * S2(a, b, l) + V0(k, l) * S3(a, b, c, l));
          }
  }

  void build_riemann() {
    for (int m = 0; m < 4; ++m)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            double v = Gam1[k][m](l, j) - Gam1[l][m](k, j);
            for (int n = 0; n < 4; ++n)
              v += Gam0[m](k, n) * Gam0[n](l, j) - Gam0[m](l, n) * Gam0[n](k, j);
            Rup0(m, j, k, l) = v;
          }
    if (depth >= 1)
      for (int a = 0; a < 4; ++a)
        for (int m = 0; m < 4; ++m)
          for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
              for (int l = 0; l < 4; ++l) {
                double v = Gam2[a][k][m](l, j) - Gam2[a][l][m](k, j);
                for (int n = 0; n < 4; ++n)
                  v += Gam1[a][m](k, n) * Gam0[n](l, j) +
                       Gam0[m](k, n) * Gam1[a][n](l, j) -
                       Gam1[a][m](l, n) * Gam0[n](k, j) -
                       Gam0[m](l, n) * Gam1[a][n](k, j);
                Rup1[a](m, j, k, l) = v;
              }
    if (depth >= 2)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          for (int m = 0; m < 4; ++m)
            for (int j = 0; j < 4; ++j)
              for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) {
                  double v = Gam3[a][b][k][m](l, j) - Gam3[a][b][l][m](k, j);
                  for (int n = 0; n < 4; ++n) {
                    v += Gam2[a][b][m](k, n) * Gam0[n](l, j) +
                         Gam1[a][m](k, n) * Gam1[b][n](l, j) +
                         Gam1[b][m](k, n) * Gam1[a][n](l, j) +
                         Gam0[m](k, n) * Gam2[a][b][n](l, j);
                    v -= Gam2[a][b][m](l, n) * Gam0[n](k, j) +
                         Gam1[a][m](l, n) * Gam1[b][n](k, j) +
                         Gam1[b][m](l, n) * Gam1[a][n](k, j) +
                         Gam0[m](l, n) * Gam2[a][b][n](k, j);
                  }
                  Rup2[a][b](m, j, k, l) = v;
                }
  }

  void build_ricci_scalar() {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            double v = 0;
            for (int m = 0; m < 4; ++m) v += jet.g(i, m) * Rup0(m, j, k, l);
            Rlow0(i, j, k, l) = v;
          }
    Ric0.setZero();
    for (int j = 0; j < 4; ++j)
      for (int l = 0; l < 4; ++l)
        for (int m = 0; m < 4; ++m) Ric0(j, l) += Rup0(m, j, m, l);
    Ric0 = 0.5 * (Ric0 + Ric0.transpose());
    R0 = (V0 * Ric0).trace();
    if (depth >= 1) {
      for (int a = 0; a < 4; ++a) {
        Ric1[a].setZero();
        for (int j = 0; j < 4; ++j)
          for (int l = 0; l < 4; ++l)
            for (int m = 0; m < 4; ++m) Ric1[a](j, l) += Rup1[a](m, j, m, l);
        R1[a] = (V1[a] * Ric0).trace() + (V0 * Ric1[a]).trace();
      }
    }
    if (depth >= 2) {
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          Ric2[a][b].setZero();
          for (int j = 0; j < 4; ++j)
            for (int l = 0; l < 4; ++l)
              for (int m = 0; m < 4; ++m) Ric2[a][b](j, l) += Rup2[a][b](m, j, m, l);
          R2(a, b) = (V2[a][b] * Ric0).trace() + (V1[a] * Ric1[b]).trace() +
                     (V1[b] * Ric1[a]).trace() + (V0 * Ric2[a][b]).trace();
        }
    }
  }

  void build_decomposition() {
    E0 = Ric0 - 0.25 * R0 * jet.g;
    A0 = Ric0 - (R0 / 6.0) * jet.g;
    W0 = Rlow0 - 0.5 * kulkarni_nomizu(A0, jet.g);
    if (depth >= 1)
      for (int a = 0; a < 4; ++a) {
        E1[a] = Ric1[a] - 0.25 * (R1[a] * jet.g + R0 * jet.dg[a]);
        A1[a] = Ric1[a] - (R1[a] * jet.g + R0 * jet.dg[a]) / 6.0;
      }
    if (depth >= 2)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          Mat4 rgg = R2(a, b) * jet.g + R1[a] * jet.dg[b] + R1[b] * jet.dg[a] +
                     R0 * jet.d2g[a][b];
          E2[a][b] = Ric2[a][b] - 0.25 * rgg;
          A2[a][b] = Ric2[a][b] - rgg / 6.0;
        }
    // The Weyl jet is only needed for the Bach pipeline.
    if (depth >= 2) {
      for (int a = 0; a < 4; ++a) {
        Ten4 lhs = Rlow1(a);
        W1[a] = lhs - 0.5 * (kulkarni_nomizu(A1[a], jet.g) +
                             kulkarni_nomizu(A0, jet.dg[a]));
      }
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          Ten4 lhs = Rlow2(a, b);
          W2[a][b] = lhs - 0.5 * (kulkarni_nomizu(A2[a][b], jet.g) +
                                  kulkarni_nomizu(A1[a], jet.dg[b]) +
                                  kulkarni_nomizu(A1[b], jet.dg[a]) +
                                  kulkarni_nomizu(A0, jet.d2g[a][b]));
        }
    }
  }

  Ten4 Rlow1(int a) const {
    Ten4 t;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            double v = 0;
            for (int m = 0; m < 4; ++m)
              v += jet.dg[a](i, m) * Rup0(m, j, k, l) +
                   jet.g(i, m) * Rup1[a](m, j, k, l);
            t(i, j, k, l) = v;
          }
    return t;
  }
  Ten4 Rlow2(int a, int b) const {
    Ten4 t;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            double v = 0;
            for (int m = 0; m < 4; ++m)
              v += jet.d2g[a][b](i, m) * Rup0(m, j, k, l) +
                   jet.dg[a](i, m) * Rup1[b](m, j, k, l) +
                   jet.dg[b](i, m) * Rup1[a](m, j, k, l) +
                   jet.g(i, m) * Rup2[a][b](m, j, k, l);
            t(i, j, k, l) = v;
          }
    return t;
  }

  // Covariant derivative of a symmetric 2-tensor field given its
  // partial-derivative levels.
  Ten3 cov1_sym2(const Mat4& T, const std::array<Mat4, 4>& dT) const {
    Ten3 c;
    for (int a = 0; a < 4; ++a)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          double v = dT[a](i, j);
          for (int m = 0; m < 4; ++m)
            v -= Gam0[m](a, i) * T(m, j) + Gam0[m](a, j) * T(i, m);
          c(a, i, j) = v;
        }
    return c;
  }

  // nabla_b nabla_a of a symmetric 2-tensor, contracted against ginv to
  // give the rough Laplacian.
  Mat4 laplacian_sym2(const Mat4& T, const std::array<Mat4, 4>& dT,
                      const std::array<std::array<Mat4, 4>, 4>& d2T) const {
    Ten3 c1 = cov1_sym2(T, dT);
    Mat4 lap = Mat4::Zero();
    for (int b = 0; b < 4; ++b)
      for (int a = 0; a < 4; ++a) {
        double vab = V0(b, a);
        if (vab == 0) continue;
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) {
            // d_b (nabla_a T)_{ij}
            double v = d2T[a][b](i, j);
            for (int m = 0; m < 4; ++m)
              v -= Gam1[b][m](a, i) * T(m, j) + Gam0[m](a, i) * dT[b](m, j) +
                   Gam1[b][m](a, j) * T(i, m) + Gam0[m](a, j) * dT[b](i, m);
            // connection corrections on (a, i, j)
            for (int m = 0; m < 4; ++m)
              v -= Gam0[m](b, a) * c1(m, i, j) + Gam0[m](b, i) * c1(a, m, j) +
                   Gam0[m](b, j) * c1(a, i, m);
            lap(i, j) += vab * v;
          }
      }
    return lap;
  }

  // Covariant Hessian of the scalar curvature.
  Mat4 hessian_R() const {
    Mat4 h;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        double v = R2(a, b);
        for (int m = 0; m < 4; ++m) v -= Gam0[m](a, b) * R1[m];
        h(a, b) = v;
      }
    return 0.5 * (h + h.transpose());
  }

  // nabla_a W_{ijkl} and its partial derivative, then the doubly
  // contracted second covariant derivative of W feeding the Bach tensor.
  Mat4 bach_from_weyl() const {
    Ten5 cw1;
    for (int a = 0; a < 4; ++a)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 4; ++l) {
              double v = W1[a](i, j, k, l);
              for (int m = 0; m < 4; ++m)
                v -= Gam0[m](a, i) * W0(m, j, k, l) +
                     Gam0[m](a, j) * W0(i, m, k, l) +
                     Gam0[m](a, k) * W0(i, j, m, l) +
                     Gam0[m](a, l) * W0(i, j, k, m);
              cw1(a, i, j, k, l) = v;
            }

    auto d_cw1 = [&](int b, int a, int i, int j, int k, int l) {
      double v = W2[a][b](i, j, k, l);
      for (int m = 0; m < 4; ++m)
        v -= Gam1[b][m](a, i) * W0(m, j, k, l) + Gam0[m](a, i) * W1[b](m, j, k, l) +
             Gam1[b][m](a, j) * W0(i, m, k, l) + Gam0[m](a, j) * W1[b](i, m, k, l) +
             Gam1[b][m](a, k) * W0(i, j, m, l) + Gam0[m](a, k) * W1[b](i, j, m, l) +
             Gam1[b][m](a, l) * W0(i, j, k, m) + Gam0[m](a, l) * W1[b](i, j, k, m);
      return v;
    };

    // B_ij = g^{kb} g^{la} nabla_b nabla_a W_{kijl} + (1/2) Ric^{kl} W_{kijl}
    Mat4 B = Mat4::Zero();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double acc = 0;
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l)
            for (int a = 0; a < 4; ++a)
              for (int b = 0; b < 4; ++b) {
                double w = V0(k, b) * V0(l, a);
                if (w == 0) continue;
                double v = d_cw1(b, a, k, i, j, l);
                for (int m = 0; m < 4; ++m)
                  v -= Gam0[m](b, a) * cw1(m, k, i, j, l) +
                       Gam0[m](b, k) * cw1(a, m, i, j, l) +
                       Gam0[m](b, i) * cw1(a, k, m, j, l) +
                       Gam0[m](b, j) * cw1(a, k, i, m, l) +
                       Gam0[m](b, l) * cw1(a, k, i, j, m);
                acc += w * v;
              }
        B(i, j) = acc;
      }
    Mat4 ric_up = V0 * Ric0 * V0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double v = 0;
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) v += ric_up(k, l) * W0(k, i, j, l);
        B(i, j) += 0.5 * v;
      }
    return B;
  }

  Mat4 bach_from_e() const {
    Mat4 lapE = laplacian_sym2(E0, E1, E2);
    Mat4 hessR = hessian_R();
    double lapR = (V0 * hessR).trace();
    Mat4 Eup = V0 * E0 * V0;
    double e2 = (Eup * E0).trace();

    Mat4 B = -0.5 * lapE + (1.0 / 6.0) * hessR - (lapR / 24.0) * jet.g;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double v = 0;
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) v += Eup(k, l) * W0(i, k, j, l);
        B(i, j) -= v;
      }
    B += E0 * V0 * E0;
    B -= 0.25 * e2 * jet.g;
    B += (R0 / 6.0) * E0;
    return B;
  }
};

}  // namespace

Ten3 christoffel(const MetricChart& chart, const Vec4& p) {
  MetricJet jet = metric_jet(chart, p, 1);
  Mat4 V = jet.ginv;
  Ten3 gam;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double v = 0;
        for (int l = 0; l < 4; ++l)
          v += 0.5 * V(k, l) *
               (jet.dg[i](j, l) + jet.dg[j](i, l) - jet.dg[l](i, j));
        gam(k, i, j) = v;
      }
  return gam;
}

CurvatureBundle curvature_from_jet(const MetricJet& jet, const Vec4& p,
                                   const CurvatureOptions& opts) {
  if (jet.depth < 2)
    fail(ErrorCode::InvalidArgument, "curvature needs a jet of depth >= 2");
  if (opts.want_bach && jet.depth < 4)
    fail(ErrorCode::InvalidArgument, "bach needs a jet of depth 4");
  Pipeline pl(jet);
  CurvatureBundle b;
  b.point = p;
  b.g = jet.g;
  b.ginv = jet.ginv;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) b.Gamma(k, i, j) = pl.Gam0[k](i, j);
  b.Rm = pl.Rlow0;
  b.Ric = pl.Ric0;
  b.R = pl.R0;
  b.E = pl.E0;
  b.A_ws = pl.A0;
  b.A_std = 0.5 * pl.A0;
  b.W = pl.W0;
  if (opts.want_gradients || opts.want_bach) {
    b.covE = pl.cov1_sym2(pl.E0, pl.E1);
    b.gradR = pl.R1;
  }
  if (opts.want_bach) b.bach = pl.bach_from_weyl();
  return b;
}

CurvatureBundle curvature(const MetricChart& chart, const Vec4& p,
                          const CurvatureOptions& opts) {
  int depth = opts.want_bach ? 4 : (opts.want_gradients ? 3 : 2);
  MetricJet jet = metric_jet(chart, p, depth);
  return curvature_from_jet(jet, p, opts);
}

std::array<double, 4> schouten_eigenvalues(const Mat4& A, const Mat4& g,
                                           double cap) {
  (void)checked_inverse(g, "schouten_eigenvalues", cap);
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat4> es(
      0.5 * (A + A.transpose()), g);
  std::array<double, 4> ev;
  for (int i = 0; i < 4; ++i) ev[i] = es.eigenvalues()[i];
  return ev;
}

namespace {

std::array<double, 4> elementary_from(const std::array<double, 4>& ev) {
  double e1 = 0, e2 = 0, e3 = 0, e4 = 1;
  for (double l : ev) e1 += l;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) e2 += ev[i] * ev[j];
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k) e3 += ev[i] * ev[j] * ev[k];
  for (double l : ev) e4 *= l;
  return {e1, e2, e3, e4};
}

}  // namespace

std::array<double, 4> sigma_all(const Mat4& A, const Mat4& g) {
  return elementary_from(schouten_eigenvalues(A, g));
}

double sigma_k(const Mat4& A, const Mat4& g, int k) {
  if (k < 1 || k > 4) fail(ErrorCode::InvalidArgument, "sigma_k needs k in 1..4");
  return sigma_all(A, g)[k - 1];
}

double sigma_k(const CurvatureBundle& b, int k, Convention conv) {
  if (k < 1 || k > 4) fail(ErrorCode::InvalidArgument, "sigma_k needs k in 1..4");
  // The bundle's metric already passed its chart's conditioning policy;
  // no cap re-check here.
  auto ev = schouten_eigenvalues(b.A_ws, b.g,
                                 std::numeric_limits<double>::infinity());
  double s = elementary_from(ev)[k - 1];
  if (conv == Convention::Schouten) s *= std::pow(0.5, k);
  return s;
}

Mat4 bach_tensor(const MetricChart& chart, const Vec4& p) {
  MetricJet jet = metric_jet(chart, p, 4);
  Pipeline pl(jet);
  return pl.bach_from_weyl();
}

Mat4 bach_via_e(const MetricChart& chart, const Vec4& p) {
  MetricJet jet = metric_jet(chart, p, 4);
  Pipeline pl(jet);
  return pl.bach_from_e();
}

FlatIdentityIntegrands bachflat_identity_integrands(const MetricChart& chart,
                                                    const Vec4& p) {
  MetricJet jet = metric_jet(chart, p, 3);
  Pipeline pl(jet);

  FlatIdentityIntegrands out;
  const Mat4& g = jet.g;
  const Mat4& V = jet.ginv;

  Ten3 covE = pl.cov1_sym2(pl.E0, pl.E1);
  double grad_e2 = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if (V(a, b) == 0) continue;
      double s = 0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 4; ++l)
              s += V(i, k) * V(j, l) * covE(a, i, j) * covE(b, k, l);
      grad_e2 += V(a, b) * s;
    }
  double grad_r2 = pl.R1.dot(V * pl.R1);

  Mat4 Emix = V * pl.E0;  // E^i_j
  double trE3 = (Emix * Emix * Emix).trace();
  double e2 = (Emix * Emix).trace();
  Mat4 Eup = V * pl.E0 * V;
  double wee = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          wee += pl.W0(i, j, k, l) * Eup(i, k) * Eup(j, l);

  out.first_identity = 3.0 * (grad_e2 - grad_r2 / 12.0) + 6.0 * trE3 + pl.R0 * e2 - 6.0 * wee;

  WeylSplit split = weyl_split(pl.W0, g);
  double w2 = norm2_rank4(pl.W0, V);
  out.det_wplus_72 = 72.0 * split.plus.determinant();
  out.det_wminus_72 = 72.0 * split.minus.determinant();
  out.neg_half_r_w2 = -0.5 * pl.R0 * w2;
  out.two_wee = 2.0 * wee;
  return out;
}

WeylSplit weyl_split(const Ten4& W, const Mat4& g) {
  // Orthonormal coframe from the Cholesky factor; keeps the coordinate
  // orientation since the factor has positive diagonal.
  Eigen::LLT<Mat4> llt(g);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::SingularMetric, "weyl_split: Cholesky failed");
  Mat4 L = llt.matrixL();
  Mat4 M = L.transpose().inverse();  // frame vectors as columns

  Ten4 Won;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          double v = 0;
          for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
              for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l)
                  v += W(i, j, k, l) * M(i, a) * M(j, b) * M(k, c) * M(l, d);
          Won(a, b, c, d) = v;
        }

  static const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  WeylSplit out;
  for (int P = 0; P < 6; ++P)
    for (int Q = 0; Q < 6; ++Q)
      out.op(P, Q) = Won(pairs[P][0], pairs[P][1], pairs[Q][0], pairs[Q][1]);

  // Self-dual basis (e01+e23, e02-e13, e03+e12)/sqrt2 and the
  // anti-self-dual complement.
  Eigen::Matrix<double, 6, 3> up = Eigen::Matrix<double, 6, 3>::Zero();
  Eigen::Matrix<double, 6, 3> um = Eigen::Matrix<double, 6, 3>::Zero();
  const double s = 1.0 / std::sqrt(2.0);
  up(0, 0) = s; up(5, 0) = s;
  up(1, 1) = s; up(4, 1) = -s;
  up(2, 2) = s; up(3, 2) = s;
  um(0, 0) = s; um(5, 0) = -s;
  um(1, 1) = s; um(4, 1) = s;
  um(2, 2) = s; um(3, 2) = -s;
  out.plus = up.transpose() * out.op * up;
  out.minus = um.transpose() * out.op * um;
  return out;
}

Mat4 conformal_schouten(const MetricChart& chart0, const ScalarField& w,
                        const Vec4& p) {
  CurvatureBundle base = curvature(chart0, p);
  Vec4 wg = w.grad(p);
  Mat4 wh = w.hess(p);

  Mat4 hess;  // covariant Hessian of w in the base metric
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double v = wh(i, j);
      for (int m = 0; m < 4; ++m) v -= base.Gamma(m, i, j) * wg[m];
      hess(i, j) = v;
    }
  double grad2 = wg.dot(base.ginv * wg);
  return Mat4(-hess + wg * wg.transpose() - 0.5 * grad2 * base.g + base.A_std);
}

}  // namespace cglab
