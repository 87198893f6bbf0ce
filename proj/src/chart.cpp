// chart.cpp - metric jets, chart validation and the built-in chart zoo.

#include "cglab/chart.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <unordered_map>
#include <vector>

namespace cglab {

std::pair<Mat4, double> checked_inverse(const Mat4& m, const std::string& where,
                                        double cap) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(m);
  const auto& ev = es.eigenvalues();
  if (!(ev[0] > 0))
    fail(ErrorCode::SingularMetric, where + ": metric not positive definite");
  double cond = ev[3] / ev[0];
  if (cond > cap)
    fail(ErrorCode::SingularMetric,
         where + ": condition number " + std::to_string(cond) + " too large");
  return {m.inverse(), cond};
}

namespace {

// Weights of the m-fold composition of the central first difference with
// step h: offsets 2k-m for k=0..m. Composing a single operator keeps
// mixed discrete derivatives exactly symmetric in their axes.
std::vector<std::pair<int, double>> stencil_1d(int m, double h) {
  std::vector<std::pair<int, double>> s;
  if (m == 0) {
    s.push_back({0, 1.0});
    return s;
  }
  double binom = 1.0;
  for (int k = 0; k <= m; ++k) {
    double w = binom * ((m - k) % 2 == 0 ? 1.0 : -1.0) / std::pow(2.0 * h, m);
    s.push_back({2 * k - m, w});
    binom = binom * (m - k) / (k + 1);
  }
  return s;
}

uint64_t offset_key(const std::array<int, 4>& o) {
  uint64_t k = 0;
  for (int a = 0; a < 4; ++a) k = (k << 8) | static_cast<uint8_t>(o[a] + 16);
  return k;
}

class FieldSampler {
 public:
  FieldSampler(std::function<Mat4(const Vec4&)> f, Vec4 p, double h)
      : f_(std::move(f)), p_(std::move(p)), h_(h) {}

  // Composed central difference of multi-order `ord` (per-axis counts).
  Mat4 diff(const std::array<int, 4>& ord) {
    std::array<std::vector<std::pair<int, double>>, 4> st;
    for (int a = 0; a < 4; ++a) st[a] = stencil_1d(ord[a], h_);
    Mat4 acc = Mat4::Zero();
    for (const auto& [o0, w0] : st[0])
      for (const auto& [o1, w1] : st[1])
        for (const auto& [o2, w2] : st[2])
          for (const auto& [o3, w3] : st[3])
            acc += (w0 * w1 * w2 * w3) * sample({o0, o1, o2, o3});
    return acc;
  }

 private:
  const Mat4& sample(const std::array<int, 4>& o) {
    auto key = offset_key(o);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Vec4 q = p_;
    for (int a = 0; a < 4; ++a) q[a] += h_ * o[a];
    return cache_.emplace(key, f_(q)).first->second;
  }

  std::function<Mat4(const Vec4&)> f_;
  Vec4 p_;
  double h_;
  std::unordered_map<uint64_t, Mat4> cache_;
};

std::array<int, 4> unit_ord(int a) {
  std::array<int, 4> o{0, 0, 0, 0};
  o[a] = 1;
  return o;
}

std::array<int, 4> ord_of(std::initializer_list<int> axes) {
  std::array<int, 4> o{0, 0, 0, 0};
  for (int a : axes) o[a]++;
  return o;
}

void fd_fill_d1(FieldSampler& fs, D1& out) {
  for (int a = 0; a < 4; ++a) out[a] = fs.diff(unit_ord(a));
}

void fd_fill_d2(FieldSampler& fs, D2& out) {
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) {
      Mat4 m = fs.diff(ord_of({a, b}));
      out[a][b] = m;
      out[b][a] = m;
    }
}

void fd_fill_d3(FieldSampler& fs, D3& out) {
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b)
      for (int c = b; c < 4; ++c) {
        Mat4 m = fs.diff(ord_of({a, b, c}));
        int idx[3] = {a, b, c};
        int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
        for (auto& pm : perms) out[idx[pm[0]]][idx[pm[1]]][idx[pm[2]]] = m;
      }
}

void fd_fill_d4(FieldSampler& fs, D4& out) {
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b)
      for (int c = b; c < 4; ++c)
        for (int d = c; d < 4; ++d) {
          Mat4 m = fs.diff(ord_of({a, b, c, d}));
          int idx[4] = {a, b, c, d};
          int pm[4] = {0, 1, 2, 3};
          do {
            out[idx[pm[0]]][idx[pm[1]]][idx[pm[2]]][idx[pm[3]]] = m;
          } while (std::next_permutation(pm, pm + 4));
        }
}

// Third partials from finite differences of the exact second-derivative
// closure, symmetrized over all index orderings so downstream algebra
// sees a genuine symmetric jet.
void d3_from_d2_closure(const MetricChart& chart, const Vec4& p, double h, D3& out) {
  D2 plus, minus;
  for (int c = 0; c < 4; ++c) {
    Vec4 qp = p, qm = p;
    qp[c] += h;
    qm[c] -= h;
    plus = chart.d2g(qp);
    minus = chart.d2g(qm);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        out[c][a][b] = (plus[a][b] - minus[a][b]) / (2 * h);
  }
  D3 sym;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        sym[a][b][c] =
            (out[a][b][c] + out[b][a][c] + out[c][a][b]) * (1.0 / 3.0);
  out = sym;
}

void d4_from_d2_closure(const MetricChart& chart, const Vec4& p, double h, D4& out) {
  // raw[c][d] = discrete d_c d_d of the d2g closure (composed stencils).
  D4 raw;
  for (int c = 0; c < 4; ++c)
    for (int d = c; d < 4; ++d) {
      auto st_c = stencil_1d(c == d ? 2 : 1, h);
      D2 acc = zeroed_d2();
      if (c == d) {
        for (const auto& [o, w] : st_c) {
          Vec4 q = p;
          q[c] += h * o;
          D2 v = chart.d2g(q);
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) acc[a][b] += w * v[a][b];
        }
      } else {
        for (const auto& [oc, wc] : st_c)
          for (const auto& [od, wd] : stencil_1d(1, h)) {
            Vec4 q = p;
            q[c] += h * oc;
            q[d] += h * od;
            D2 v = chart.d2g(q);
            for (int a = 0; a < 4; ++a)
              for (int b = 0; b < 4; ++b) acc[a][b] += (wc * wd) * v[a][b];
          }
      }
      raw[c][d] = acc;
      raw[d][c] = acc;
    }
  // Symmetrize over the three pairings of (finite-difference axes,
  // closure axes).
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          Mat4 m = Mat4::Zero();
          m += raw[a][b][c][d];
          m += raw[a][c][b][d];
          m += raw[a][d][b][c];
          m += raw[b][c][a][d];
          m += raw[b][d][a][c];
          m += raw[c][d][a][b];
          out[a][b][c][d] = m * (1.0 / 6.0);
        }
}

}  // namespace

MetricJet metric_jet(const MetricChart& chart, const Vec4& p, int depth) {
  if (depth < 0 || depth > 4)
    fail(ErrorCode::InvalidArgument, "jet depth must be in [0,4]");
  MetricJet jet;
  jet.depth = depth;

  const bool fd = chart.scheme == DerivScheme::finite_difference;
  const double h2 = chart.h2(), h4 = chart.h4();
  if (fd) {
    double cap = 1e-2 * chart.domain.min_extent();
    if (!(h2 > 0) || h2 >= cap || !(h4 > 0) || h4 >= cap)
      fail(ErrorCode::InvalidArgument,
           chart.name + ": finite-difference step must lie in (0, extent/100)");
  }

  double margin = 0;
  if (fd)
    margin = depth >= 3 ? 4 * std::max(h2, h4) : 2 * h2;
  else if (depth >= 3 && (!chart.d3g || !chart.d4g))
    margin = 2 * h4;
  if (!chart.domain.contains(p, margin))
    fail(ErrorCode::PointOutsideDomain,
         chart.name + ": point outside domain (margin " + std::to_string(margin) + ")");

  jet.g = chart.g(p);
  jet.g = 0.5 * (jet.g + jet.g.transpose());
  jet.ginv = checked_inverse(jet.g, chart.name, chart.condition_cap).first;
  if (depth == 0) return jet;

  if (fd) {
    FieldSampler fine(chart.g, p, h2);
    fd_fill_d1(fine, jet.dg);
    if (depth >= 2) fd_fill_d2(fine, jet.d2g);
    if (depth >= 3) {
      FieldSampler coarse(chart.g, p, h4);
      fd_fill_d3(coarse, jet.d3g);
      if (depth >= 4) fd_fill_d4(coarse, jet.d4g);
    }
    return jet;
  }

  if (!chart.dg || (depth >= 2 && !chart.d2g))
    fail(ErrorCode::DerivativeUnavailable,
         chart.name + ": analytic chart lacks derivative closures for depth " +
             std::to_string(depth));
  jet.dg = chart.dg(p);
  if (depth >= 2) jet.d2g = chart.d2g(p);
  if (depth >= 3) {
    if (chart.d3g)
      jet.d3g = chart.d3g(p);
    else
      d3_from_d2_closure(chart, p, h4, jet.d3g);
  }
  if (depth >= 4) {
    if (chart.d4g)
      jet.d4g = chart.d4g(p);
    else
      d4_from_d2_closure(chart, p, h4, jet.d4g);
  }
  return jet;
}

void validate_chart(const MetricChart& chart, int grid_per_axis,
                    int random_points, unsigned seed) {
  auto check = [&](const Vec4& p) {
    (void)checked_inverse(chart.g(p), chart.name, chart.condition_cap);
  };
  std::array<double, 4> step;
  for (int a = 0; a < 4; ++a)
    step[a] = (chart.domain.hi[a] - chart.domain.lo[a]) / (grid_per_axis + 1);
  for (int i0 = 1; i0 <= grid_per_axis; ++i0)
    for (int i1 = 1; i1 <= grid_per_axis; ++i1)
      for (int i2 = 1; i2 <= grid_per_axis; ++i2)
        for (int i3 = 1; i3 <= grid_per_axis; ++i3)
          check(Vec4(chart.domain.lo[0] + i0 * step[0],
                     chart.domain.lo[1] + i1 * step[1],
                     chart.domain.lo[2] + i2 * step[2],
                     chart.domain.lo[3] + i3 * step[3]));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  for (int k = 0; k < random_points; ++k) {
    Vec4 p;
    for (int a = 0; a < 4; ++a)
      p[a] = chart.domain.lo[a] + u(rng) * (chart.domain.hi[a] - chart.domain.lo[a]);
    check(p);
  }
}

// ---- scalar fields ----

ScalarField scalar_const(double c) {
  return {[c](const Vec4&) { return c; },
          [](const Vec4&) { return Vec4(Vec4::Zero()); },
          [](const Vec4&) { return Mat4(Mat4::Zero()); }};
}

ScalarField scalar_log_sech_axis0() {
  return {[](const Vec4& p) { return -std::log(std::cosh(p[0])); },
          [](const Vec4& p) {
            Vec4 g = Vec4::Zero();
            g[0] = -std::tanh(p[0]);
            return g;
          },
          [](const Vec4& p) {
            Mat4 h = Mat4::Zero();
            double s = 1.0 / std::cosh(p[0]);
            h(0, 0) = -s * s;
            return h;
          }};
}

ScalarField scalar_sphere_stereo() {
  return {[](const Vec4& p) { return std::log(2.0) - std::log1p(p.squaredNorm()); },
          [](const Vec4& p) {
            return Vec4(-2.0 / (1.0 + p.squaredNorm()) * p);
          },
          [](const Vec4& p) {
            double q = 1.0 + p.squaredNorm();
            Mat4 h = (4.0 / (q * q)) * (p * p.transpose());
            h -= (2.0 / q) * Mat4::Identity();
            return h;
          }};
}

ScalarField scalar_gaussian(double amplitude) {
  return {[=](const Vec4& p) { return amplitude * std::exp(-p.squaredNorm()); },
          [=](const Vec4& p) {
            return Vec4(-2.0 * amplitude * std::exp(-p.squaredNorm()) * p);
          },
          [=](const Vec4& p) {
            double e = amplitude * std::exp(-p.squaredNorm());
            Mat4 h = 4.0 * e * (p * p.transpose());
            h -= 2.0 * e * Mat4::Identity();
            return h;
          }};
}

ScalarField scalar_radial(std::function<double(double)> f,
                          std::function<double(double)> fp,
                          std::function<double(double)> fpp) {
  auto radius = [](const Vec4& p) { return p.norm(); };
  return {[f, radius](const Vec4& p) { return f(radius(p)); },
          [fp, radius](const Vec4& p) {
            double r = radius(p);
            return Vec4(fp(r) / r * p);
          },
          [fp, fpp, radius](const Vec4& p) {
            double r = radius(p);
            Mat4 nn = (p * p.transpose()) / (r * r);
            return Mat4(fpp(r) * nn + fp(r) / r * (Mat4::Identity() - nn));
          }};
}

// ---- chart zoo ----

MetricChart chart_flat(double halfwidth) {
  MetricChart c;
  c.name = "flat";
  for (int a = 0; a < 4; ++a) {
    c.domain.lo[a] = -halfwidth;
    c.domain.hi[a] = halfwidth;
  }
  c.g = [](const Vec4&) { return Mat4(Mat4::Identity()); };
  c.dg = [](const Vec4&) { return zeroed_d1(); };
  c.d2g = [](const Vec4&) { return zeroed_d2(); };
  c.d3g = [](const Vec4&) { return zeroed_d3(); };
  c.d4g = [](const Vec4&) { return zeroed_d4(); };
  return c;
}

namespace {

// Diagonal metrics g_kk = c_k * prod_{m in deps_k} sin^2(x_m); covers the
// round-sphere polar chart, the S^3 x S^1 product and the cylinder. The
// entries factor over coordinates, so partial derivatives of any order
// are exact closed forms (sin^2 x = (1 - cos 2x)/2).
MetricChart diagonal_sin_chart(std::string name, std::array<double, 4> coeff,
                               std::array<std::array<bool, 4>, 4> deps, Box4 box) {
  MetricChart c;
  c.name = std::move(name);
  c.domain = box;

  auto factor = [](int order, double x) {
    if (order == 0) {
      double s = std::sin(x);
      return s * s;
    }
    return -std::pow(2.0, order - 1) *
           std::cos(2.0 * x + order * M_PI / 2.0);
  };
  auto entry = [coeff, deps, factor](const Vec4& p, int k,
                                     const std::array<int, 4>& ord) {
    double v = coeff[k];
    for (int m = 0; m < 4; ++m) {
      if (deps[k][m])
        v *= factor(ord[m], p[m]);
      else if (ord[m] > 0)
        return 0.0;
    }
    return v;
  };
  auto diag = [entry](const Vec4& p, const std::array<int, 4>& ord) {
    Mat4 m = Mat4::Zero();
    for (int k = 0; k < 4; ++k) m(k, k) = entry(p, k, ord);
    return m;
  };

  c.g = [diag](const Vec4& p) { return diag(p, {0, 0, 0, 0}); };
  c.dg = [diag](const Vec4& p) {
    D1 d;
    for (int a = 0; a < 4; ++a) d[a] = diag(p, unit_ord(a));
    return d;
  };
  c.d2g = [diag](const Vec4& p) {
    D2 d;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) d[a][b] = diag(p, ord_of({a, b}));
    return d;
  };
  c.d3g = [diag](const Vec4& p) {
    D3 d;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int cc = 0; cc < 4; ++cc) d[a][b][cc] = diag(p, ord_of({a, b, cc}));
    return d;
  };
  c.d4g = [diag](const Vec4& p) {
    D4 d;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int cc = 0; cc < 4; ++cc)
          for (int dd = 0; dd < 4; ++dd)
            d[a][b][cc][dd] = diag(p, ord_of({a, b, cc, dd}));
    return d;
  };
  return c;
}

}  // namespace

MetricChart chart_s4_round(double radius) {
  // Polar coordinates (chi, theta, phi, psi); kept away from coordinate
  // poles so the metric stays well conditioned.
  std::array<double, 4> coeff{radius * radius, radius * radius,
                              radius * radius, radius * radius};
  std::array<std::array<bool, 4>, 4> deps{};
  for (int k = 0; k < 4; ++k)
    for (int m = 0; m < k; ++m) deps[k][m] = true;
  Box4 box;
  double pad = 0.15;
  for (int a = 0; a < 3; ++a) {
    box.lo[a] = pad;
    box.hi[a] = M_PI - pad;
  }
  box.lo[3] = 0.0;
  box.hi[3] = 2 * M_PI;
  return diagonal_sin_chart("s4_round(" + std::to_string(radius) + ")", coeff,
                            deps, box);
}

MetricChart chart_s3xs1(double r3, double circle_len) {
  // Coordinates (theta, phi, psi, t): a round S^3 of radius r3 times a
  // circle of length circle_len.
  std::array<double, 4> coeff{r3 * r3, r3 * r3, r3 * r3, 1.0};
  std::array<std::array<bool, 4>, 4> deps{};
  deps[1][0] = true;
  deps[2][0] = true;
  deps[2][1] = true;
  Box4 box;
  double pad = 0.15;
  for (int a = 0; a < 2; ++a) {
    box.lo[a] = pad;
    box.hi[a] = M_PI - pad;
  }
  box.lo[2] = 0.0;
  box.hi[2] = 2 * M_PI;
  box.lo[3] = 0.0;
  box.hi[3] = circle_len;
  return diagonal_sin_chart(
      "s3xs1(" + std::to_string(r3) + "," + std::to_string(circle_len) + ")",
      coeff, deps, box);
}

MetricChart chart_cylinder(double t_halfwidth) {
  // Coordinates (t, theta, phi, psi) on R x S^3 with the unit round S^3.
  std::array<double, 4> coeff{1.0, 1.0, 1.0, 1.0};
  std::array<std::array<bool, 4>, 4> deps{};
  deps[2][1] = true;
  deps[3][1] = true;
  deps[3][2] = true;
  Box4 box;
  box.lo[0] = -t_halfwidth;
  box.hi[0] = t_halfwidth;
  double pad = 0.15;
  for (int a = 1; a < 3; ++a) {
    box.lo[a] = pad;
    box.hi[a] = M_PI - pad;
  }
  box.lo[3] = 0.0;
  box.hi[3] = 2 * M_PI;
  return diagonal_sin_chart("cylinder", coeff, deps, box);
}

MetricChart chart_conformal(const MetricChart& base, const ScalarField& w,
                            const std::string& label) {
  MetricChart c;
  c.name = label;
  c.domain = base.domain;
  c.scheme = base.scheme;
  c.fd_step2 = base.fd_step2;
  c.fd_step4 = base.fd_step4;
  c.condition_cap = base.condition_cap;

  auto bg = base.g;
  c.g = [bg, w](const Vec4& p) {
    return Mat4(std::exp(2.0 * w.value(p)) * bg(p));
  };
  if (base.dg && base.d2g) {
    auto bdg = base.dg;
    auto bd2g = base.d2g;
    c.dg = [bg, bdg, w](const Vec4& p) {
      double e = std::exp(2.0 * w.value(p));
      Vec4 wg = w.grad(p);
      Mat4 G = bg(p);
      D1 dG = bdg(p);
      D1 out;
      for (int a = 0; a < 4; ++a) out[a] = e * (2.0 * wg[a] * G + dG[a]);
      return out;
    };
    c.d2g = [bg, bdg, bd2g, w](const Vec4& p) {
      double e = std::exp(2.0 * w.value(p));
      Vec4 wg = w.grad(p);
      Mat4 wh = w.hess(p);
      Mat4 G = bg(p);
      D1 dG = bdg(p);
      D2 d2G = bd2g(p);
      D2 out;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          out[a][b] = e * ((4.0 * wg[a] * wg[b] + 2.0 * wh(a, b)) * G +
                           2.0 * wg[a] * dG[b] + 2.0 * wg[b] * dG[a] + d2G[a][b]);
      return out;
    };
  }
  return c;
}

namespace {

struct Monomial {
  double coef;
  std::array<int, 4> exp;
};

double poly_eval_deriv(const std::vector<Monomial>& poly, const Vec4& p,
                       const std::array<int, 4>& ord) {
  double acc = 0;
  for (const auto& m : poly) {
    double term = m.coef;
    bool dead = false;
    for (int a = 0; a < 4 && !dead; ++a) {
      int e = m.exp[a];
      if (ord[a] > e) {
        dead = true;
        break;
      }
      for (int k = 0; k < ord[a]; ++k) term *= (e - k);
      int rem = e - ord[a];
      for (int k = 0; k < rem; ++k) term *= p[a];
    }
    if (!dead) acc += term;
  }
  return acc;
}

}  // namespace

MetricChart chart_perturbed_flat(unsigned seed, double amplitude,
                                 DerivScheme scheme) {
  // g_ij = delta_ij + amplitude * P_ij with P a random symmetric matrix of
  // cubic polynomials. All derivative closures are exact.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto polys = std::make_shared<std::array<std::vector<Monomial>, 10>>();
  int slot = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      auto& poly = (*polys)[slot++];
      for (int e0 = 0; e0 <= 3; ++e0)
        for (int e1 = 0; e1 + e0 <= 3; ++e1)
          for (int e2 = 0; e2 + e1 + e0 <= 3; ++e2)
            for (int e3 = 0; e3 + e2 + e1 + e0 <= 3; ++e3) {
              int deg = e0 + e1 + e2 + e3;
              double c = amplitude * u(rng) / std::pow(3.0, deg);
              poly.push_back({c, {e0, e1, e2, e3}});
            }
    }

  auto slot_of = [](int i, int j) {
    if (i > j) std::swap(i, j);
    static const int base[4] = {0, 4, 7, 9};
    return base[i] + (j - i);
  };

  auto eval = [polys, slot_of](const Vec4& p, const std::array<int, 4>& ord) {
    Mat4 m = Mat4::Zero();
    bool value = ord[0] + ord[1] + ord[2] + ord[3] == 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        double v = poly_eval_deriv((*polys)[slot_of(i, j)], p, ord);
        if (value && i == j) v += 1.0;
        m(i, j) = v;
        m(j, i) = v;
      }
    return m;
  };

  MetricChart c;
  c.name = "perturbed_flat(" + std::to_string(seed) + "," +
           std::to_string(amplitude) + ")";
  for (int a = 0; a < 4; ++a) {
    c.domain.lo[a] = -0.6;
    c.domain.hi[a] = 0.6;
  }
  c.scheme = scheme;
  c.g = [eval](const Vec4& p) { return eval(p, {0, 0, 0, 0}); };
  if (scheme == DerivScheme::analytic) {
    c.dg = [eval](const Vec4& p) {
      D1 d;
      for (int a = 0; a < 4; ++a) d[a] = eval(p, unit_ord(a));
      return d;
    };
    c.d2g = [eval](const Vec4& p) {
      D2 d;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) d[a][b] = eval(p, ord_of({a, b}));
      return d;
    };
    c.d3g = [eval](const Vec4& p) {
      D3 d;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          for (int cc = 0; cc < 4; ++cc) d[a][b][cc] = eval(p, ord_of({a, b, cc}));
      return d;
    };
    c.d4g = [eval](const Vec4& p) {
      D4 d;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          for (int cc = 0; cc < 4; ++cc)
            for (int dd = 0; dd < 4; ++dd)
              d[a][b][cc][dd] = eval(p, ord_of({a, b, cc, dd}));
      return d;
    };
  }
  return c;
}

MetricChart chart_trig_torus(double side, unsigned seed, double amplitude) {
  struct Term {
    double coef;
    std::array<int, 4> freq;
    std::array<double, 4> phase;
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> fr(0, 2);
  auto terms = std::make_shared<std::array<std::vector<Term>, 10>>();
  for (auto& entry : *terms) {
    for (int t = 0; t < 2; ++t) {
      Term tm;
      tm.coef = amplitude * u(rng);
      for (int a = 0; a < 4; ++a) {
        tm.freq[a] = fr(rng);
        tm.phase[a] = u(rng) * M_PI;
      }
      entry.push_back(tm);
    }
  }
  double omega = 2 * M_PI / side;
  auto slot_of = [](int i, int j) {
    if (i > j) std::swap(i, j);
    static const int base[4] = {0, 4, 7, 9};
    return base[i] + (j - i);
  };
  auto eval = [terms, omega, slot_of](const Vec4& p, const std::array<int, 4>& ord) {
    Mat4 m = Mat4::Zero();
    bool value = ord[0] + ord[1] + ord[2] + ord[3] == 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        double v = 0;
        for (const auto& tm : (*terms)[slot_of(i, j)]) {
          double prod = tm.coef;
          for (int a = 0; a < 4; ++a) {
            double k = tm.freq[a] * omega;
            if (ord[a] > 0 && tm.freq[a] == 0) {
              prod = 0;
              break;
            }
            double shift = ord[a] * M_PI / 2.0;
            prod *= std::pow(k, ord[a]) * std::sin(k * p[a] + tm.phase[a] + shift);
          }
          v += prod;
        }
        if (value && i == j) v += 1.0;
        m(i, j) = v;
        m(j, i) = v;
      }
    return m;
  };

  MetricChart c;
  c.name = "trig_torus(" + std::to_string(side) + "," + std::to_string(seed) + ")";
  for (int a = 0; a < 4; ++a) {
    c.domain.lo[a] = 0;
    c.domain.hi[a] = side;
  }
  c.g = [eval](const Vec4& p) { return eval(p, {0, 0, 0, 0}); };
  c.dg = [eval](const Vec4& p) {
    D1 d;
    for (int a = 0; a < 4; ++a) d[a] = eval(p, unit_ord(a));
    return d;
  };
  c.d2g = [eval](const Vec4& p) {
    D2 d;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) d[a][b] = eval(p, ord_of({a, b}));
    return d;
  };
  return c;
}

namespace {

std::vector<std::string> split_args(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(') depth++;
    if (ch == ')') depth--;
    if (ch == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

ScalarField parse_profile(const std::string& name) {
  if (name == "log_sech_t") return scalar_log_sech_axis0();
  if (name == "sphere_stereo") return scalar_sphere_stereo();
  if (name.rfind("const:", 0) == 0) return scalar_const(std::stod(name.substr(6)));
  if (name.rfind("gauss:", 0) == 0) return scalar_gaussian(std::stod(name.substr(6)));
  fail(ErrorCode::UnknownChart, "unknown conformal profile '" + name + "'");
}

}  // namespace

MetricChart parse_chart(const std::string& spec) {
  std::string s = trim(spec);
  std::string head = s, args;
  auto open = s.find('(');
  if (open != std::string::npos) {
    if (s.back() != ')')
      fail(ErrorCode::UnknownChart, "malformed chart spec '" + spec + "'");
    head = s.substr(0, open);
    args = s.substr(open + 1, s.size() - open - 2);
  }
  auto argv = split_args(args);
  auto num = [&](std::size_t i, double dflt) {
    return i < argv.size() ? std::stod(trim(argv[i])) : dflt;
  };
  if (head == "flat") return chart_flat();
  if (head == "s4_round") return chart_s4_round(num(0, 1.0));
  if (head == "s3xs1") return chart_s3xs1(num(0, 1.0), num(1, 1.0));
  if (head == "cylinder") return chart_cylinder();
  if (head == "perturbed_flat") {
    unsigned seed = static_cast<unsigned>(num(0, 0));
    return chart_perturbed_flat(seed, num(1, 0.05));
  }
  if (head == "conformal") {
    if (argv.size() != 2)
      fail(ErrorCode::UnknownChart, "conformal(base,profile) expects two arguments");
    MetricChart base = parse_chart(trim(argv[0]));
    ScalarField w = parse_profile(trim(argv[1]));
    return chart_conformal(base, w, "conformal(" + trim(argv[0]) + "," + trim(argv[1]) + ")");
  }
  fail(ErrorCode::UnknownChart, "unknown chart '" + spec + "'");
}

}  // namespace cglab
