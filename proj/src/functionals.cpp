// functionals.cpp - quadrature models and global integral checks.

#include "cglab/functionals.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <random>
#include <mutex>

#include "cglab/parallel.hpp"

namespace cglab {

const QuadRule& gauss_legendre(int n) {
  static std::map<int, QuadRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 1) fail(ErrorCode::InvalidArgument, "gauss_legendre: n >= 1 required");

  // Golub-Welsch on the Legendre Jacobi matrix.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()[i];
    double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = 2.0 * v0 * v0;
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

// Global algebraic chart of the round S^4: suspension coordinate
// u = -cos(chi) over the round S^3 written in Hopf coordinates with
// v = -cos(2 eta), angles xi1, xi2. The metric is rational in (u, v),
// the volume density is the polynomial a^4 (1 - u^2)/4, quadrature nodes
// never touch the excluded measure-zero set, and the condition number
// stays below ~5e6 on 24..48-node grids.
//
//   g = a^2 diag( 1/(1-u^2),
//                 (1-u^2)/(4(1-v^2)),
//                 (1-u^2)(1-v)/2,
//                 (1-u^2)(1+v)/2 )
MetricChart chart_s4_suspension(double radius) {
  double a2 = radius * radius;
  MetricChart c;
  c.name = "s4_suspension(" + std::to_string(radius) + ")";
  c.condition_cap = 1e12;  // coordinate collapse only at the excluded set
  c.domain.lo = {-1.0, -1.0, 0.0, 0.0};
  c.domain.hi = {1.0, 1.0, 2.0 * kPi, 2.0 * kPi};
  c.g = [a2](const Vec4& p) {
    double u = p[0], v = p[1];
    Mat4 g = Mat4::Zero();
    g(0, 0) = a2 / (1.0 - u * u);
    g(1, 1) = a2 * (1.0 - u * u) / (4.0 * (1.0 - v * v));
    g(2, 2) = a2 * (1.0 - u * u) * (1.0 - v) / 2.0;
    g(3, 3) = a2 * (1.0 - u * u) * (1.0 + v) / 2.0;
    return g;
  };
  c.dg = [a2](const Vec4& p) {
    double u = p[0], v = p[1];
    double cu = 1.0 - u * u, cv = 1.0 - v * v;
    D1 d = zeroed_d1();
    d[0](0, 0) = a2 * 2.0 * u / (cu * cu);
    d[0](1, 1) = a2 * (-2.0 * u) / (4.0 * cv);
    d[0](2, 2) = a2 * (-u) * (1.0 - v);
    d[0](3, 3) = a2 * (-u) * (1.0 + v);
    d[1](1, 1) = a2 * cu * 2.0 * v / (4.0 * cv * cv);
    d[1](2, 2) = -a2 * cu / 2.0;
    d[1](3, 3) = a2 * cu / 2.0;
    return d;
  };
  c.d2g = [a2](const Vec4& p) {
    double u = p[0], v = p[1];
    double cu = 1.0 - u * u, cv = 1.0 - v * v;
    D2 d = zeroed_d2();
    d[0][0](0, 0) = a2 * (2.0 + 6.0 * u * u) / (cu * cu * cu);
    d[0][0](1, 1) = a2 * (-2.0) / (4.0 * cv);
    d[0][0](2, 2) = -a2 * (1.0 - v);
    d[0][0](3, 3) = -a2 * (1.0 + v);
    d[0][1](1, 1) = a2 * (-2.0 * u) * 2.0 * v / (4.0 * cv * cv);
    d[0][1](2, 2) = a2 * u;
    d[0][1](3, 3) = -a2 * u;
    d[1][0] = d[0][1];
    d[1][1](1, 1) = a2 * cu * (2.0 + 6.0 * v * v) / (4.0 * cv * cv * cv);
    return d;
  };
  return c;
}

// Hopf chart of the round S^3 of radius b times a circle coordinate:
// coordinates (v, xi1, xi2, t) with v = -cos(2 eta). Volume density is
// the constant b^3/4.
MetricChart chart_s3xs1_hopf(double b, double circle_len) {
  double b2 = b * b;
  MetricChart c;
  c.name = "s3xs1_hopf";
  c.condition_cap = 1e12;
  c.domain.lo = {-1.0, 0.0, 0.0, 0.0};
  c.domain.hi = {1.0, 2.0 * kPi, 2.0 * kPi, circle_len};
  c.g = [b2](const Vec4& p) {
    double v = p[0];
    Mat4 g = Mat4::Zero();
    g(0, 0) = b2 / (4.0 * (1.0 - v * v));
    g(1, 1) = b2 * (1.0 - v) / 2.0;
    g(2, 2) = b2 * (1.0 + v) / 2.0;
    g(3, 3) = 1.0;
    return g;
  };
  c.dg = [b2](const Vec4& p) {
    double v = p[0];
    double cv = 1.0 - v * v;
    D1 d = zeroed_d1();
    d[0](0, 0) = b2 * 2.0 * v / (4.0 * cv * cv);
    d[0](1, 1) = -b2 / 2.0;
    d[0](2, 2) = b2 / 2.0;
    return d;
  };
  c.d2g = [b2](const Vec4& p) {
    double v = p[0];
    double cv = 1.0 - v * v;
    D2 d = zeroed_d2();
    d[0][0](0, 0) = b2 * (2.0 + 6.0 * v * v) / (4.0 * cv * cv * cv);
    return d;
  };
  return c;
}

struct KahanAcc {
  double sum = 0, comp = 0;
  void add(double x) {
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

using NodeFunctional =
    std::function<double(const CurvatureBundle&, int chart_idx, const Vec4&)>;

std::vector<double> integrate_nodes(const ClosedModel& model,
                                    const std::vector<NodeFunctional>& fs) {
  const QuadRule& rule = gauss_legendre(model.n_q);
  const int n = model.n_q;
  std::vector<double> totals(fs.size(), 0.0);

  for (std::size_t ci = 0; ci < model.charts.size(); ++ci) {
    const ModelChart& mc = model.charts[ci];
    std::array<std::vector<double>, 4> nodes, wts;
    for (int a = 0; a < 4; ++a) {
      double lo = mc.box.lo[a], hi = mc.box.hi[a];
      double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      for (int i = 0; i < n; ++i) {
        nodes[a].push_back(mid + half * rule.nodes[i]);
        wts[a].push_back(half * rule.weights[i]);
      }
    }

    // One slab per outermost node index; deterministic combine afterwards.
    std::vector<std::vector<KahanAcc>> slab(n, std::vector<KahanAcc>(fs.size()));
    parallel_for(n, [&](std::size_t i0) {
      for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 < n; ++i2)
          for (int i3 = 0; i3 < n; ++i3) {
            Vec4 p(nodes[0][i0], nodes[1][i1], nodes[2][i2], nodes[3][i3]);
            double pw = mc.weight ? mc.weight(p) : 1.0;
            if (pw == 0.0) continue;  // outside the partition support
            double qw = wts[0][i0] * wts[1][i1] * wts[2][i2] * wts[3][i3];
            MetricJet jet = metric_jet(mc.chart, p, 2);
            CurvatureBundle b = curvature_from_jet(jet, p);
            double dvol = std::sqrt(jet.g.determinant());
            for (std::size_t k = 0; k < fs.size(); ++k) {
              double v = fs[k](b, static_cast<int>(ci), p) * dvol * pw * qw;
              if (!std::isfinite(v))
                fail(ErrorCode::QuadratureOverflow,
                     model.name + ": non-finite integrand at node");
              slab[i0][k].add(v);
            }
          }
    });
    for (int i0 = 0; i0 < n; ++i0)
      for (std::size_t k = 0; k < fs.size(); ++k) totals[k] += slab[i0][k].sum;
  }
  return totals;
}

}  // namespace

double integrate_scalar(const ClosedModel& model, const BundleFunctional& f) {
  std::vector<NodeFunctional> fs{
      [&f](const CurvatureBundle& b, int, const Vec4&) { return f(b); }};
  return integrate_nodes(model, fs)[0];
}

std::vector<double> integrate_bundle(const ClosedModel& model,
                                     const std::vector<BundleFunctional>& fs) {
  std::vector<NodeFunctional> nfs;
  for (const auto& f : fs)
    nfs.push_back([&f](const CurvatureBundle& b, int, const Vec4&) { return f(b); });
  return integrate_nodes(model, nfs);
}

ClosedModel model_s4(double radius) {
  ClosedModel m;
  m.name = "s4(" + std::to_string(radius) + ")";
  m.euler_char = 2;
  m.expected_volume = 8.0 * kPi * kPi / 3.0 * std::pow(radius, 4);
  ModelChart mc;
  mc.chart = chart_s4_suspension(radius);
  mc.box = mc.chart.domain;
  m.charts.push_back(std::move(mc));
  return m;
}

ClosedModel model_flat_torus(double side) {
  ClosedModel m;
  m.name = "torus(" + std::to_string(side) + ")";
  m.euler_char = 0;
  ModelChart mc;
  mc.chart = chart_flat(side);
  for (int a = 0; a < 4; ++a) {
    mc.chart.domain.lo[a] = 0;
    mc.chart.domain.hi[a] = side;
  }
  mc.box = mc.chart.domain;
  m.charts.push_back(std::move(mc));
  return m;
}

ClosedModel model_s3xs1(double r3, double circle_len) {
  ClosedModel m;
  m.name = "s3xs1(" + std::to_string(r3) + "," + std::to_string(circle_len) + ")";
  m.euler_char = 0;
  m.expected_volume = 2.0 * kPi * kPi * r3 * r3 * r3 * circle_len;
  ModelChart mc;
  mc.chart = chart_s3xs1_hopf(r3, circle_len);
  mc.box = mc.chart.domain;
  m.charts.push_back(std::move(mc));
  return m;
}

ClosedModel model_s4_conformal(double a) {
  ClosedModel m = model_s4(1.0);
  m.name = "s4_conformal(" + std::to_string(a) + ")";
  m.expected_volume = -1;  // no closed form needed here
  // Conformal factor exp(2w) with w a polynomial in the suspension-axis
  // embedding coordinate u; smooth on the whole sphere.
  ScalarField w{
      [a](const Vec4& p) {
        double u = p[0];
        return a * (u + 0.3 * u * u - 0.2 * u * u * u);
      },
      [a](const Vec4& p) {
        double u = p[0];
        Vec4 g = Vec4::Zero();
        g[0] = a * (1.0 + 0.6 * u - 0.6 * u * u);
        return g;
      },
      [a](const Vec4& p) {
        double u = p[0];
        Mat4 h = Mat4::Zero();
        h(0, 0) = a * (0.6 - 1.2 * u);
        return h;
      }};
  MetricChart base = m.charts[0].chart;
  m.charts[0].chart = chart_conformal(base, w, base.name + "_conf");
  return m;
}

ClosedModel model_perturbed_torus(double side, unsigned seed, double amplitude) {
  ClosedModel m;
  m.name = "perturbed_torus(" + std::to_string(side) + "," +
           std::to_string(seed) + ")";
  m.euler_char = 0;
  ModelChart mc;
  mc.chart = chart_trig_torus(side, seed, amplitude);
  mc.box = mc.chart.domain;
  m.charts.push_back(std::move(mc));
  return m;
}

ClosedModel parse_model(const std::string& spec) {
  auto open = spec.find('(');
  std::string head = spec.substr(0, open);
  std::vector<double> args;
  if (open != std::string::npos && spec.back() == ')') {
    std::string inner = spec.substr(open + 1, spec.size() - open - 2);
    std::size_t pos = 0;
    while (pos < inner.size()) {
      auto comma = inner.find(',', pos);
      if (comma == std::string::npos) comma = inner.size();
      args.push_back(std::stod(inner.substr(pos, comma - pos)));
      pos = comma + 1;
    }
  }
  auto arg = [&](std::size_t i, double dflt) {
    return i < args.size() ? args[i] : dflt;
  };
  if (head == "s4") return model_s4(arg(0, 1.0));
  if (head == "torus") return model_flat_torus(arg(0, 1.0));
  if (head == "s3xs1") return model_s3xs1(arg(0, 1.0), arg(1, 1.0));
  if (head == "s4_conformal") return model_s4_conformal(arg(0, 0.2));
  if (head == "perturbed_torus")
    return model_perturbed_torus(arg(0, 1.0), static_cast<unsigned>(arg(1, 0)),
                                 arg(2, 0.05));
  fail(ErrorCode::UnknownChart, "unknown model '" + spec + "'");
}

void validate_model(const ClosedModel& model, double vol_tol) {
  for (const auto& mc : model.charts) validate_chart(mc.chart, 2, 8);
  // Chart weights must sum to 1 where charts overlap; the built-in
  // models use non-overlapping single charts with unit weight.
  for (const auto& mc : model.charts) {
    if (!mc.weight) continue;
    Vec4 c = mc.box.center();
    if (!(mc.weight(c) > 0))
      fail(ErrorCode::InvalidArgument, model.name + ": weight vanishes at box center");
  }
  if (model.expected_volume > 0) {
    double vol = integrate_scalar(model, [](const CurvatureBundle&) { return 1.0; });
    double rel = std::abs(vol - model.expected_volume) / model.expected_volume;
    if (rel > vol_tol)
      fail(ErrorCode::InvalidArgument,
           model.name + ": computed volume off by rel. " + std::to_string(rel));
  }
}

GaussBonnetReport gauss_bonnet_check(const ClosedModel& model) {
  auto res = integrate_bundle(
      model, {[](const CurvatureBundle& b) { return 0.25 * b.weyl_norm2(); },
              [](const CurvatureBundle& b) { return sigma_k(b, 2, Convention::WeylSchouten); },
              [](const CurvatureBundle&) { return 1.0; }});
  GaussBonnetReport rep;
  rep.weyl_term = res[0];
  rep.sigma2_term = res[1];
  rep.volume = res[2];
  rep.lhs = 8.0 * kPi * kPi * model.euler_char;
  rep.residual = std::abs(rep.lhs - rep.weyl_term - rep.sigma2_term);
  double scale = std::max({std::abs(rep.lhs),
                           std::abs(rep.weyl_term) + std::abs(rep.sigma2_term), 1.0});
  rep.residual_relative = rep.residual / scale;
  return rep;
}

ModelScalarField model_field_const(const ClosedModel& m, double c) {
  ModelScalarField f;
  for (std::size_t i = 0; i < m.charts.size(); ++i)
    f.per_chart.push_back(scalar_const(c));
  return f;
}

ModelScalarField model_field_z_axis(const ClosedModel& m) {
  // On the suspension chart the polar-axis embedding coordinate is the
  // first coordinate itself.
  ModelScalarField f;
  for (std::size_t i = 0; i < m.charts.size(); ++i)
    f.per_chart.push_back(ScalarField{
        [](const Vec4& p) { return p[0]; },
        [](const Vec4&) { return Vec4(Vec4::Unit(0)); },
        [](const Vec4&) { return Mat4(Mat4::Zero()); }});
  return f;
}

SobolevReport sobolev_yamabe_check(const ClosedModel& model,
                                   const ModelScalarField& u, double yamabe_const) {
  if (u.per_chart.size() != model.charts.size())
    fail(ErrorCode::InvalidArgument, "field/chart count mismatch");
  std::vector<NodeFunctional> fs{
      [&u](const CurvatureBundle&, int ci, const Vec4& p) {
        double v = u.per_chart[ci].value(p);
        return v * v * v * v;
      },
      [&u](const CurvatureBundle& b, int ci, const Vec4& p) {
        Vec4 gr = u.per_chart[ci].grad(p);
        return gr.dot(b.ginv * gr);
      },
      [&u](const CurvatureBundle& b, int ci, const Vec4& p) {
        double v = u.per_chart[ci].value(p);
        return b.R * v * v;
      }};
  auto res = integrate_nodes(model, fs);
  SobolevReport rep;
  rep.lhs = yamabe_const * std::sqrt(res[0]);
  rep.rhs = 6.0 * res[1] + res[2];
  rep.satisfied = rep.lhs <= rep.rhs + 1e-9 * std::max(1.0, std::abs(rep.rhs));
  return rep;
}

double yamabe_constant_s4() {
  return 12.0 * std::sqrt(8.0 * kPi * kPi / 3.0);
}

MassBounds bounds_from_mass(double a0) {
  double cap = 16.0 * kPi * kPi;
  if (!(a0 > 0) || a0 > cap)
    fail(ErrorCode::MassOutOfRange,
         "sigma_2 mass must lie in (0, 16 pi^2]; got " + std::to_string(a0));
  MassBounds mb;
  mb.a0 = a0;
  mb.r_min = 3.0 / kPi * std::sqrt(a0);
  mb.r_max = 12.0;
  mb.e_budget = 32.0 * kPi * kPi - 2.0 * a0;
  return mb;
}

std::vector<VolumeGrowthRow> volume_growth_radial(
    const std::function<double(double)>& w, const std::vector<double>& radii,
    int panels_per_unit) {
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1]))
      fail(ErrorCode::InvalidArgument, "radii must be strictly increasing");
  if (!radii.empty() && !(radii.front() > 0))
    fail(ErrorCode::InvalidArgument, "radii must be positive");

  const QuadRule& rule = gauss_legendre(16);
  double s_acc = 0, vol_acc = 0, prev = 0;
  std::vector<VolumeGrowthRow> rows;
  for (double r : radii) {
    int panels = std::max(1, static_cast<int>(std::ceil((r - prev) * panels_per_unit / 16.0)));
    double step = (r - prev) / panels;
    for (int pnl = 0; pnl < panels; ++pnl) {
      double lo = prev + pnl * step, hi = lo + step;
      double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double rho = mid + half * rule.nodes[i];
        double wv = w(rho);
        if (!std::isfinite(wv))
          fail(ErrorCode::NonFiniteProfile, "w not finite at r = " + std::to_string(rho));
        double qw = half * rule.weights[i];
        s_acc += qw * std::exp(wv);
        vol_acc += qw * 2.0 * kPi * kPi * std::exp(4.0 * wv) * rho * rho * rho;
      }
    }
    VolumeGrowthRow row;
    row.r = r;
    row.s = s_acc;
    row.vol = vol_acc;
    row.ratio = vol_acc / (s_acc * s_acc * s_acc * s_acc);
    rows.push_back(row);
    prev = r;
  }
  return rows;
}

}  // namespace cglab
