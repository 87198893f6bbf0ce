#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cglab/chart.hpp"

using namespace cglab;

TEST_CASE("zoo charts are positive definite on their domains") {
  for (const char* spec : {"flat", "s4_round(1)", "s3xs1(1,2)", "cylinder",
                           "perturbed_flat(3,0.05)",
                           "conformal(cylinder,log_sech_t)",
                           "conformal(flat,sphere_stereo)"}) {
    MetricChart c = parse_chart(spec);
    CHECK_NOTHROW(validate_chart(c));
  }
}

TEST_CASE("unknown chart names are rejected") {
  CHECK_THROWS_AS(parse_chart("mystery(1)"), Error);
  try {
    parse_chart("mystery(1)");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownChart);
  }
}

TEST_CASE("points outside the domain margin are rejected") {
  MetricChart fd = chart_perturbed_flat(1, 0.05, DerivScheme::finite_difference);
  Vec4 edge(0.5995, 0, 0, 0);  // inside the 2h margin of the fine step
  CHECK_THROWS_AS(metric_jet(fd, Vec4(0.62, 0, 0, 0), 2), Error);
  CHECK_NOTHROW(metric_jet(fd, edge, 2));
  // the fourth-derivative stencil needs a wider margin
  CHECK_THROWS_AS(metric_jet(fd, edge, 4), Error);
}

TEST_CASE("singular metrics are rejected rather than regularized") {
  MetricChart bad = chart_flat();
  bad.g = [](const Vec4&) {
    Mat4 g = Mat4::Identity();
    g(0, 0) = 5e8;  // condition number beyond the cap
    return g;
  };
  try {
    metric_jet(bad, Vec4::Zero(), 0);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularMetric);
  }
  bad.g = [](const Vec4&) {
    Mat4 g = Mat4::Identity();
    g(1, 1) = -1.0;
    return g;
  };
  CHECK_THROWS_AS(metric_jet(bad, Vec4::Zero(), 0), Error);
}

TEST_CASE("analytic charts without derivative closures fail loudly") {
  MetricChart c = chart_flat();
  c.dg = nullptr;
  c.d2g = nullptr;
  try {
    metric_jet(c, Vec4::Zero(), 2);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DerivativeUnavailable);
  }
}

TEST_CASE("finite differences converge to analytic derivatives at order >= 1.8") {
  MetricChart an = chart_s4_round(1.0);
  Vec4 p(1.2, 1.4, 1.0, 2.5);
  D2 exact = an.d2g(p);

  auto fd_err = [&](double h) {
    MetricChart fd = an;
    fd.scheme = DerivScheme::finite_difference;
    fd.fd_step2 = h;
    MetricJet jet = metric_jet(fd, p, 2);
    double m = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        m = std::max(m, (jet.d2g[a][b] - exact[a][b]).cwiseAbs().maxCoeff());
    return m;
  };
  double e1 = fd_err(2e-3), e2 = fd_err(1e-3);
  double order = std::log2(e1 / e2);
  CHECK(order >= 1.8);
}

TEST_CASE("polynomial charts provide exact third and fourth derivatives") {
  MetricChart an = chart_perturbed_flat(5, 0.05);
  MetricChart fb = an;
  fb.d3g = nullptr;
  fb.d4g = nullptr;
  Vec4 p(0.1, -0.2, 0.15, 0.05);
  MetricJet je = metric_jet(an, p, 4);
  MetricJet jf = metric_jet(fb, p, 4);
  double m3 = 0, m4 = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        m3 = std::max(m3, (je.d3g[a][b][c] - jf.d3g[a][b][c]).cwiseAbs().maxCoeff());
        for (int d = 0; d < 4; ++d)
          m4 = std::max(m4,
                        (je.d4g[a][b][c][d] - jf.d4g[a][b][c][d]).cwiseAbs().maxCoeff());
      }
  CHECK(m3 < 1e-9);
  CHECK(m4 < 1e-9);
}

TEST_CASE("finite-difference jets are exactly symmetric in derivative axes") {
  MetricChart fd = chart_s4_round(1.0);
  fd.scheme = DerivScheme::finite_difference;
  MetricJet jet = metric_jet(fd, Vec4(1.2, 1.4, 1.0, 2.5), 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      CHECK((jet.d2g[a][b] - jet.d2g[b][a]).cwiseAbs().maxCoeff() == 0.0);
      for (int c = 0; c < 4; ++c) {
        CHECK((jet.d3g[a][b][c] - jet.d3g[c][a][b]).cwiseAbs().maxCoeff() == 0.0);
        for (int d = 0; d < 4; ++d)
          CHECK((jet.d4g[a][b][c][d] - jet.d4g[d][b][c][a]).cwiseAbs().maxCoeff() == 0.0);
      }
    }
}

TEST_CASE("radial scalar field matches its cartesian chain rule") {
  ScalarField w = scalar_radial([](double r) { return std::log(2.0 / (1.0 + r * r)); },
                                [](double r) { return -2.0 * r / (1.0 + r * r); },
                                [](double r) {
                                  double q = 1.0 + r * r;
                                  return -2.0 * (1.0 - r * r) / (q * q);
                                });
  ScalarField direct = scalar_sphere_stereo();
  Vec4 p(0.4, -0.2, 0.7, 0.1);
  CHECK(w.value(p) == doctest::Approx(direct.value(p)).epsilon(1e-12));
  CHECK((w.grad(p) - direct.grad(p)).norm() == doctest::Approx(0.0).epsilon(1e-10));
  CHECK((w.hess(p) - direct.hess(p)).norm() == doctest::Approx(0.0).epsilon(1e-10));
}
