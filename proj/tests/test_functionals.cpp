#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "cglab/functionals.hpp"
#include "cglab/neck_ode.hpp"

using namespace cglab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("gauss-legendre rules integrate polynomials exactly") {
  const QuadRule& r = gauss_legendre(8);
  double acc = 0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    double x = r.nodes[i];
    acc += r.weights[i] * (x * x * x * x * x * x);  // int x^6 over [-1,1] = 2/7
  }
  CHECK(acc == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
}

TEST_CASE("volumes of built-in models") {
  auto vol = [](ClosedModel m) {
    return integrate_scalar(m, [](const CurvatureBundle&) { return 1.0; });
  };
  CHECK(vol(model_s4(1.0)) == doctest::Approx(8.0 * kPi * kPi / 3.0).epsilon(1e-12));
  CHECK(vol(model_s4(1.5)) ==
        doctest::Approx(8.0 * kPi * kPi / 3.0 * std::pow(1.5, 4)).epsilon(1e-12));
  CHECK(vol(model_flat_torus(1.7)) == doctest::Approx(std::pow(1.7, 4)).epsilon(1e-13));
  CHECK(vol(model_s3xs1(1.0, 2.0)) == doctest::Approx(4.0 * kPi * kPi).epsilon(1e-12));
  CHECK_NOTHROW(validate_model(model_s4(1.0)));
  CHECK_NOTHROW(validate_model(model_s3xs1(1.0, 2.0)));
}

TEST_CASE("scalar curvature integral on the sphere") {
  double rint = integrate_scalar(model_s4(1.0),
                                 [](const CurvatureBundle& b) { return b.R; });
  CHECK(rint == doctest::Approx(32.0 * kPi * kPi).epsilon(1e-11));
}

TEST_CASE("gauss-bonnet on the three closed models") {
  SUBCASE("sphere") {
    GaussBonnetReport rep = gauss_bonnet_check(model_s4(1.0));
    CHECK(rep.sigma2_term == doctest::Approx(16.0 * kPi * kPi).epsilon(1e-10));
    CHECK(std::abs(rep.weyl_term) < 1e-9);
    CHECK(rep.residual_relative < 1e-7);
  }
  SUBCASE("flat torus") {
    GaussBonnetReport rep = gauss_bonnet_check(model_flat_torus(1.3));
    CHECK(std::abs(rep.weyl_term) < 1e-12);
    CHECK(std::abs(rep.sigma2_term) < 1e-12);
    CHECK(rep.residual_relative < 1e-12);
  }
  SUBCASE("product") {
    GaussBonnetReport rep = gauss_bonnet_check(model_s3xs1(1.0, 2.0));
    CHECK(std::abs(rep.weyl_term) < 1e-10);
    CHECK(std::abs(rep.sigma2_term) < 1e-10);
    CHECK(rep.residual_relative < 1e-7);
  }
  SUBCASE("product at another radius still cancels pointwise") {
    GaussBonnetReport rep = gauss_bonnet_check(model_s3xs1(1.4, 1.1));
    CHECK(std::abs(rep.sigma2_term) < 1e-9);
    CHECK(rep.residual_relative < 1e-7);
  }
}

TEST_CASE("gauss-bonnet on a curved chi = 0 model with nonzero weyl term") {
  ClosedModel m = model_perturbed_torus(1.0, 3, 0.04);
  GaussBonnetReport rep = gauss_bonnet_check(m);
  CHECK(rep.weyl_term > 1e-4);  // genuinely curved
  CHECK(rep.residual_relative < 1e-7);
}

TEST_CASE("quadrature node doubling leaves the terms put") {
  ClosedModel m = model_s4_conformal(0.25);
  m.n_q = 16;
  GaussBonnetReport a = gauss_bonnet_check(m);
  m.n_q = 32;
  GaussBonnetReport b = gauss_bonnet_check(m);
  CHECK(std::abs(a.sigma2_term - b.sigma2_term) / std::abs(b.sigma2_term) < 1e-8);
  CHECK(std::abs(a.volume - b.volume) / b.volume < 1e-8);
  CHECK(std::abs(a.weyl_term - b.weyl_term) < 1e-8);
}

TEST_CASE("conformal invariance of the sigma2 mass and weyl energy") {
  GaussBonnetReport base = gauss_bonnet_check(model_s4(1.0));
  for (double a : {0.15, 0.4}) {
    GaussBonnetReport rep = gauss_bonnet_check(model_s4_conformal(a));
    CHECK(std::abs(rep.sigma2_term - base.sigma2_term) /
              std::abs(base.sigma2_term) < 1e-6);
    CHECK(std::abs(rep.weyl_term - base.weyl_term) < 1e-6);
    CHECK(std::abs(rep.volume - base.volume) > 1e-2);  // the metric did change
  }
}

TEST_CASE("results are bitwise independent of the thread count") {
  ClosedModel m = model_s4_conformal(0.2);
  m.n_q = 16;
  setenv("CGLAB_THREADS", "1", 1);
  GaussBonnetReport one = gauss_bonnet_check(m);
  setenv("CGLAB_THREADS", "2", 1);
  GaussBonnetReport two = gauss_bonnet_check(m);
  unsetenv("CGLAB_THREADS");
  CHECK(one.sigma2_term == two.sigma2_term);
  CHECK(one.weyl_term == two.weyl_term);
  CHECK(one.volume == two.volume);
}

TEST_CASE("quadrature overflow is reported") {
  ClosedModel m = model_flat_torus(1.0);
  CHECK_THROWS_AS(integrate_scalar(m, [](const CurvatureBundle&) {
                    return std::numeric_limits<double>::infinity();
                  }),
                  Error);
}

TEST_CASE("sobolev inequality on the round sphere") {
  ClosedModel m = model_s4(1.0);
  double y = yamabe_constant_s4();
  SUBCASE("constants saturate") {
    SobolevReport rep = sobolev_yamabe_check(m, model_field_const(m, 1.0), y);
    CHECK(rep.lhs == doctest::Approx(32.0 * kPi * kPi).epsilon(1e-10));
    CHECK(rep.lhs == doctest::Approx(rep.rhs).epsilon(1e-10));
    CHECK(rep.satisfied);
  }
  SUBCASE("zero function") {
    SobolevReport rep = sobolev_yamabe_check(m, model_field_const(m, 0.0), y);
    CHECK(rep.lhs == doctest::Approx(0.0));
    CHECK(rep.satisfied);
  }
  SUBCASE("first spherical harmonic gives a strict inequality") {
    SobolevReport rep = sobolev_yamabe_check(m, model_field_z_axis(m), y);
    CHECK(rep.satisfied);
    CHECK(rep.lhs < rep.rhs - 1e-3);
  }
}

TEST_CASE("mass bounds arithmetic") {
  SUBCASE("saturated mass") {
    MassBounds mb = bounds_from_mass(16.0 * kPi * kPi);
    CHECK(mb.r_min == doctest::Approx(12.0).epsilon(1e-15));
    CHECK(std::abs(mb.e_budget) < 1e-12);
    CHECK(mb.r_max == 12.0);
  }
  SUBCASE("three-quarter mass") {
    MassBounds mb = bounds_from_mass(16.0 * kPi * kPi * 0.75);
    CHECK(mb.r_min == doctest::Approx(12.0 * std::sqrt(3.0) / 2.0).epsilon(1e-14));
    CHECK(mb.e_budget == doctest::Approx(8.0 * kPi * kPi).epsilon(1e-14));
  }
  SUBCASE("small mass limit") {
    MassBounds mb = bounds_from_mass(1e-12);
    CHECK(mb.r_min < 1e-5);
    CHECK(mb.e_budget == doctest::Approx(32.0 * kPi * kPi).epsilon(1e-12));
  }
  SUBCASE("monotonicity") {
    double prev_r = -1, prev_e = 1e300;
    for (double f : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
      MassBounds mb = bounds_from_mass(16.0 * kPi * kPi * f);
      CHECK(mb.r_min > prev_r);
      CHECK(mb.e_budget < prev_e);
      prev_r = mb.r_min;
      prev_e = mb.e_budget;
    }
  }
  SUBCASE("out of range") {
    CHECK_THROWS_AS(bounds_from_mass(0.0), Error);
    CHECK_THROWS_AS(bounds_from_mass(17.0 * kPi * kPi), Error);
    try {
      bounds_from_mass(-1.0);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MassOutOfRange);
    }
  }
}

TEST_CASE("radial volume growth") {
  std::vector<double> radii{0.5, 1.0, 1.5, 2.0, 3.0, 5.0};
  SUBCASE("euclidean") {
    auto rows = volume_growth_radial([](double) { return 0.0; }, radii);
    for (const auto& r : rows) {
      CHECK(r.s == doctest::Approx(r.r).epsilon(1e-12));
      CHECK(r.ratio == doctest::Approx(kPi * kPi / 2.0).epsilon(1e-10));
    }
  }
  SUBCASE("constant factor rescales but keeps the euclidean ratio") {
    auto rows = volume_growth_radial([](double) { return 0.4; }, radii);
    for (const auto& r : rows)
      CHECK(r.ratio == doctest::Approx(kPi * kPi / 2.0).epsilon(1e-10));
  }
  SUBCASE("stereographic factor: decreasing, below euclidean") {
    auto rows = volume_growth_radial(
        [](double r) { return std::log(2.0 / (1.0 + r * r)); }, radii);
    double prev = kPi * kPi / 2.0 + 1e-12;
    for (const auto& r : rows) {
      CHECK(r.ratio < kPi * kPi / 2.0);
      CHECK(r.ratio < prev);
      prev = r.ratio;
      // closed form: vol of a spherical cap ball of geodesic radius s
      double s = 2.0 * std::atan(r.r);
      CHECK(r.s == doctest::Approx(s).epsilon(1e-10));
    }
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(volume_growth_radial([](double) { return 0.0; }, {1.0, 0.5}),
                    Error);
    CHECK_THROWS_AS(volume_growth_radial(
                        [](double) { return std::numeric_limits<double>::quiet_NaN(); },
                        {1.0}),
                    Error);
  }
}

TEST_CASE("volume growth agrees with the cylinder-side comparison machinery") {
  // Same spherical factor measured two ways: the geodesic radii of the
  // flat-space table must match those of the cylinder-profile report at
  // the shared radii r = e^t.
  std::vector<double> ts{-0.7, 0.0, 0.7};
  std::vector<double> radii;
  for (double t : ts) radii.push_back(std::exp(t));
  auto rows = volume_growth_radial(
      [](double r) { return std::log(2.0 / (1.0 + r * r)); }, radii);

  RadialProfile p = sech_solution(-8.0, 8.0, 1e-3);
  for (auto& w : p.w) w -= 0.25 * std::log(1.5);
  double tail = 2.0 * std::atan(std::exp(p.t0));
  BishopGromovReport rep = bishop_gromov_radial(p, tail, 100);
  CHECK(rep.monotone);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    bool found = false;
    for (const auto& br : rep.rows)
      if (std::abs(br.t - ts[k]) < 1e-9) {
        CHECK(rows[k].s == doctest::Approx(br.s).epsilon(1e-8));
        found = true;
      }
    CHECK(found);
  }
}
