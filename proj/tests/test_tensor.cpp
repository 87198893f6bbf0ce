#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cglab/tensor.hpp"

using namespace cglab;

TEST_CASE("kulkarni-nomizu of the metric with itself") {
  Mat4 g = Mat4::Identity();
  g(1, 1) = 2.0;
  g(0, 2) = 0.3;
  g(2, 0) = 0.3;
  Ten4 t = kulkarni_nomizu(g, g);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          CHECK(t(i, j, k, l) ==
                doctest::Approx(2.0 * (g(i, k) * g(j, l) - g(i, l) * g(j, k)))
                    .epsilon(1e-14));
}

TEST_CASE("kulkarni-nomizu identity-pair hand expansion") {
  Ten4 t = kulkarni_nomizu(Mat4::Identity(), Mat4::Identity());
  CHECK(t(0, 1, 0, 1) == doctest::Approx(2.0));
  CHECK(t(0, 1, 1, 0) == doctest::Approx(-2.0));
  CHECK(t(0, 1, 2, 3) == doctest::Approx(0.0));
}

TEST_CASE("kulkarni-nomizu has the algebraic curvature symmetries") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  Mat4 h, k;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      h(i, j) = h(j, i) = u(rng);
      k(i, j) = k(j, i) = u(rng);
    }
  Ten4 t = kulkarni_nomizu(h, k);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          CHECK(t(i, j, a, b) == doctest::Approx(-t(j, i, a, b)).epsilon(1e-14));
          CHECK(t(i, j, a, b) == doctest::Approx(-t(i, j, b, a)).epsilon(1e-14));
          CHECK(t(i, j, a, b) == doctest::Approx(t(a, b, i, j)).epsilon(1e-14));
          // first Bianchi
          double cyc = t(i, j, a, b) + t(i, a, b, j) + t(i, b, j, a);
          CHECK(cyc == doctest::Approx(0.0).epsilon(1e-13));
        }
}

TEST_CASE("rank-4 norm against a hand-computed case") {
  Ten4 t;
  t(0, 1, 0, 1) = 2.0;
  t(1, 0, 1, 0) = 2.0;
  Mat4 ginv = Mat4::Identity();
  ginv(0, 0) = 0.5;
  // each entry carries two 0-slots, so raising scales its square by 1/4
  double expect = 2.0 * (2.0 * 2.0 * 0.25);
  CHECK(norm2_rank4(t, ginv) == doctest::Approx(expect));
}
