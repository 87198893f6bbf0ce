// tensor.hpp - dense rank-R tensors over a 4-dimensional coordinate space.
//
// Rank-1 and rank-2 objects are Eigen vectors/matrices; higher ranks are
// flat arrays with row-major index order (leftmost index slowest).
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>

namespace cglab {

inline constexpr int kDim = 4;

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

constexpr std::size_t pow4(int r) { return r <= 0 ? 1 : 4 * pow4(r - 1); }

template <int Rank, typename Scalar = double>
struct Ten {
  static_assert(Rank >= 1);
  std::array<Scalar, pow4(Rank)> a{};

  template <typename... I>
  Scalar& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return a[flat(idx...)];
  }
  template <typename... I>
  const Scalar& operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return a[flat(idx...)];
  }

  void set_zero() { a.fill(Scalar(0)); }

  Ten& operator+=(const Ten& o) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
    return *this;
  }
  Ten& operator-=(const Ten& o) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= o.a[i];
    return *this;
  }
  Ten& operator*=(Scalar s) {
    for (auto& x : a) x *= s;
    return *this;
  }
  friend Ten operator+(Ten x, const Ten& y) { return x += y; }
  friend Ten operator-(Ten x, const Ten& y) { return x -= y; }
  friend Ten operator*(Scalar s, Ten x) { return x *= s; }

  Scalar max_abs() const {
    Scalar m(0);
    for (const auto& x : a) m = std::max(m, std::abs(x));
    return m;
  }

 private:
  template <typename... I>
  static std::size_t flat(I... idx) {
    std::size_t f = 0;
    ((f = 4 * f + static_cast<std::size_t>(idx)), ...);
    return f;
  }
};

using Ten3 = Ten<3>;
using Ten4 = Ten<4>;
using Ten5 = Ten<5>;
using Ten6 = Ten<6>;

// (h (x) k)_{ijkl} = h_ik k_jl + h_jl k_ik - h_il k_jk - h_jk k_il.
// Produces an algebraic curvature tensor from two symmetric 2-tensors.
inline Ten4 kulkarni_nomizu(const Mat4& h, const Mat4& k) {
  Ten4 t;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int l = 0; l < 4; ++l)
        for (int m = 0; m < 4; ++m)
          t(i, j, l, m) = h(i, l) * k(j, m) + h(j, m) * k(i, l) -
                          h(i, m) * k(j, l) - h(j, l) * k(i, m);
  return t;
}

// Full norm-squared T_{ijkl} T^{ijkl} with all indices raised by ginv.
inline double norm2_rank4(const Ten4& t, const Mat4& ginv) {
  // Raise one index at a time.
  Ten4 u = t;
  for (int slot = 0; slot < 4; ++slot) {
    Ten4 v;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            double s = 0;
            for (int m = 0; m < 4; ++m) {
              int idx[4] = {i, j, k, l};
              int src[4] = {i, j, k, l};
              src[slot] = m;
              s += ginv(idx[slot], m) * u(src[0], src[1], src[2], src[3]);
            }
            v(i, j, k, l) = s;
          }
    u = v;
  }
  double s = 0;
  for (std::size_t i = 0; i < t.a.size(); ++i) s += t.a[i] * u.a[i];
  return s;
}

inline double norm2_rank2(const Mat4& t, const Mat4& ginv) {
  return (ginv * t * ginv * t).trace();
}

}  // namespace cglab
