// neck_ode.cpp - shooting solver and diagnostics for the radial sigma_2
// equation on R x S^3.

#include "cglab/neck_ode.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <string>

#include "cglab/chart.hpp"
#include "cglab/curvature.hpp"

namespace cglab {

double sigma2_radial(double w, double wp, double wpp, double coeff) {
  if (std::abs(std::abs(wp) - 1.0) < 1e-12)
    fail(ErrorCode::DegenerateGradient, "|w'| = 1 within tolerance");
  return -coeff * wpp * (1.0 - wp * wp) * std::exp(-4.0 * w);
}

double scalar_radial(double w, double wp, double wpp) {
  return 6.0 * (1.0 - wp * wp - wpp) * std::exp(-2.0 * w);
}

RadialProfile sech_solution(double t0, double t1, double dt) {
  RadialProfile p;
  p.t0 = t0;
  p.dt = dt;
  p.provenance = ProfileProvenance::closed_form;
  const double c = 0.25 * std::log(1.5);
  auto n = static_cast<std::size_t>(std::llround((t1 - t0) / dt));
  for (std::size_t i = 0; i <= n; ++i) {
    double t = t0 + dt * static_cast<double>(i);
    double th = std::tanh(t);
    double sech2 = 1.0 - th * th;
    p.w.push_back(c - std::log(std::cosh(t)));
    p.wp.push_back(-th);
    p.wpp.push_back(-sech2);
  }
  return p;
}

namespace {

struct OdeState {
  double w, wp;
};

// Right side of w'' = -(target/coeff) e^{4w} / (1 - (w')^2).
struct OdeRhs {
  double target, coeff;
  bool blown = false;
  OdeState operator()(const OdeState& y) {
    double d = 1.0 - y.wp * y.wp;
    if (d <= kGradientGuard) {
      blown = true;
      d = kGradientGuard;
    }
    return {y.wp, -(target / coeff) * std::exp(4.0 * y.w) / d};
  }
};

OdeState rk4_step(OdeRhs& rhs, const OdeState& y, double h) {
  OdeState k1 = rhs(y);
  OdeState k2 = rhs({y.w + 0.5 * h * k1.w, y.wp + 0.5 * h * k1.wp});
  OdeState k3 = rhs({y.w + 0.5 * h * k2.w, y.wp + 0.5 * h * k2.wp});
  OdeState k4 = rhs({y.w + h * k3.w, y.wp + h * k3.wp});
  return {y.w + h / 6.0 * (k1.w + 2 * k2.w + 2 * k3.w + k4.w),
          y.wp + h / 6.0 * (k1.wp + 2 * k2.wp + 2 * k3.wp + k4.wp)};
}

// Advances one output step of width h. Substeps are halved while the
// step-doubling error estimate exceeds the bound, so stiff stretches
// (approaching the gradient guard) are resolved on the fixed output
// grid. Throws StepTooLarge when halving bottoms out, GradientBlowup
// when |w'| reaches the guard band.
OdeState advance_step(OdeRhs& rhs, OdeState y, double t, double h,
                      double err_bound, bool* blown) {
  constexpr int kMaxHalvings = 14;
  int pieces = 1, level = 0;
  int done = 0;
  *blown = false;
  while (done < pieces) {
    double hs = h / pieces;
    rhs.blown = false;
    OdeState full = rk4_step(rhs, y, hs);
    OdeState half = rk4_step(rhs, y, 0.5 * hs);
    half = rk4_step(rhs, half, 0.5 * hs);
    double err =
        std::max(std::abs(full.w - half.w), std::abs(full.wp - half.wp)) / 15.0;
    if (err > err_bound && level < kMaxHalvings) {
      pieces *= 2;
      done *= 2;
      ++level;
      continue;
    }
    if (err > err_bound) {
      // Persistent stiffness right against the admissibility wall is the
      // gradient singularity itself (w'' keeps one sign, so |w'| is
      // monotone there); classify it as blowup rather than step failure.
      if (std::abs(y.wp) >= 1.0 - 1e-3) {
        *blown = true;
        return y;
      }
      fail(ErrorCode::StepTooLarge,
           "RK4 error estimate " + std::to_string(err) + " at t = " +
               std::to_string(t + done * hs));
    }
    if (rhs.blown || std::abs(half.wp) >= 1.0 - kGradientGuard) {
      *blown = true;
      return half;
    }
    y = half;
    ++done;
  }
  return y;
}

}  // namespace

RadialProfile shoot(double sigma2_target, double w0, double wp0, double t_a,
                    double t_b, double dt, const ShootOptions& opts) {
  if (!(sigma2_target > 0))
    fail(ErrorCode::InvalidArgument, "sigma2 target must be positive");
  if (!(dt > 0) || !(t_b > t_a))
    fail(ErrorCode::InvalidArgument, "need t_b > t_a and dt > 0");
  if (!(std::abs(wp0) < 1.0))
    fail(ErrorCode::InvalidArgument, "|w'(t_a)| < 1 required");

  RadialProfile p;
  p.t0 = t_a;
  p.dt = dt;
  p.coeff = opts.coeff;
  p.provenance = ProfileProvenance::ode_solution;

  OdeRhs rhs{sigma2_target, opts.coeff, false};
  auto push = [&](const OdeState& y) {
    p.w.push_back(y.w);
    p.wp.push_back(y.wp);
    double d = 1.0 - y.wp * y.wp;
    p.wpp.push_back(-(sigma2_target / opts.coeff) * std::exp(4.0 * y.w) / d);
  };

  OdeState y{w0, wp0};
  if (std::abs(wp0) >= 1.0 - kGradientGuard) {
    if (opts.stop_on_blowup) {
      push(y);
      return p;
    }
    fail(ErrorCode::GradientBlowup, "at t = " + std::to_string(t_a));
  }
  push(y);

  auto n = static_cast<std::size_t>(std::llround((t_b - t_a) / dt));
  for (std::size_t i = 0; i < n; ++i) {
    double t = t_a + dt * static_cast<double>(i);
    bool blown = false;
    OdeState next = advance_step(rhs, y, t, dt, opts.step_error_bound, &blown);
    if (blown) {
      if (opts.stop_on_blowup) return p;
      fail(ErrorCode::GradientBlowup, "at t = " + std::to_string(t + dt));
    }
    y = next;
    push(y);
  }
  return p;
}

namespace {

// Composite Simpson on the uniform grid; trapezoid correction for an odd
// final interval.
double simpson(const std::vector<double>& f, double dt) {
  std::size_t n = f.size();
  if (n < 2) return 0;
  double acc = 0;
  std::size_t i = 0;
  while (i + 2 <= n - 1) {
    acc += dt / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    i += 2;
  }
  if (i == n - 2) acc += 0.5 * dt * (f[n - 2] + f[n - 1]);
  return acc;
}

}  // namespace

NeckDiagnostics mass_max_check(const RadialProfile& p, double c3, double c4) {
  if (p.size() < 3) fail(ErrorCode::InvalidArgument, "profile too short");
  NeckDiagnostics d;
  d.sigma2_min = std::numeric_limits<double>::infinity();
  double r_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(std::abs(p.wp[i]) < 1.0))
      fail(ErrorCode::NotAdmissible, "|w'| >= 1 at t = " + std::to_string(p.t(i)));
    d.sigma2_min = std::min(d.sigma2_min, p.sigma2_at(i));
    r_min = std::min(r_min, p.scalar_at(i));
  }
  if (d.sigma2_min < c3 - 1e-9)
    fail(ErrorCode::NotAdmissible,
         "sigma2 min " + std::to_string(d.sigma2_min) + " below " + std::to_string(c3));
  if (!(r_min > 0)) fail(ErrorCode::NotAdmissible, "scalar curvature not positive");

  std::vector<double> e4w;
  e4w.reserve(p.size());
  for (double w : p.w) e4w.push_back(std::exp(4.0 * w));
  d.mass = simpson(e4w, p.dt);
  d.w_max = *std::max_element(p.w.begin(), p.w.end());
  d.mass_max_slack = d.w_max - (0.5 * std::log(d.mass) + c4);

  const double window = std::log(2.0);
  d.cone_dev = 0;
  for (double ta = p.t0; ta + window <= p.t_end() + 1e-12; ta += window)
    d.cone_dev = std::max(d.cone_dev, cone_deviation(p, ta));
  d.admissible = true;
  return d;
}

RadialProfile interpolate_profiles(const RadialProfile& a, const RadialProfile& b,
                                   double t_param, double* min_sigma2,
                                   double* min_scalar) {
  if (a.size() != b.size() || std::abs(a.t0 - b.t0) > 1e-12 ||
      std::abs(a.dt - b.dt) > 1e-14)
    fail(ErrorCode::GridMismatch, "profiles live on different grids");
  if (!(t_param >= 0.0 && t_param <= 1.0))
    fail(ErrorCode::InvalidArgument, "t_param must lie in [0,1]");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a.sigma2_at(i) > 0) || !(a.scalar_at(i) > 0) ||
        !(b.sigma2_at(i) > 0) || !(b.scalar_at(i) > 0))
      fail(ErrorCode::NotAdmissible, "endpoint profile not admissible");
  }

  RadialProfile out;
  out.t0 = a.t0;
  out.dt = a.dt;
  out.coeff = a.coeff;
  out.provenance = ProfileProvenance::interpolated;
  double ms = std::numeric_limits<double>::infinity();
  double mr = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) {
    double ea = std::exp(-a.w[i]), eb = std::exp(-b.w[i]);
    double s = (1.0 - t_param) * ea + t_param * eb;
    double sp = -((1.0 - t_param) * ea * a.wp[i] + t_param * eb * b.wp[i]);
    double spp = (1.0 - t_param) * ea * (a.wp[i] * a.wp[i] - a.wpp[i]) +
                 t_param * eb * (b.wp[i] * b.wp[i] - b.wpp[i]);
    double w = -std::log(s);
    double wp = -sp / s;
    double wpp = -spp / s + (sp / s) * (sp / s);
    out.w.push_back(w);
    out.wp.push_back(wp);
    out.wpp.push_back(wpp);
    ms = std::min(ms, sigma2_radial(w, wp, wpp, out.coeff));
    mr = std::min(mr, scalar_radial(w, wp, wpp));
  }
  if (min_sigma2) *min_sigma2 = ms;
  if (min_scalar) *min_scalar = mr;
  return out;
}

double cone_deviation(const RadialProfile& p, double t_a) {
  const double window = std::log(2.0);
  std::size_t lo = static_cast<std::size_t>(std::ceil((t_a - p.t0) / p.dt - 1e-9));
  std::size_t hi = static_cast<std::size_t>(std::floor((t_a + window - p.t0) / p.dt + 1e-9));
  if (hi >= p.size()) hi = p.size() - 1;
  if (lo + 1 > hi || lo >= p.size())
    fail(ErrorCode::InvalidArgument, "window outside profile grid");

  double max_plus = -1e300, min_plus = 1e300;
  double max_minus = -1e300, min_minus = 1e300;
  for (std::size_t i = lo; i <= hi; ++i) {
    double dplus = p.w[i] - p.t(i);
    double dminus = p.w[i] + p.t(i);
    max_plus = std::max(max_plus, dplus);
    min_plus = std::min(min_plus, dplus);
    max_minus = std::max(max_minus, dminus);
    min_minus = std::min(min_minus, dminus);
  }
  double c_plus = 0.5 * (max_plus + min_plus);
  double c_minus = 0.5 * (max_minus + min_minus);
  double dev_plus = 0, dev_minus = 0;
  for (std::size_t i = lo; i <= hi; ++i) {
    dev_plus = std::max(dev_plus, std::abs(p.w[i] - p.t(i) - c_plus) +
                                      std::abs(p.wp[i] - 1.0));
    dev_minus = std::max(dev_minus, std::abs(p.w[i] + p.t(i) - c_minus) +
                                        std::abs(p.wp[i] + 1.0));
  }
  return std::min(dev_plus, dev_minus);
}

std::pair<double, double> radial_ricci_range(double r, double wrad,
                                             double wrad_p, double wrad_pp) {
  ScalarField w = scalar_radial([wrad](double) { return wrad; },
                                [wrad_p](double) { return wrad_p; },
                                [wrad_pp](double) { return wrad_pp; });
  MetricChart base = chart_flat(r + 2.0);
  MetricChart chart = chart_conformal(base, w, "radial_slice");
  Vec4 p(r, 0.0, 0.0, 0.0);
  CurvatureBundle b = curvature(chart, p);
  auto ev = schouten_eigenvalues(b.Ric, b.g);
  return {ev[0], ev[3]};
}

BishopGromovReport bishop_gromov_radial(const RadialProfile& p, double tail,
                                        int stride, double tol) {
  if (p.size() < static_cast<std::size_t>(2 * stride + 1))
    fail(ErrorCode::InvalidArgument, "profile too short for the stride");

  BishopGromovReport rep;
  rep.min_ricci = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); i += stride) {
    double t = p.t(i);
    double r = std::exp(t);
    double wr = p.w[i] - t;
    double wrp = (p.wp[i] - 1.0) / r;
    double wrpp = (p.wpp[i] - p.wp[i] + 1.0) / (r * r);
    rep.min_ricci = std::min(rep.min_ricci, radial_ricci_range(r, wr, wrp, wrpp).first);
  }
  if (rep.min_ricci < -1e-9)
    fail(ErrorCode::RicciNotNonnegative,
         "min Ricci eigenvalue " + std::to_string(rep.min_ricci));

  // Cumulative geodesic radius s(t) = tail + int e^w dt (Simpson pairs).
  std::vector<double> s(p.size(), tail);
  for (std::size_t i = 2; i < p.size(); i += 2) {
    double f0 = std::exp(p.w[i - 2]), f1 = std::exp(p.w[i - 1]), f2 = std::exp(p.w[i]);
    s[i] = s[i - 2] + p.dt / 3.0 * (f0 + 4.0 * f1 + f2);
  }

  const double two_pi2 = 2.0 * 3.14159265358979323846 * 3.14159265358979323846;
  rep.worst_increase = 0;
  double prev_ratio = std::numeric_limits<double>::infinity();
  std::size_t hop = 2 * std::max(1, stride / 2);  // even, so s[i] is filled
  for (std::size_t i = 0; i < p.size(); i += hop) {
    BishopGromovRow row;
    row.t = p.t(i);
    row.s = s[i];
    row.area = two_pi2 * std::exp(3.0 * p.w[i]);
    row.ratio = row.area / (row.s * row.s * row.s);
    if (!rep.rows.empty()) {
      double up = (row.ratio - prev_ratio) / std::max(std::abs(prev_ratio), 1e-300);
      rep.worst_increase = std::max(rep.worst_increase, up);
    }
    prev_ratio = row.ratio;
    rep.rows.push_back(row);
  }
  rep.monotone = rep.worst_increase <= tol;
  return rep;
}

TailedProfile shoot_with_tail(double sigma2_target, double w0, double wp0,
                              double t_anchor, double t_right, double dt,
                              const ShootOptions& opts) {
  ShootOptions right_opts = opts;
  right_opts.stop_on_blowup = true;
  RadialProfile right = shoot(sigma2_target, w0, wp0, t_anchor, t_right, dt, right_opts);

  // Leftward march in reversed time until the gradient guard or the mass
  // floor is reached.
  OdeRhs rhs{sigma2_target, opts.coeff, false};
  const double mass_floor = 1e-12;
  std::vector<double> lw, lwp;
  OdeState y{w0, -wp0};  // reversed orientation
  std::size_t max_steps = static_cast<std::size_t>(400.0 / dt);
  for (std::size_t k = 0; k < max_steps; ++k) {
    bool blown = false;
    OdeState next = advance_step(rhs, y, -t_anchor + k * dt, dt,
                                 opts.step_error_bound, &blown);
    if (blown) break;
    y = next;
    lw.push_back(y.w);
    lwp.push_back(-y.wp);  // back to forward orientation
    if (std::exp(4.0 * y.w) <= mass_floor) break;
  }

  TailedProfile out;
  RadialProfile& p = out.profile;
  p.coeff = opts.coeff;
  p.provenance = ProfileProvenance::ode_solution;
  p.dt = dt;
  p.t0 = t_anchor - dt * static_cast<double>(lw.size());
  auto push = [&](double w, double wp) {
    double d = 1.0 - wp * wp;
    p.w.push_back(w);
    p.wp.push_back(wp);
    p.wpp.push_back(-(sigma2_target / opts.coeff) * std::exp(4.0 * w) / d);
  };
  for (std::size_t k = lw.size(); k-- > 0;) push(lw[k], lwp[k]);
  for (std::size_t k = 0; k < right.size(); ++k) push(right.w[k], right.wp[k]);

  // Geodesic distance from the tip to the left grid end. The reduced
  // equation has the first integral
  //   q(w') + (target / (4 coeff)) e^{4w} = C,  q(x) = x^2/2 - x^4/4;
  // C < 1/4 means the backward solution opens into a cone of slope
  // q^{-1}(C) < 1, C >= 1/4 means it ends at |w'| = 1 a finite distance
  // away.
  double w_cut = p.w.front(), p_cut = p.wp.front();
  auto q = [](double x) { return 0.5 * x * x - 0.25 * x * x * x * x; };
  double C = q(p_cut) + (sigma2_target / opts.coeff) * std::exp(4.0 * w_cut) / 4.0;
  if (C < 0.25 - 1e-9) {
    // Conical tip: w' tends to the positive root of q(p) = C.
    out.tail = std::exp(w_cut) / std::max(p_cut, 1e-8);
  } else {
    // Singular end at finite distance.
    double gap = std::max(0.25 - q(p_cut), 0.0);
    double e4s = std::max(std::exp(4.0 * w_cut) -
                              gap * 4.0 * opts.coeff / sigma2_target, 0.0);
    out.tail = std::exp(w_cut) - std::pow(e4s, 0.25);
  }
  return out;
}

}  // namespace cglab
