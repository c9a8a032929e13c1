#include "wander/qgmap.hpp"

#include <cmath>

#include "wander/errors.hpp"

namespace wander {

std::string to_string(const RegionTag& tag) {
  switch (tag.region) {
    case Region::InnerCore: return "InnerCore";
    case Region::Core: return "Core(" + std::to_string(tag.n) + ")";
    case Region::CriticalBand: return "CriticalBand(" + std::to_string(tag.n) + ")";
    case Region::InterpLower: return "InterpLower(" + std::to_string(tag.n) + ")";
    case Region::InterpUpper: return "InterpUpper(" + std::to_string(tag.n) + ")";
  }
  return "?";
}

bool is_interp(const RegionTag& tag) {
  return tag.region == Region::InterpLower || tag.region == Region::InterpUpper;
}

int band_index(const RegionTag& tag) {
  if (tag.region == Region::InterpUpper) return tag.n;
  if (tag.region == Region::InterpLower) return tag.n - 1;
  return 0;
}

int annulus_index(const RegionTag& tag) {
  if (tag.region == Region::InterpLower) return tag.n - 1;
  return tag.n;
}

RegionTag classify(const LPoint& p, const Construction& ctx) {
  const int N = ctx.max_level();
  Real ell = abs_log(p, ctx);
  if (ell <= ctx.log_P_abs(2)) return {Region::InnerCore, 1};
  if (ell > ctx.log_T_abs(N)) throw BeyondMaxLevel("|z| beyond T_" + std::to_string(N));

  int m = N;  // smallest level with ell <= log P_{m+1}
  for (int n = 2; n <= N; ++n) {
    if (ell <= ctx.log_P_abs(n + 1)) {
      m = n;
      break;
    }
  }
  // The within-level comparison is authoritative at boundaries.
  Real s = rebase(p, ctx, m).s;
  const Real& h = ctx.half(m);
  Real h2 = h + h;
  if (s <= -h2) return m == 2 ? RegionTag{Region::InnerCore, 1}
                              : RegionTag{Region::Core, m - 1};
  if (s < -h) return {Region::InterpLower, m};
  if (s <= h) return {Region::CriticalBand, m};
  if (s < h2) return {Region::InterpUpper, m};
  return {Region::Core, m};
}

namespace detail {

LPoint eval_core(const LPoint& p, int n, const Construction& ctx) {
  LPoint q = p.level == n ? p : rebase(p, ctx, n);
  LPoint out = lpow(q, n + 1);
  out.level = n + 1;  // the level bump is exactly the factor a_n
  return out;
}

// |e^w - 1| and arg(e^w - 1), stable near w = 0: the squared modulus is
// expm1(s)^2 + 4 e^s sin^2(theta/2).
struct Em1 {
  Real logmod;
  Real arg;
};

static Em1 log_expm1(const Real& s, const Real& theta) {
  Real es = exp(s);
  Real a = expm1(s);
  Real sh = sin(theta * 0.5);
  Real mag2 = a * a + es * (sh * sh) * 4.0;
  if (mag2.sgn() <= 0) throw CatastrophicCancellation("z - R_n vanished at working precision");
  Real logmod = log(mag2) * 0.5;
  if (logmod < std::log(1e-12))
    throw CatastrophicCancellation("|z/R_n - 1| < 1e-12");
  Real arg = atan2(es * sin(theta), es * cos(theta) - 1.0);
  return {std::move(logmod), std::move(arg)};
}

LValue eval_critical(const LPoint& p, int n, const Construction& ctx) {
  LPoint q = p.level == n ? p : rebase(p, ctx, n);
  if (q.s.is_zero() && q.theta.is_zero()) return LZero{};  // z = R_n, root of (z - R_n)
  Em1 e = log_expm1(q.s, q.theta);
  Real pi = Real::pi(ctx.prec());
  LPoint out;
  out.level = n + 1;
  out.s = ctx.log_abs_c(n) + q.s * static_cast<long>(n) + e.logmod;
  out.theta = principal_angle(pi + q.theta * static_cast<long>(n) + e.arg);
  return out;
}

std::complex<double> interp_log_value(const Construction& ctx, const RegionTag& band,
                                      std::complex<double> w) {
  const int n = band.n;
  const double h = ctx.half(n).to_double();
  const double logc = ctx.log_abs_c(n).to_double();
  if (band.region == Region::InterpLower) {
    double t = (w.real() + 2.0 * h) / h;
    std::complex<double> delta = logc + std::log(1.0 - std::exp(w));
    return double(n) * w + t * delta;
  }
  double t = (2.0 * h - w.real()) / h;
  std::complex<double> delta =
      std::complex<double>(logc, M_PI) + std::log(1.0 - std::exp(-w));
  return double(n + 1) * w + t * delta;
}

DilatationStats measure_dilatation_grid(
    const std::function<std::complex<double>(std::complex<double>)>& map,
    double x0, double x1, int radial, int angular, const RegionTag& band) {
  DilatationStats st;
  st.band = band;
  st.radial = radial;
  st.angular = angular;
  st.step = (x1 - x0) / (4.0 * radial);
  const double d = st.step;
  double sumK = 0.0;
  for (int i = 0; i < radial; ++i) {
    double x = x0 + (i + 0.5) * (x1 - x0) / radial;
    for (int j = 0; j < angular; ++j) {
      double y = -M_PI + (j + 0.5) * 2.0 * M_PI / angular;
      std::complex<double> w(x, y);
      std::complex<double> gx = (map(w + d) - map(w - d)) / (2.0 * d);
      std::complex<double> gy =
          (map(w + std::complex<double>(0, d)) - map(w - std::complex<double>(0, d))) /
          (2.0 * d);
      std::complex<double> dw = (gx - std::complex<double>(0, 1) * gy) * 0.5;
      std::complex<double> dwbar = (gx + std::complex<double>(0, 1) * gy) * 0.5;
      double adw = std::abs(dw);
      if (adw < 1e-300) throw DegenerateJacobian("|dG/dw| < 1e-300 on the grid");
      double mu = std::abs(dwbar) / adw;
      double K = mu < 1.0 ? (1.0 + mu) / (1.0 - mu)
                          : std::numeric_limits<double>::infinity();
      st.max_mu = std::max(st.max_mu, mu);
      st.max_K = std::max(st.max_K, K);
      sumK += K;
    }
  }
  st.mean_K = sumK / (double(radial) * angular);
  return st;
}

}  // namespace detail

LPoint interpolate_band(const LPoint& p, const Construction& ctx,
                        const RegionTag& band) {
  if (!is_interp(band)) throw OutsideBand("not an interpolation band: " + to_string(band));
  const int n = band.n;
  LPoint q = p.level == n ? p : rebase(p, ctx, n);
  const Real& h = ctx.half(n);
  Real h2 = h + h;
  const Real& logc = ctx.log_abs_c(n);
  LPoint out;
  out.level = n + 1;

  if (band.region == Region::InterpLower) {
    if (q.s < -h2 || q.s > -h) throw OutsideBand("offset outside [P_n, Q_n]");
    Real t = (q.s + h2) / h;
    // Delta = log(-c_n) + log(1 - e^w); |e^w| <= e^{-h}, no winding.
    Real ew = exp(q.s);
    Real d_re = logc + log1p(ew * (ew - cos(q.theta) * 2.0)) * 0.5;
    Real d_im = atan2(-(ew * sin(q.theta)), 1.0 - ew * cos(q.theta));
    out.s = q.s * static_cast<long>(n) + t * d_re;
    out.theta = principal_angle(q.theta * static_cast<long>(n) + t * d_im);
    return out;
  }

  if (q.s < h || q.s > h2) throw OutsideBand("offset outside [S_n, T_n]");
  Real t = (h2 - q.s) / h;
  // Delta = log(-c_n) + i*pi + log(1 - e^{-w}); |e^{-w}| <= e^{-h}.
  Real er = exp(-q.s);
  Real d_re = logc + log1p(er * (er - cos(q.theta) * 2.0)) * 0.5;
  Real d_im = Real::pi(ctx.prec()) + atan2(er * sin(q.theta), 1.0 - er * cos(q.theta));
  out.s = q.s * static_cast<long>(n + 1) + t * d_re;
  out.theta = principal_angle(q.theta * static_cast<long>(n + 1) + t * d_im);
  return out;
}

LValue eval_g(const LValue& v, const Construction& ctx) {
  if (is_zero(v)) return LZero{};
  const LPoint& p = as_point(v);
  RegionTag tag = classify(p, ctx);
  switch (tag.region) {
    case Region::InnerCore:
      return detail::eval_core(p, 1, ctx);
    case Region::Core:
      return detail::eval_core(p, tag.n, ctx);
    case Region::CriticalBand:
      return detail::eval_critical(p, tag.n, ctx);
    case Region::InterpLower:
    case Region::InterpUpper:
      return interpolate_band(p, ctx, tag);
  }
  throw BeyondMaxLevel("unreachable");
}

DilatationStats estimate_dilatation(const Construction& ctx, const RegionTag& band,
                                    int radial, int angular) {
  if (!is_interp(band)) throw InvalidParameter("estimate_dilatation: not an interpolation band");
  if (radial < 8 || angular < 8) throw InvalidParameter("estimate_dilatation: grid must be >= 8x8");
  double h = ctx.half(band.n).to_double();
  double x0 = band.region == Region::InterpLower ? -2.0 * h : h;
  double x1 = band.region == Region::InterpLower ? -h : 2.0 * h;
  auto map = [&](std::complex<double> w) { return detail::interp_log_value(ctx, band, w); };
  return detail::measure_dilatation_grid(map, x0, x1, radial, angular, band);
}

VerificationReport check_absorption(const Construction& ctx, int n_max, int samples) {
  if (n_max > ctx.max_level() - 1)
    throw LevelOutOfRange("check_absorption: n_max must be <= max_level - 1");
  VerificationReport rep;
  rep.gamma = ctx.gamma().to_double();
  rep.delta = ctx.params().delta;
  Real two_pi = Real::two_pi(ctx.prec());
  for (int n = 1; n <= n_max; ++n) {
    // boundary circles |z| = S_n and |z| = Q_{n+1}
    LPoint circle[2] = {
        {n, ctx.half(n), Real(0L, ctx.prec()), std::nullopt},
        {n + 1, -ctx.half(n + 1), Real(0L, ctx.prec()), std::nullopt}};
    double lo_margin = 1e300, hi_margin = 1e300;
    for (const LPoint& base : circle) {
      for (int k = 0; k < samples; ++k) {
        LPoint z = base;
        z.theta = principal_angle(two_pi * ((k + 0.5) / samples - 0.5));
        LValue img = eval_g(z, ctx);
        Real a = abs_log(as_point(img), ctx);
        // inside ann(S_{n+1}, Q_{n+2})
        Real lo = a - (ctx.log_R(n + 1) + ctx.half(n + 1));
        Real hi = (ctx.log_R(n + 2) - ctx.half(n + 2)) - a;
        lo_margin = std::min(lo_margin, lo.to_double());
        hi_margin = std::min(hi_margin, hi.to_double());
      }
    }
    double scale = ctx.log_R_d(n + 2);
    rep.add("absorption_sample_lo", n, lo_margin, ctx.check_tolerance(scale));
    rep.add("absorption_sample_hi", n, hi_margin, ctx.check_tolerance(scale));
  }
  return rep;
}

VerificationReport check_continuity(const Construction& ctx, int n_max,
                                    int angular_samples) {
  if (n_max > ctx.max_level())
    throw LevelOutOfRange("check_continuity: n_max must be <= max_level");
  VerificationReport rep;
  rep.gamma = ctx.gamma().to_double();
  rep.delta = ctx.params().delta;
  Real two_pi = Real::two_pi(ctx.prec());
  constexpr double kTol = 1e-9;

  auto diff = [&](const LPoint& a0, const LPoint& b) {
    LPoint a = a0.level == b.level ? a0 : rebase(a0, ctx, b.level);
    Real ds = abs(a.s - b.s);
    Real dt = abs(principal_angle(a.theta - b.theta));
    return std::max(ds.to_double(), dt.to_double());
  };

  for (int n = 2; n <= n_max; ++n) {
    const Real& h = ctx.half(n);
    Real h2 = h + h;
    double worst[4] = {0, 0, 0, 0};
    for (int k = 0; k < angular_samples; ++k) {
      Real theta = principal_angle(two_pi * ((k + 0.5) / angular_samples - 0.5));
      LPoint at_P{n, -h2, theta, std::nullopt};
      LPoint at_Q{n, -h, theta, std::nullopt};
      LPoint at_S{n, h, theta, std::nullopt};
      LPoint at_T{n, h2, theta, std::nullopt};
      RegionTag lower{Region::InterpLower, n}, upper{Region::InterpUpper, n};
      worst[0] = std::max(worst[0], diff(detail::eval_core(at_P, n - 1, ctx),
                                         interpolate_band(at_P, ctx, lower)));
      worst[1] = std::max(worst[1], diff(as_point(detail::eval_critical(at_Q, n, ctx)),
                                         interpolate_band(at_Q, ctx, lower)));
      worst[2] = std::max(worst[2], diff(as_point(detail::eval_critical(at_S, n, ctx)),
                                         interpolate_band(at_S, ctx, upper)));
      worst[3] = std::max(worst[3], diff(detail::eval_core(at_T, n, ctx),
                                         interpolate_band(at_T, ctx, upper)));
    }
    rep.add("continuity_P", n, kTol - worst[0]);
    rep.add("continuity_Q", n, kTol - worst[1]);
    rep.add("continuity_S", n, kTol - worst[2]);
    rep.add("continuity_T", n, kTol - worst[3]);
  }
  return rep;
}

}  // namespace wander
