#include "wander/logplane.hpp"

#include <cmath>

#include "wander/errors.hpp"

namespace wander {

Real principal_angle(const Real& theta) {
  Real tp = Real::two_pi(theta.prec() + 8);
  Real r(theta.prec());
  mpfr_remainder(r.raw(), theta.raw(), tp.raw(), MPFR_RNDN);
  // remainder lands in [-pi, pi]; fold the lower endpoint.
  Real pi_lo = -Real::pi(theta.prec());
  if (r <= pi_lo) r += tp;
  return r;
}

LPoint rebase(const LPoint& p, const Construction& ctx, int target_level) {
  if (target_level < 0 || target_level > ctx.max_level() + 2)
    throw LevelOutOfRange("rebase: target level " + std::to_string(target_level));
  if (target_level == p.level) return p;
  Real diff = Real::add_exact(ctx.A(p.level), -ctx.A(target_level));
  Real bump = ctx.gamma() * diff;
  LPoint out{target_level, Real::add_exact(p.s, bump), p.theta, p.lift};
  return out;
}

Real abs_log(const LPoint& p, const Construction& ctx) {
  return fma(ctx.gamma(), ctx.A(p.level), p.s);
}

LPoint lmul(const LPoint& p, const LPoint& q) {
  if (p.level != q.level)
    throw InvalidParameter("lmul: operands must share a level (rebase first)");
  LPoint out{p.level, p.s + q.s, principal_angle(p.theta + q.theta), std::nullopt};
  if (p.lift && q.lift) out.lift = *p.lift + *q.lift;
  return out;
}

LPoint lpow(const LPoint& p, long k) {
  LPoint out{p.level, p.s * k, principal_angle(p.theta * k), std::nullopt};
  if (p.lift) out.lift = *p.lift * k;
  return out;
}

LPoint lscale(const LPoint& p, const Real& log_c, const Real& arg_c) {
  LPoint out{p.level, p.s + log_c, principal_angle(p.theta + arg_c), std::nullopt};
  if (p.lift) out.lift = *p.lift + arg_c;
  return out;
}

LValue ladd(const LPoint& p, const LPoint& q, double* dropped_err) {
  if (p.level != q.level)
    throw InvalidParameter("ladd: operands must share a level (rebase first)");
  const LPoint& big = p.s >= q.s ? p : q;
  const LPoint& small = p.s >= q.s ? q : p;
  Real d = small.s - big.s;  // <= 0
  if (d < -kLAddGuardNats) {
    if (dropped_err) *dropped_err += std::exp(d.to_double());
    return LPoint{big.level, big.s, big.theta, std::nullopt};
  }
  Real dth = small.theta - big.theta;
  Real r = exp(d);
  // |1 + r e^{i dth}|^2 = 1 + r(2 cos dth + r)
  Real q2 = r * (cos(dth) * 2.0 + r);
  Real u_im = r * sin(dth);
  Real u_re = 1.0 + r * cos(dth);
  if (u_re.is_zero() && u_im.is_zero())
    throw CatastrophicCancellation("exact cancellation in ladd");
  Real one_plus = 1.0 + q2;
  if (one_plus.sgn() <= 0)
    throw CatastrophicCancellation("cancellation below working precision");
  Real logmod = log1p(q2) * 0.5;
  if (logmod < std::log(1e-12))
    throw CatastrophicCancellation("|1 + w/z| < 1e-12");
  Real theta = principal_angle(big.theta + atan2(u_im, u_re));
  return LPoint{big.level, big.s + logmod, theta, std::nullopt};
}

Ordering cmp_modulus(const LPoint& p, int bound_level, const Real& bound_offset,
                     const Construction& ctx) {
  LPoint q = p.level == bound_level ? p : rebase(p, ctx, bound_level);
  Real d = q.s - bound_offset;
  if (d.is_zero()) return Ordering::Equal;
  // Equal within 2 ulps of the larger operand.
  double scale = std::max(std::fabs(q.s.to_double()), std::fabs(bound_offset.to_double()));
  double tol = std::ldexp(scale, 2 - static_cast<int>(d.prec()));
  double dd = d.to_double();
  if (std::fabs(dd) <= tol) return Ordering::Equal;
  return dd < 0 ? Ordering::Less : Ordering::Greater;
}

std::string format_lpoint(const LPoint& p) {
  return "L" + std::to_string(p.level) + ":" + p.s.str(17) + ":" + p.theta.str(17);
}

LPoint parse_lpoint(const std::string& text, mpfr_prec_t prec) {
  if (text.size() < 2 || text[0] != 'L')
    throw InvalidParameter("point must look like L<level>:<s>:<theta>, got '" + text + "'");
  size_t c1 = text.find(':');
  size_t c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw InvalidParameter("point must look like L<level>:<s>:<theta>, got '" + text + "'");
  int level = 0;
  try {
    level = std::stoi(text.substr(1, c1 - 1));
  } catch (const std::exception&) {
    throw InvalidParameter("bad level in point '" + text + "'");
  }
  if (level < 0) throw InvalidParameter("bad level in point '" + text + "'");
  Real s = Real::parse(text.substr(c1 + 1, c2 - c1 - 1), prec);
  Real theta = Real::parse(text.substr(c2 + 1), prec);
  return LPoint{level, std::move(s), principal_angle(theta), std::nullopt};
}

}  // namespace wander
