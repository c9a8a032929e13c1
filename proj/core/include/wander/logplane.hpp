#pragma once

#include <optional>
#include <string>
#include <variant>

#include "wander/construction.hpp"
#include "wander/wide.hpp"

namespace wander {

// A nonzero complex number in leveled log coordinates:
//   z = R_level * exp(s + i*theta),
// with theta kept in (-pi, pi]. Offsets stay O(sqrt(gamma*n!)) on the
// bands where absolute precision matters, while absolute logs reach
// gamma*n!. lift, when present, is a continuous argument (lift == theta
// mod 2pi) used by curve operations.
struct LPoint {
  int level = 0;
  Real s;
  Real theta;
  std::optional<Real> lift;
};

// Distinguished value for z = 0; absorbing under the map (g(0) = 0).
struct LZero {};

using LValue = std::variant<LZero, LPoint>;

inline bool is_zero(const LValue& v) { return std::holds_alternative<LZero>(v); }
inline const LPoint& as_point(const LValue& v) { return std::get<LPoint>(v); }

// theta normalized into (-pi, pi].
Real principal_angle(const Real& theta);

// Same number re-expressed against R_target; the offset change
// gamma*(A_src - A_target) is applied without rounding, so a round trip
// restores s bit for bit.
LPoint rebase(const LPoint& p, const Construction& ctx, int target_level);

// log|z| in absolute nats: gamma*A_level + s.
Real abs_log(const LPoint& p, const Construction& ctx);

// Mantissa algebra at a common level: lmul/lpow/lscale act on the offset
// pair (s, theta). At level 0 these are exact complex multiplication,
// power and scaling; at level n, lpow composed with a level bump to n+1
// is exactly the core map a_n z^{n+1}.
LPoint lmul(const LPoint& p, const LPoint& q);
LPoint lpow(const LPoint& p, long k);
LPoint lscale(const LPoint& p, const Real& log_c, const Real& arg_c);

// log(z + w) for operands at a common level, via log(1 + w/z) against the
// larger-modulus operand. Ratios below exp(-guard) are dropped with the
// absolute log-error bound accumulated into *dropped_err when given.
// Throws CatastrophicCancellation when |1 + w/z| < 1e-12.
LValue ladd(const LPoint& p, const LPoint& q, double* dropped_err = nullptr);

inline constexpr double kLAddGuardNats = 500.0;

enum class Ordering { Less, Equal, Greater };

// Three-way comparison of log|p| against a radius given as an offset at
// bound_level, after rebasing to a common level. Equal within 2 ulps.
Ordering cmp_modulus(const LPoint& p, int bound_level, const Real& bound_offset,
                     const Construction& ctx);

// Textual round-trip format "L<level>:<s>:<theta>", 17 significant digits.
std::string format_lpoint(const LPoint& p);
LPoint parse_lpoint(const std::string& text, mpfr_prec_t prec);

}  // namespace wander
