#include "wander/dynamics.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

#include "wander/errors.hpp"

namespace wander {

OrbitRecord iterate(const LValue& seed, const Construction& ctx, int steps) {
  if (steps < 1) throw InvalidParameter("iterate: steps must be >= 1");
  OrbitRecord rec;
  auto record = [&](const LValue& v) {
    rec.points.push_back(v);
    if (is_zero(v)) {
      rec.tags.push_back(std::nullopt);
      return true;
    }
    try {
      RegionTag tag = classify(as_point(v), ctx);
      rec.tags.push_back(tag);
      if (int j = band_index(tag); j > 0) rec.band_visits[j] += 1;
      return true;
    } catch (const BeyondMaxLevel&) {
      rec.tags.push_back(std::nullopt);
      return false;
    }
  };

  bool classifiable = record(seed);
  LValue z = seed;
  for (int k = 0; k < steps; ++k) {
    if (!classifiable) {
      rec.stopped = OrbitRecord::Stop::BeyondMaxLevel;
      return rec;
    }
    LValue next;
    if (is_zero(z)) {
      next = LZero{};  // g(0) = 0
    } else {
      try {
        next = eval_g(z, ctx);
      } catch (const CatastrophicCancellation&) {
        next = LZero{};
      } catch (const BeyondMaxLevel&) {
        rec.stopped = OrbitRecord::Stop::BeyondMaxLevel;
        return rec;
      }
    }
    rec.steps_taken = k + 1;
    classifiable = record(next);
    z = next;
    if (is_zero(z)) {
      rec.stopped = OrbitRecord::Stop::ReachedZero;
      return rec;
    }
  }
  rec.stopped = classifiable ? OrbitRecord::Stop::Budget : OrbitRecord::Stop::BeyondMaxLevel;
  return rec;
}

VerificationReport check_disk_chain(const Construction& ctx, double delta,
                                    int n_from, int n_to, int samples) {
  if (n_from < 2 || n_from > n_to || n_to > ctx.max_level() - 1)
    throw LevelOutOfRange("check_disk_chain: need 2 <= n_from <= n_to <= max_level-1");
  if (!(delta > 0.0) || !(delta < 1.0))
    throw InvalidParameter("check_disk_chain: delta must lie in (0,1)");

  VerificationReport rep;
  rep.gamma = ctx.gamma().to_double();
  rep.delta = delta;
  mpfr_prec_t prec = ctx.prec();
  Real two_pi = Real::two_pi(prec);

  for (int n = n_from; n <= n_to; ++n) {
    // D_n must sit inside ann(Q_n, R_n); in units of R_n the disk is
    // D(n/(n+1), delta/n^4).
    double center = double(n) / (n + 1.0);
    double rho = delta / std::pow(double(n), 4);
    double q_n = std::exp(-ctx.half(n).to_double());
    if (!(center - rho > q_n) || !(center + rho < 1.0))
      throw SampleOutsideBand("D_" + std::to_string(n) + " leaves ann(Q_n, R_n)");

    // center maps exactly to xi_{n+1}
    LPoint xi{n, ctx.xi_offset(n), Real(0L, prec), std::nullopt};
    LValue img_c = eval_g(xi, ctx);
    double c_next = (n + 1.0) / (n + 2.0);
    double rho_next = delta / std::pow(n + 1.0, 4);
    {
      const LPoint& w = as_point(img_c);
      Real es = exp(w.s);
      Real dre = es * cos(w.theta) - c_next;
      Real dim = es * sin(w.theta);
      double dist = hypot(dre, dim).to_double();
      rep.add("disk_center", n, 1.0 - dist / rho_next, 0.0);
    }

    double worst = 1e300;
    double max_deriv = 0.0;
    std::vector<std::pair<double, double>> images(samples);
    Real m_re(center, prec);
    for (int k = 0; k < samples; ++k) {
      Real phi = two_pi * ((k + 0.5) / samples - 0.5);
      Real u_re = m_re + cos(phi) * rho;
      Real u_im = sin(phi) * rho;
      LPoint z{n, log(hypot(u_re, u_im)), atan2(u_im, u_re), std::nullopt};
      LValue img = eval_g(z, ctx);
      const LPoint& w = as_point(img);
      Real es = exp(w.s);
      double wre = (es * cos(w.theta)).to_double();
      double wim = (es * sin(w.theta)).to_double();
      images[k] = {wre, wim};
      double dist = std::hypot(wre - c_next, wim);
      worst = std::min(worst, 1.0 - dist / rho_next);
    }
    rep.add("disk_chain", n, worst, 0.0);

    // sampled |dG/dzeta| against the chain bound (2 delta / n^2)|c_n|,
    // both in units of R_{n+1} over R_n
    double dphi = 2.0 * M_PI / samples;
    for (int k = 0; k < samples; ++k) {
      const auto& a = images[k];
      const auto& b = images[(k + 1) % samples];
      double dG = std::hypot(b.first - a.first, b.second - a.second) / dphi;
      max_deriv = std::max(max_deriv, dG / rho);
    }
    double bound = (2.0 * delta / (double(n) * n)) * std::fabs(ctx.c(n));
    rep.add("disk_deriv", n, std::log(bound) - std::log(max_deriv), 0.0);
  }
  return rep;
}

Real log_max_modulus(const Construction& ctx, const Real& log_r, int iterations,
                     int samples) {
  if (iterations < 0) throw InvalidParameter("log_max_modulus: iterations < 0");
  if (samples < 4) throw InvalidParameter("log_max_modulus: samples < 4");
  if (log_r > ctx.log_T_abs(ctx.max_level()))
    throw BeyondMaxLevel("circle beyond T_max_level");
  if (iterations == 0) return log_r;

  mpfr_prec_t prec = ctx.prec();
  // choose the deepest level below the circle as the representation base
  int base = 0;
  for (int n = 0; n <= ctx.max_level(); ++n) {
    if (ctx.log_R(n) <= log_r) base = n;
  }
  Real s = log_r - ctx.log_R(base);

  auto value_at = [&](const Real& theta) -> double {
    LPoint z{base, s, principal_angle(theta), std::nullopt};
    LValue v = z;
    for (int i = 0; i < iterations; ++i) v = eval_g(v, ctx);  // BeyondMaxLevel propagates
    if (is_zero(v)) return -1e300;
    return abs_log(as_point(v), ctx).to_double();
  };

  Real two_pi = Real::two_pi(prec);
  double best = -1e300;
  int best_k = 0;
  for (int k = 0; k < samples; ++k) {
    double val = value_at(two_pi * ((k + 0.5) / samples - 0.5));
    if (val > best) {
      best = val;
      best_k = k;
    }
  }
  // golden-section refinement around the best sample
  double lo = (best_k - 0.5 + 0.5) / samples - 0.5, hi = (best_k + 1.5 + 0.5) / samples - 0.5;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = value_at(two_pi * x1), f2 = value_at(two_pi * x2);
  for (int it = 0; it < 40 && (b - a) > 1e-12; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = value_at(two_pi * x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = value_at(two_pi * x1);
    }
  }
  double refined = std::max(std::max(f1, f2), best);
  return Real(refined, prec);
}

std::string to_string(const EscapeClass& e) {
  switch (e.kind) {
    case EscapeClass::Kind::FastEscaping:
      return "FAST(L=" + std::to_string(e.L) + ") witnessed_to=" + std::to_string(e.witnessed_to);
    case EscapeClass::Kind::Escaping:
      return "ESCAPING witnessed_to=" + std::to_string(e.witnessed_to);
    case EscapeClass::Kind::Bounded:
      return "BOUNDED witnessed_to=" + std::to_string(e.witnessed_to);
    case EscapeClass::Kind::Undetermined:
      return "UNDETERMINED witnessed_to=" + std::to_string(e.witnessed_to);
  }
  return "?";
}

EscapeClass classify_escape(const LPoint& p, const Construction& ctx, int budget) {
  if (budget < 3) throw InvalidParameter("classify_escape: budget must be >= 3");
  OrbitRecord orbit = iterate(p, ctx, budget);
  const int M = static_cast<int>(orbit.points.size()) - 1;

  Real log_T2 = ctx.log_T_abs(2);
  bool below_T2 = orbit.stopped != OrbitRecord::Stop::BeyondMaxLevel;
  for (const LValue& v : orbit.points) {
    if (is_zero(v)) continue;
    if (abs_log(as_point(v), ctx) > log_T2) {
      below_T2 = false;
      break;
    }
  }
  if (below_T2 && orbit.stopped != OrbitRecord::Stop::BeyondMaxLevel)
    return {EscapeClass::Kind::Bounded, 0, M};

  auto exceeds_S = [&](int point_idx, int level) {
    const LValue& v = orbit.points[point_idx];
    if (is_zero(v)) return false;
    return abs_log(as_point(v), ctx) > ctx.log_R(level) + ctx.half(level);
  };

  for (int L = 1; L <= budget / 2; ++L) {
    int hi = std::min(M - L, ctx.max_level() + 1);
    if (hi < 3) continue;
    int n0 = hi + 1;
    for (int n = hi; n >= 1; --n) {
      if (!exceeds_S(n + L, n + 1)) break;
      n0 = n;
    }
    if (n0 <= hi - 2) return {EscapeClass::Kind::FastEscaping, L, hi};
  }
  if (orbit.stopped == OrbitRecord::Stop::BeyondMaxLevel)
    return {EscapeClass::Kind::Escaping, 0, M};
  return {EscapeClass::Kind::Undetermined, 0, M};
}

std::vector<HnRow> hn_experiment(const Construction& ctx, int m, const HnProbe& probe,
                                 int n_max) {
  if (m < 2 || m >= n_max || n_max > ctx.max_level())
    throw LevelOutOfRange("hn_experiment: need 2 <= m < n_max <= max_level");
  mpfr_prec_t prec = ctx.prec();

  LPoint z{m, Real(), Real(0L, prec), std::nullopt};
  double reference = 0.0;
  if (probe.is_disk) {
    if (probe.l != m && probe.l != m + 1)
      throw InvalidParameter("hn_experiment: disk probe l must be m or m+1");
    z = LPoint{probe.l, ctx.xi_offset(probe.l), Real(0L, prec), std::nullopt};
    reference = probe.l == m ? 0.0 : ctx.gamma_fact(m).to_double();
  } else {
    Real lo = ctx.half(m) + ctx.half(m);  // T_m offset
    Real hi = ctx.gamma_fact(m) - (ctx.half(m + 1) + ctx.half(m + 1));  // P_{m+1}
    if (!(probe.s > lo) || !(probe.s < hi))
      throw OutsideBand("hn probe must lie in ann(T_m, P_{m+1})");
    z = LPoint{m, probe.s, principal_angle(probe.theta), std::nullopt};
    reference = probe.s.to_double();
  }

  std::vector<HnRow> rows;
  LValue v = z;
  for (int n = m + 1; n <= n_max; ++n) {
    v = eval_g(v, ctx);
    if (is_zero(v)) throw CatastrophicCancellation("h_n orbit hit zero");
    // (m!/n!) * (log|g^{n-m}(z)| - log R_n), no root branch needed
    Real damp = ctx.fact(m) / ctx.fact(n);
    Real val = damp * (abs_log(as_point(v), ctx) - ctx.log_R(n));
    rows.push_back({n, val.to_double(), reference});
  }
  return rows;
}

VerificationReport check_band_visits(const Construction& ctx,
                                     const std::vector<LValue>& seeds, int steps) {
  if (seeds.empty()) throw InvalidParameter("check_band_visits: no seeds");
  VerificationReport rep;
  rep.gamma = ctx.gamma().to_double();
  rep.delta = ctx.params().delta;
  int idx = 0;
  for (const LValue& seed : seeds) {
    OrbitRecord orbit = iterate(seed, ctx, steps);
    int max_visits = 0;
    for (const auto& [j, count] : orbit.band_visits) max_visits = std::max(max_visits, count);
    int min_advance = INT_MAX;
    for (size_t k = 0; k + 1 < orbit.tags.size(); ++k) {
      if (orbit.tags[k] && orbit.tags[k + 1]) {
        min_advance = std::min(min_advance,
                               annulus_index(*orbit.tags[k + 1]) - annulus_index(*orbit.tags[k]));
      }
    }
    double margin;
    if (max_visits > 1)
      margin = -double(max_visits - 1);
    else
      margin = min_advance == INT_MAX ? 1.0 : double(min_advance);
    rep.add("band_visits", idx++, margin, 0.0);
  }
  return rep;
}

double delta_threshold(const Construction& ctx, int N) {
  if (N < 2 || N > ctx.max_level()) throw LevelOutOfRange("delta_threshold: bad N");
  {
    VerificationReport pre = ctx.verify_inequalities(N);
    for (const auto& c : pre.checks)
      if (c.name != "delta_chain" && !c.pass)
        throw InvalidParameter("delta_threshold: params fail verify_inequalities (" +
                               c.name + " at n=" + std::to_string(c.n) + ")");
  }
  int n_hi = std::min(N, ctx.max_level() - 1);
  int samples = std::min(ctx.params().samples, 128);

  auto passes = [&](double delta) {
    for (int n = 2; n <= N; ++n) {
      double chain = 2.0 * delta * M_E * std::pow(n + 1.0, 5) / std::pow(double(n), 6);
      if (chain > 1.0) return false;
    }
    try {
      VerificationReport rep = check_disk_chain(ctx, delta, 2, n_hi, samples);
      return rep.overall;
    } catch (const SampleOutsideBand&) {
      return false;
    }
  };

  double lo = 1e-4, hi = 1.0 - 1e-9;
  if (!passes(lo)) throw InvalidParameter("delta_threshold: no admissible delta at 1e-4");
  while (hi - lo > 1e-4) {
    double mid = 0.5 * (lo + hi);
    if (passes(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace wander
