#include "wander/geometry.hpp"

#include <cmath>

#include "wander/errors.hpp"

namespace wander {

Curve make_circle(const Construction& ctx, int level, const Real& s, int segments) {
  if (segments < 8) throw InvalidParameter("make_circle: need >= 8 segments");
  mpfr_prec_t prec = ctx.prec();
  Real two_pi = Real::two_pi(prec);
  Curve c;
  c.closed = true;
  c.vertices.reserve(segments + 1);
  for (int j = 0; j <= segments; ++j) {
    Real lift = two_pi * (double(j) / segments - 0.5);
    LPoint v{level, s, principal_angle(lift), lift};
    c.vertices.push_back(std::move(v));
  }
  return c;
}

namespace {

LPoint eval_vertex(const LPoint& p, const Construction& ctx) {
  LValue v = eval_g(p, ctx);
  if (is_zero(v)) throw RefinementExhausted("curve passes through a root of g");
  return as_point(v);
}

LPoint midpoint(const LPoint& a, const LPoint& b0, const Construction& ctx) {
  LPoint b = b0.level == a.level ? b0 : rebase(b0, ctx, a.level);
  Real lift = (*a.lift + *b.lift) * 0.5;
  return LPoint{a.level, (a.s + b.s) * 0.5, principal_angle(lift), lift};
}

}  // namespace

Curve push_curve(const Curve& c, const Construction& ctx, int refine_limit) {
  if (c.vertices.size() < 2) throw InvalidParameter("push_curve: need >= 2 vertices");
  for (const LPoint& v : c.vertices)
    if (!v.lift) throw InvalidParameter("push_curve: vertices must carry lifts");

  const double kMaxImageStep = M_PI / 2;
  Curve out;
  out.closed = c.closed;

  LPoint img0 = eval_vertex(c.vertices.front(), ctx);
  img0.lift = img0.theta;
  out.vertices.push_back(img0);

  // Depth-first subdivision of each source segment. A segment is accepted
  // once its source arg-span times the local degree is small and the
  // measured image step is below pi/2; the image lift then accumulates
  // through principal-value seams.
  struct Frame {
    LPoint src_b;
    LPoint img_b;  // theta only; lift filled on emit
    int depth;
  };

  for (size_t i = 0; i + 1 < c.vertices.size(); ++i) {
    LPoint src_a = c.vertices[i];
    std::vector<Frame> stack;
    stack.push_back({c.vertices[i + 1], eval_vertex(c.vertices[i + 1], ctx), 0});
    while (!stack.empty()) {
      if (static_cast<int>(out.vertices.size()) > refine_limit)
        throw RefinementExhausted("refinement budget of " +
                                  std::to_string(refine_limit) + " vertices");
      Frame f = stack.back();
      const LPoint& img_a = out.vertices.back();
      Real dth = principal_angle(f.img_b.theta - img_a.theta);
      long deg = classify(src_a, ctx).n + 2;
      Real src_span = abs(*f.src_b.lift - *src_a.lift) * deg;
      bool ok = abs(dth).to_double() <= kMaxImageStep &&
                src_span.to_double() <= kMaxImageStep;
      if (!ok && f.depth >= 48)
        throw RefinementExhausted("subdivision depth limit");
      if (ok) {
        stack.pop_back();
        LPoint v = f.img_b;
        v.lift = *img_a.lift + dth;
        out.vertices.push_back(std::move(v));
        src_a = f.src_b;
      } else {
        LPoint mid = midpoint(src_a, f.src_b, ctx);
        stack.push_back({mid, eval_vertex(mid, ctx), f.depth + 1});
      }
    }
  }
  return out;
}

long winding_number(const Curve& c) {
  if (!c.closed) throw NotClosed("winding_number needs a closed curve");
  if (c.vertices.size() < 2 || !c.vertices.front().lift || !c.vertices.back().lift)
    throw NotClosed("winding_number needs lifted vertices");
  Real turn = (*c.vertices.back().lift - *c.vertices.front().lift) /
              Real::two_pi(c.vertices.front().lift->prec());
  double w = turn.to_double();
  double rounded = std::nearbyint(w);
  if (std::fabs(w - rounded) > 1e-6)
    throw NotClosed("winding residue " + std::to_string(w - rounded));
  return static_cast<long>(rounded);
}

double hyperbolic_density_log(double x, double L) {
  if (!(L > 0.0)) throw InvertedBounds("annulus length must be positive");
  if (!(x > 0.0) || !(x < L)) throw OutsideAnnulus("x outside (0, L)");
  return M_PI / (std::sin(M_PI * x / L) * L);
}

double hyperbolic_length(const Curve& c, const RoundAnnulus& a, const Construction& ctx) {
  double L = a.length();
  if (!(L > 0.0)) throw InvertedBounds("annulus bounds inverted");
  if (c.vertices.size() < 2) throw InvalidParameter("hyperbolic_length: empty curve");

  std::vector<double> xs, ys;
  xs.reserve(c.vertices.size());
  ys.reserve(c.vertices.size());
  for (const LPoint& v : c.vertices) {
    if (!v.lift) throw InvalidParameter("hyperbolic_length: vertices must carry lifts");
    double x = (abs_log(v, ctx) - a.log_inner).to_double();
    if (!(x > 0.0) || !(x < L)) throw OutsideAnnulus("curve leaves the annulus");
    xs.push_back(x);
    ys.push_back(v.lift->to_double());
  }

  double total = 0.0;
  for (size_t i = 0; i + 1 < xs.size(); ++i) {
    double dx = xs[i + 1] - xs[i], dy = ys[i + 1] - ys[i];
    double len = std::hypot(dx, dy);
    if (len == 0.0) continue;
    auto rho = [&](double t) { return hyperbolic_density_log(xs[i] + t * dx, L); };
    // trapezoid with doubling until 1e-6 relative
    double prev = 0.5 * (rho(0.0) + rho(1.0));
    double integral = prev;
    for (int k = 1; k <= 20; ++k) {
      int pieces = 1 << k;
      double sum = 0.0;
      for (int j = 1; j < pieces; j += 2) sum += rho(double(j) / pieces);
      integral = 0.5 * integral + sum / pieces;
      if (k >= 3 && std::fabs(integral - prev) <= 1e-6 * std::fabs(integral)) break;
      prev = integral;
    }
    total += len * integral;
  }
  return total;
}

double annulus_modulus(double log_inner, double log_outer) {
  if (!(log_outer > log_inner)) throw InvertedBounds("annulus_modulus: log_outer <= log_inner");
  return (log_outer - log_inner) / (2.0 * M_PI);
}

std::vector<GrowthRow> length_growth_experiment(const Construction& ctx, int k,
                                                double K, int n_max, int refine_limit) {
  if (k < 2 || k >= n_max || n_max > ctx.max_level())
    throw LevelOutOfRange("length_growth_experiment: need 2 <= k < n_max <= max_level");
  if (!(K >= 1.0)) throw InvalidParameter("length_growth_experiment: K must be >= 1");

  const double log_gamma_d = std::log(ctx.gamma().to_double());
  auto lower_bound = [&](int n) {
    // pi^2/(K (k-1)!) * (n-1)!/sqrt(gamma n!), assembled in logs
    double lg = std::lgamma(double(n)) - std::lgamma(double(k)) -
                0.5 * (log_gamma_d + std::lgamma(double(n) + 1.0));
    return M_PI * M_PI / K * std::exp(lg);
  };
  auto floor_w = [&](int n) {
    return std::exp(std::lgamma(double(n)) - std::lgamma(double(k)));
  };

  std::vector<GrowthRow> rows;
  for (int n = k + 1; n <= n_max; ++n)
    rows.push_back({n, lower_bound(n), floor_w(n), 0, false});

  // Push an actual winding-1 circle from the middle of the level-k core
  // band; winding multiplies by the degree each step, so stop once the
  // predicted vertex demand exceeds the budget.
  Real s_mid = ((ctx.half(k) + ctx.half(k)) +
                (ctx.gamma_fact(k) - (ctx.half(k + 1) + ctx.half(k + 1)))) *
               0.5;
  Curve curve = make_circle(ctx, k, s_mid, 64);
  double predicted = 64;
  for (int j = 1; j <= n_max - k; ++j) {
    predicted *= (k + j);
    if (predicted * 4 > refine_limit) break;
    try {
      curve = push_curve(curve, ctx, refine_limit);
    } catch (const RefinementExhausted&) {
      break;
    }
    rows[j - 1].winding_measured = winding_number(curve);
    rows[j - 1].measured = true;
  }
  return rows;
}

}  // namespace wander
