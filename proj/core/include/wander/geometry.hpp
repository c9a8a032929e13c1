#pragma once

#include <vector>

#include "wander/qgmap.hpp"

namespace wander {

// An argument-lifted polyline. Every vertex carries a continuous lift
// (lift == theta mod 2pi); consecutive lift steps stay below pi. Closed
// curves repeat the first vertex at the end, with the lift advanced by
// 2*pi*winding.
struct Curve {
  std::vector<LPoint> vertices;
  bool closed = false;
};

// A round circle |z| = R_level * e^s traversed once, counterclockwise.
Curve make_circle(const Construction& ctx, int level, const Real& s, int segments);

// Image of c under g with adaptive bisection of source segments until
// every image lift step is small; the lift is accumulated through the
// principal-value seams. Throws RefinementExhausted when the vertex
// budget runs out (passing too near a root of g).
Curve push_curve(const Curve& c, const Construction& ctx, int refine_limit);

// (lift(end) - lift(start)) / 2pi, rounded; residue below 1e-6 asserted.
long winding_number(const Curve& c);

// ann(1, e^L) in log coordinates; x below is log|z| - log_inner.
struct RoundAnnulus {
  Real log_inner;
  Real log_outer;
  double length() const { return (log_outer - log_inner).to_double(); }
};

// Hyperbolic density of the annulus in log coordinates: pi/(sin(pi x/L) L).
// The |z| factor of the classical density cancels against |dz| = |z||dw|.
double hyperbolic_density_log(double x, double L);

// Trapezoid integration of the density along the curve, refined until
// successive estimates differ by < 1e-6 relative.
double hyperbolic_length(const Curve& c, const RoundAnnulus& a, const Construction& ctx);

double annulus_modulus(double log_inner, double log_outer);

// Modulus ceiling for the image of an annulus under a K-quasiconformal map.
inline double qc_modulus_bound(double modulus, double K) { return K * modulus; }

struct GrowthRow {
  int n = 0;
  double lower_bound = 0.0;     // pi^2/(K (k-1)!) * (n-1)!/sqrt(gamma n!)
  double winding_floor = 0.0;   // (n-1)!/(k-1)!
  long winding_measured = 0;
  bool measured = false;
};

// Emits the hyperbolic-length lower-bound sequence and, for as many steps
// as refinement permits, pushes an actual winding-1 circle from level k
// recording the measured winding.
std::vector<GrowthRow> length_growth_experiment(const Construction& ctx, int k,
                                                double K, int n_max,
                                                int refine_limit = 1 << 20);

}  // namespace wander
