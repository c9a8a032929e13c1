#pragma once

#include <complex>
#include <functional>
#include <string>

#include "wander/logplane.hpp"

namespace wander {

// Which piece of the piecewise definition of g a modulus falls in. The
// closed ranges win at shared boundaries: InnerCore is |z| <= P_2,
// CriticalBand(n) is Q_n <= |z| <= S_n, Core(n) is T_n <= |z| <= P_{n+1};
// the interpolation bands are open.
enum class Region { InnerCore, Core, CriticalBand, InterpLower, InterpUpper };

struct RegionTag {
  Region region = Region::InnerCore;
  int n = 1;  // tile level; 1 for InnerCore
  friend bool operator==(const RegionTag&, const RegionTag&) = default;
};

std::string to_string(const RegionTag& tag);
bool is_interp(const RegionTag& tag);

// Index j of the dilatation band E_j containing the tile, or 0 if none.
// E_1 = ann(P_2, Q_2); E_n = ann(S_n, T_n) u ann(P_{n+1}, Q_{n+1}).
int band_index(const RegionTag& tag);

// Index of the absorbing annulus chain: orbits seeded in ann(S_1, Q_2)
// advance this by exactly one per step.
int annulus_index(const RegionTag& tag);

// The unique tile containing |z|. Throws BeyondMaxLevel for
// |z| > T_{max_level}.
RegionTag classify(const LPoint& p, const Construction& ctx);

// One application of g. Every branch raises the level by exactly one:
// InnerCore is the n = 1 power map, Core(n) the degree-(n+1) power map,
// CriticalBand(n) the polynomial b_n (z - R_n) z^n, and the open bands
// delegate to interpolate_band. g(0) = 0, and z = R_n exactly maps to 0.
LValue eval_g(const LValue& v, const Construction& ctx);

// The interpolation on a band, in rescaled log coordinates w = log(z/R_n):
// log G(w) = F_pure(w) + t(Re w) * Delta(w), where F_pure is the adjacent
// power-map branch, Delta the log-difference of the two boundary maps
// continued across the band, and t an affine ramp. Exact on both edges
// (the closed band is accepted so the edge values are directly testable).
LPoint interpolate_band(const LPoint& p, const Construction& ctx,
                        const RegionTag& band);

struct DilatationStats {
  RegionTag band;
  int radial = 0, angular = 0;
  double max_K = 1.0;
  double mean_K = 1.0;
  double max_mu = 0.0;
  double step = 0.0;
};

// Central finite differences of the interpolation in log coordinates give
// dG/dw and dG/dw~; mu is their ratio and K = (1+|mu|)/(1-|mu|).
DilatationStats estimate_dilatation(const Construction& ctx, const RegionTag& band,
                                    int radial, int angular);

// Samples both boundary circles of ann(S_n, Q_{n+1}) for n <= n_max and
// checks log S_{n+1} <= log|g| <= log Q_{n+2}.
VerificationReport check_absorption(const Construction& ctx, int n_max, int samples);

// Two-sided agreement of adjacent branch formulas on every tile boundary
// up to n_max, 1e-9 in s and theta.
VerificationReport check_continuity(const Construction& ctx, int n_max,
                                    int angular_samples);

namespace detail {

// Branch formulas, callable directly at tile boundaries.
LPoint eval_core(const LPoint& p, int n, const Construction& ctx);
LValue eval_critical(const LPoint& p, int n, const Construction& ctx);

// Double-precision smooth value of log G on an interpolation band
// (no principal-value folding), for derivative estimation.
std::complex<double> interp_log_value(const Construction& ctx, const RegionTag& band,
                                      std::complex<double> w);

// Dilatation of an arbitrary map over a grid on [x0,x1] x (-pi,pi).
DilatationStats measure_dilatation_grid(
    const std::function<std::complex<double>(std::complex<double>)>& map,
    double x0, double x1, int radial, int angular, const RegionTag& band);

}  // namespace detail

}  // namespace wander
