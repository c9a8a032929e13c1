#pragma once

#include <map>
#include <optional>
#include <vector>

#include "wander/qgmap.hpp"

namespace wander {

// An iterated orbit with region tags and escape diagnostics. points[0] is
// the seed; tags[k] is absent where the point is zero or unclassifiable.
struct OrbitRecord {
  enum class Stop { Budget, BeyondMaxLevel, ReachedZero };
  std::vector<LValue> points;
  std::vector<std::optional<RegionTag>> tags;
  std::map<int, int> band_visits;  // E_j index -> visit count
  Stop stopped = Stop::Budget;
  int steps_taken = 0;
};

// Applies g up to `steps` times. Stops early at zero fixation or when the
// orbit leaves the materialized levels; the reason is recorded, never
// thrown. A catastrophic cancellation (a point indistinguishable from the
// root R_n at working precision) is recorded as ReachedZero.
OrbitRecord iterate(const LValue& seed, const Construction& ctx, int steps);

// Samples the boundary circle of D_n = D(xi_n, delta*R_n/n^4), checks the
// images stay in D_{n+1} (margin relative to the target radius), and
// spot-checks sampled |g'| against the derivative chain bound.
// Throws SampleOutsideBand if D_n does not fit in ann(Q_n, R_n).
VerificationReport check_disk_chain(const Construction& ctx, double delta,
                                    int n_from, int n_to, int samples);

// Sampled log M(r, g^m): maximum of log|g^m| over the circle log|z| =
// log_r, refined near the running maximum by golden-section on theta.
Real log_max_modulus(const Construction& ctx, const Real& log_r, int iterations,
                     int samples);

struct EscapeClass {
  enum class Kind { FastEscaping, Escaping, Bounded, Undetermined };
  Kind kind = Kind::Undetermined;
  int L = 0;             // lag witness, FastEscaping only
  int witnessed_to = 0;  // last index the verdict is backed by
};

std::string to_string(const EscapeClass& e);

// FastEscaping(L) iff log|g^{n+L}(z)| > log S_{n+1} for all n from some
// n_0 through the witnessed range (the containment U'_m in D(0, S_{m+1})
// makes this a sufficient membership test); Bounded iff the orbit stays
// below T_2 for the whole budget.
EscapeClass classify_escape(const LPoint& p, const Construction& ctx, int budget);

// Probe for the h_n experiment: a point of ann(T_m, P_{m+1}) given by its
// level-m offsets, or the disk center xi_l with l in {m, m+1}.
struct HnProbe {
  static HnProbe annulus(Real s, Real theta) { return {false, 0, std::move(s), std::move(theta)}; }
  static HnProbe disk(int l) { return {true, l, Real(), Real()}; }
  bool is_disk = false;
  int l = 0;
  Real s;
  Real theta;
};

struct HnRow {
  int n = 0;
  double log_h = 0.0;      // log|h_n(z)| = (m!/n!) (log|g^{n-m}(z)| - log R_n)
  double reference = 0.0;  // the limit the row is compared against
};

std::vector<HnRow> hn_experiment(const Construction& ctx, int m, const HnProbe& probe,
                                 int n_max);

// Iterates every seed and checks each interpolation band E_j is visited at
// most once per orbit; margins aggregate the minimum annulus-index advance
// per step.
VerificationReport check_band_visits(const Construction& ctx,
                                     const std::vector<LValue>& seeds, int steps);

}  // namespace wander
