#pragma once

#include <vector>

#include "wander/params.hpp"
#include "wander/report.hpp"
#include "wander/wide.hpp"

namespace wander {

// Radii of one level, natural-log scale. The half-width between adjacent
// radii is sqrt(gamma*n!): P < Q < R < S < T with gaps h, h, h, h.
struct LevelRadii {
  int n = 0;
  Real log_P, log_Q, log_R, log_S, log_T;
};

// Coefficients of level n. a_n = R_{n+1}/R_n^{n+1} = 1/R_{n-1}^n > 0,
// b_n < 0, c_n = b_n R_n^{n+1}/R_{n+1} of moderate magnitude,
// xi_n = n R_n/(n+1) the critical point (xi_1 = 0).
struct CoeffSet {
  int n = 0;
  Real log_a;
  Real log_abs_b;  // NaN for n = 1
  double c = 0.0;  // NaN for n = 1
  Real log_xi;     // NaN for n = 1
  bool xi_is_zero = false;
};

enum class InterpCase { Sharp, Flat };

// Rescaled interpolation-band data: boundary radii in log scale around
// R_n, coefficient b = c_n, omega = 1 after rescaling.
struct InterpolationSpec {
  InterpCase kind = InterpCase::Flat;
  int k = 0;
  Real log_abs_b;
  double arg_b = 0.0;
  double omega = 1.0;
  Real log_rho;
  Real log_lambda;
  double C_value = 0.0;
};

// All level sequences in log scale, materialized once per parameter set.
// Tables run to max_level + 2 so the map can be evaluated on the deepest
// classifiable tile; classification itself stops at T_{max_level}.
class Construction {
 public:
  explicit Construction(ConstructionParams p);

  const ConstructionParams& params() const { return p_; }
  int max_level() const { return p_.max_level; }
  mpfr_prec_t prec() const { return prec_; }
  const Real& gamma() const { return p_.gamma; }

  const Real& fact(int n) const;        // n!, exact
  const Real& A(int n) const;           // log R_n = gamma * A_n, exact integer
  const Real& log_R(int n) const;
  const Real& gamma_fact(int n) const;  // gamma * n! = log(R_{n+1}/R_n)
  const Real& half(int n) const;        // sqrt(gamma * n!)
  double log_R_d(int n) const;

  LevelRadii level_radii(int n) const;   // 1 <= n <= max_level + 1
  CoeffSet coeffs(int n) const;          // 1 <= n <= max_level + 1
  const Real& log_abs_c(int n) const;    // 2 <= n <= max_level + 1
  double c(int n) const;
  const Real& xi_offset(int n) const;    // log(n/(n+1)), 2 <= n <= max_level + 1
  const Real& log_P_abs(int n) const;    // log P_n, 1 <= n <= max_level + 1
  const Real& log_T_abs(int n) const;    // log T_n, 1 <= n <= max_level + 1

  InterpolationSpec interp_spec(int n, InterpCase kind) const;

  // Evaluates, in log scale, the six check families for every applicable
  // n <= N: (1) radius ordering across levels, (2) adjacent-radius ratios
  // exceed e, (3) interpolation-lemma hypotheses for both cases, (4) the
  // flat-case C lower bound, (5) the absorption chain, (6) the delta chain
  // and D_n placement. Failures are reported, never thrown.
  VerificationReport verify_inequalities(int N) const;

  // Rounding budget for a margin assembled from terms summing to |scale|.
  double check_tolerance(double scale) const;

 private:
  void require(int n, int lo, int hi, const char* what) const;

  ConstructionParams p_;
  mpfr_prec_t prec_;
  std::vector<Real> fact_, A_, logR_, gfact_, half_, logc_, xioff_;
  std::vector<Real> logPabs_, logTabs_;
  std::vector<double> logRd_;
};

inline double dilatation_bound(int n) { return 1.0 + 1.0 / (double(n) * n); }

// Smallest gamma (within tol) for which check families (1)-(5) pass for
// all n <= N; bracket found by doubling, refined by bisection, with
// monotonicity spot-checked by sampling. Throws NoBracket above 1e6.
Real gamma_threshold(int N, double delta, double tol, int sig_bits = 64);

// Largest delta (resolution 1e-4) for which the analytic chain
// 2*delta*e*(n+1)^5/n^6 <= 1 holds for 2 <= n <= N and sampled boundary
// images of D_n land in D_{n+1}. Defined alongside the orbit machinery.
double delta_threshold(const Construction& ctx, int N);

// Default laboratory parameters: gamma = gamma_threshold(20)*1.1 and
// delta = 0.01, both with documented slack.
ConstructionParams default_params(int max_level = 20, double delta = 0.01,
                                  int samples = 256, int sig_bits = 64);

}  // namespace wander
