#include "wander/construction.hpp"

#include <cmath>
#include <string>

#include "wander/errors.hpp"

namespace wander {

namespace {

void validate(const ConstructionParams& p) {
  // gamma = 1 is accepted (and later fails the inequality suite);
  // anything below 1 cannot even satisfy the ratio chain.
  if (p.gamma.is_nan() || p.gamma < 1.0)
    throw InvalidParameter("gamma must be >= 1, got " + p.gamma.str(6));
  if (!(p.delta > 0.0) || !(p.delta < 1.0))
    throw InvalidParameter("delta must lie in (0, 1), got " + std::to_string(p.delta));
  if (p.max_level < 3)
    throw InvalidParameter("max_level must be >= 3, got " + std::to_string(p.max_level));
  if (p.samples < 16)
    throw InvalidParameter("samples must be >= 16, got " + std::to_string(p.samples));
  if (p.sig_bits < 53 || p.sig_bits > 16384)
    throw InvalidParameter("sig_bits must lie in [53, 16384], got " + std::to_string(p.sig_bits));
}

}  // namespace

ConstructionParams make_params(double gamma, double delta, int max_level,
                               int samples, int sig_bits) {
  mpfr_prec_t p = sig_bits < Real::kMinPrec ? Real::kMinPrec : sig_bits;
  return make_params(Real(gamma, p), delta, max_level, samples, sig_bits);
}

ConstructionParams make_params(Real gamma, double delta, int max_level,
                               int samples, int sig_bits) {
  ConstructionParams p{std::move(gamma), delta, max_level, samples, sig_bits};
  validate(p);
  return p;
}

Construction::Construction(ConstructionParams p)
    : p_(std::move(p)), prec_(p_.sig_bits) {
  validate(p_);
  int top = p_.max_level + 2;
  fact_.reserve(top + 1);
  A_.reserve(top + 1);
  logR_.reserve(top + 1);
  gfact_.reserve(top + 1);
  half_.reserve(top + 1);
  logRd_.reserve(top + 1);
  logc_.assign(2, Real(prec_));   // index 0,1 unused
  xioff_.assign(2, Real(prec_));

  // A_0 = 0, A_{n+1} = A_n + n!; factorials and A_n are exact, the single
  // rounding happens in gamma * A_n.
  Real A = Real(0L, prec_);
  for (int n = 0; n <= top; ++n) {
    Real f = Real::factorial(static_cast<unsigned long>(n), prec_);
    if (n > 0) A = Real::add_exact(A, fact_[n - 1]);
    fact_.push_back(f);
    A_.push_back(A);
    logR_.push_back(p_.gamma * A);
    gfact_.push_back(p_.gamma * f);
    half_.push_back(sqrt(gfact_[n]));
    logRd_.push_back(logR_[n].to_double());
  }
  for (int n = 2; n <= top; ++n) {
    // |c_n| = ((n+1)^2/(n+2)) * ((n+1)/n)^n, no radii involved.
    Real np1(static_cast<long>(n) + 1, prec_);
    Real t1 = log(np1 * np1 / Real(static_cast<long>(n) + 2, prec_));
    Real t2 = (log(np1) - log(Real(static_cast<long>(n), prec_))) * static_cast<long>(n);
    logc_.push_back(t1 + t2);
    xioff_.push_back(log(Real(static_cast<long>(n), prec_) / np1));
  }
  logPabs_.assign(1, Real(prec_));
  logTabs_.assign(1, Real(prec_));
  for (int n = 1; n <= p_.max_level + 1; ++n) {
    logPabs_.push_back(logR_[n] - (half_[n] + half_[n]));
    logTabs_.push_back(logR_[n] + (half_[n] + half_[n]));
  }
}

void Construction::require(int n, int lo, int hi, const char* what) const {
  if (n < lo || n > hi)
    throw LevelOutOfRange(std::string(what) + ": n = " + std::to_string(n) +
                          " outside [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
}

const Real& Construction::fact(int n) const {
  require(n, 0, p_.max_level + 2, "fact");
  return fact_[n];
}
const Real& Construction::A(int n) const {
  require(n, 0, p_.max_level + 2, "A");
  return A_[n];
}
const Real& Construction::log_R(int n) const {
  require(n, 0, p_.max_level + 2, "log_R");
  return logR_[n];
}
const Real& Construction::gamma_fact(int n) const {
  require(n, 0, p_.max_level + 2, "gamma_fact");
  return gfact_[n];
}
const Real& Construction::half(int n) const {
  require(n, 1, p_.max_level + 2, "half");
  return half_[n];
}
double Construction::log_R_d(int n) const {
  require(n, 0, p_.max_level + 2, "log_R_d");
  return logRd_[n];
}
const Real& Construction::log_abs_c(int n) const {
  require(n, 2, p_.max_level + 1, "log_abs_c");
  return logc_[n];
}
const Real& Construction::xi_offset(int n) const {
  require(n, 2, p_.max_level + 1, "xi_offset");
  return xioff_[n];
}
const Real& Construction::log_P_abs(int n) const {
  require(n, 1, p_.max_level + 1, "log_P_abs");
  return logPabs_[n];
}
const Real& Construction::log_T_abs(int n) const {
  require(n, 1, p_.max_level + 1, "log_T_abs");
  return logTabs_[n];
}
double Construction::c(int n) const {
  require(n, 2, p_.max_level + 1, "c");
  double np1 = n + 1.0;
  return -(np1 * np1 / (n + 2.0)) * std::pow(np1 / n, n);
}

LevelRadii Construction::level_radii(int n) const {
  require(n, 1, p_.max_level + 1, "level_radii");
  const Real& h = half_[n];
  return LevelRadii{n, logR_[n] - h - h, logR_[n] - h, logR_[n], logR_[n] + h,
                    logR_[n] + h + h};
}

CoeffSet Construction::coeffs(int n) const {
  require(n, 1, p_.max_level + 1, "coeffs");
  CoeffSet out;
  out.n = n;
  out.log_a = -(logR_[n - 1] * static_cast<long>(n));
  if (n == 1) {
    out.xi_is_zero = true;
    out.c = std::nan("");
    out.log_abs_b = Real(prec_);  // NaN
    out.log_xi = Real(prec_);
    return out;
  }
  out.c = c(n);
  out.log_abs_b = logc_[n] + logR_[n + 1] - logR_[n] * static_cast<long>(n + 1);
  out.log_xi = logR_[n] + xioff_[n];
  return out;
}

InterpolationSpec Construction::interp_spec(int n, InterpCase kind) const {
  require(n, 2, p_.max_level, "interp_spec");
  const Real& h = half_[n];
  Real one(1L, prec_);
  Real log2 = log(Real(2L, prec_));
  Real log_np1 = log(Real(static_cast<long>(n) + 1, prec_));
  Real four_rho = exp(-h) * 4.0;  // 4*rho_flat/|omega| = 4*|omega|/rho_sharp

  InterpolationSpec spec;
  spec.kind = kind;
  spec.k = n;
  spec.log_abs_b = logc_[n];
  spec.arg_b = Real::pi(prec_).to_double();  // b = c_n < 0
  spec.omega = 1.0;

  Real C(prec_);
  if (kind == InterpCase::Flat) {
    spec.log_rho = -h;
    spec.log_lambda = -(h + h);
    // C_flat through the conservative bound |log(-c_n)| <= 1 + log(n+1).
    C = one - (one + log_np1 + four_rho * h) / (h * static_cast<long>(n));
  } else {
    spec.log_rho = h;
    spec.log_lambda = h + h;
    C = one - (hypot(one + log_np1, Real::pi(prec_)) + four_rho * h) /
            (h * static_cast<long>(n + 1));
  }
  spec.C_value = C.to_double();

  std::vector<std::string> failed;
  if (!(h > log2)) {
    failed.push_back(kind == InterpCase::Flat ? "2*rho_flat <= |omega|"
                                              : "rho_sharp >= 2*|omega|");
  }
  if (!(h >= one)) {
    failed.push_back(kind == InterpCase::Flat ? "rho_flat >= e*lambda_flat"
                                              : "lambda_sharp >= e*rho_sharp");
  }
  if (!(C > 0.0)) {
    failed.push_back(kind == InterpCase::Flat ? "C_flat > 0" : "C_sharp > 0");
  }
  if (!failed.empty()) throw HypothesisViolated(std::move(failed));
  return spec;
}

double Construction::check_tolerance(double scale) const {
  return 10.0 * std::ldexp(std::fabs(scale) + 1.0, 1 - p_.sig_bits);
}

VerificationReport Construction::verify_inequalities(int N) const {
  if (N > p_.max_level) throw LevelOutOfRange("verify_inequalities: N > max_level");
  if (N < 1) throw LevelOutOfRange("verify_inequalities: N < 1");

  VerificationReport rep;
  rep.gamma = p_.gamma.to_double();
  rep.delta = p_.delta;

  Real one(1L, prec_);
  Real log2 = log(Real(2L, prec_));

  for (int n = 1; n <= N; ++n) {
    // (1) log P_{n+1} - log T_n = gamma*n! - 2*sqrt(gamma*n!) - 2*sqrt(gamma*(n+1)!)
    Real m = gfact_[n] - (half_[n] + half_[n]) - (half_[n + 1] + half_[n + 1]);
    double scale = gfact_[n].to_double() + 2 * half_[n].to_double() +
                   2 * half_[n + 1].to_double();
    rep.add("ordering", n, m.to_double(), check_tolerance(scale));
  }
  for (int n = 1; n <= N; ++n) {
    // (2) T/S = S/R = R/Q = Q/P > e
    Real m = half_[n] - one;
    rep.add("ratios", n, m.to_double(), check_tolerance(half_[n].to_double()));
  }
  for (int n = 2; n <= N; ++n) {
    // (3) Lemma hypotheses, both cases; margin = worst predicate slack.
    const Real& h = half_[n];
    Real log_np1 = log(Real(static_cast<long>(n) + 1, prec_));
    Real four_rho = exp(-h) * 4.0;
    Real c_flat = one - (one + log_np1 + four_rho * h) / (h * static_cast<long>(n));
    Real c_sharp = one - (hypot(one + log_np1, Real::pi(prec_)) + four_rho * h) /
                       (h * static_cast<long>(n + 1));
    Real m_flat = min(min(h - log2, h - one), c_flat);
    Real m_sharp = min(min(h - log2, h - one), c_sharp);
    double scale = h.to_double() + 2.0;
    rep.add("lemma63_flat", n, m_flat.to_double(), check_tolerance(scale));
    rep.add("lemma63_sharp", n, m_sharp.to_double(), check_tolerance(scale));

    // (4) C_flat >= 1 - 1/((n-1)^2 + 1)
    long d = static_cast<long>(n - 1) * (n - 1) + 1;
    Real m4 = c_flat - one + one / Real(d, prec_);
    rep.add("cflat_bound", n, m4.to_double(), check_tolerance(2.0));
  }
  for (int n = 1; n <= N; ++n) {
    // (5) maximum-principle absorption:
    // (n+1)*sqrt(gamma*(n+1)!) - sqrt(gamma*(n+2)!) >= log(2e(n+2))
    Real m = half_[n + 1] * static_cast<long>(n + 1) - half_[n + 2] -
             (one + log(Real(2L * (n + 2), prec_)));
    double scale = (n + 1) * half_[n + 1].to_double() + half_[n + 2].to_double() + 4;
    rep.add("absorption", n, m.to_double(), check_tolerance(scale));
  }
  for (int n = 2; n <= N; ++n) {
    // (6) 2*delta*e*(n+1)^5/n^6 <= 1, and D_n inside ann(Q_n, R_n).
    double np1 = n + 1.0;
    double chain = -(std::log(2.0 * p_.delta) + 1.0 + 5.0 * std::log(np1) -
                     6.0 * std::log(static_cast<double>(n)));
    double lo = static_cast<double>(n) / np1 - p_.delta / std::pow(n, 4);
    double hi = static_cast<double>(n) / np1 + p_.delta / std::pow(n, 4);
    double inner = std::log(lo) + half_[n].to_double();
    double outer = -std::log(hi);
    double m = std::min(chain, std::min(inner, outer));
    rep.add("delta_chain", n, m, check_tolerance(std::fabs(chain) + half_[n].to_double()));
  }
  return rep;
}

namespace {

bool passes_construction_checks(const Real& gamma, int N, double delta, int sig_bits) {
  Construction ctx(make_params(gamma, delta, N < 3 ? 3 : N, 16, sig_bits));
  VerificationReport rep = ctx.verify_inequalities(N);
  for (const auto& c : rep.checks) {
    if (c.name == "delta_chain") continue;  // gamma plays no role there
    if (!c.pass) return false;
  }
  return true;
}

double min_construction_margin(const Real& gamma, int N, double delta, int sig_bits) {
  Construction ctx(make_params(gamma, delta, N < 3 ? 3 : N, 16, sig_bits));
  VerificationReport rep = ctx.verify_inequalities(N);
  double m = 1e300;
  for (const auto& c : rep.checks) {
    if (c.name == "delta_chain") continue;
    m = std::min(m, c.margin);
  }
  return m;
}

}  // namespace

Real gamma_threshold(int N, double delta, double tol, int sig_bits) {
  if (N < 3) throw InvalidParameter("gamma_threshold: N must be >= 3");
  if (!(tol > 0.0)) throw InvalidParameter("gamma_threshold: tol must be > 0");
  constexpr double kCap = 1e6;
  mpfr_prec_t prec = sig_bits;

  Real lo(1.0, prec);
  Real hi(2.0, prec);
  while (!passes_construction_checks(hi, N, delta, sig_bits)) {
    lo = hi;
    hi = hi * 2.0;
    if (hi > kCap) throw NoBracket("no admissible gamma below 1e6");
  }

  // The bisection is only meaningful if the aggregate margin is monotone
  // over the bracket; spot-check on a coarse sample.
  double prev = -1e300;
  for (int i = 0; i <= 8; ++i) {
    Real g = lo + (hi - lo) * (static_cast<double>(i) / 8.0);
    if (g < 1.0) continue;
    double m = min_construction_margin(g, N, delta, sig_bits);
    if (m < prev - 1e-9) throw NoBracket("margin not monotone over the gamma bracket");
    prev = m;
  }

  while ((hi - lo) > tol) {
    Real mid = (lo + hi) * 0.5;
    if (passes_construction_checks(mid, N, delta, sig_bits))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

ConstructionParams default_params(int max_level, double delta, int samples,
                                  int sig_bits) {
  Real g = gamma_threshold(20, delta, 1e-3, sig_bits) * 1.1;
  return make_params(std::move(g), delta, max_level, samples, sig_bits);
}

}  // namespace wander
