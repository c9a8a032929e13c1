#pragma once

#include <mpfr.h>

#include <string>

#include "wander/errors.hpp"

namespace wander {

// Wide binary floating point backed by MPFR. Plain value semantics: every
// Real carries its own significand width, binary operations round once at
// the wider of the two operand widths. All construction-scale arithmetic
// runs on this type; doubles appear only at reporting boundaries.
class Real {
 public:
  static constexpr mpfr_prec_t kMinPrec = 53;
  static constexpr mpfr_prec_t kDefaultPrec = 64;

  Real() { mpfr_init2(v_, kDefaultPrec); }  // NaN
  explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, clamp(prec)); }
  Real(double x, mpfr_prec_t prec) {
    mpfr_init2(v_, clamp(prec));
    mpfr_set_d(v_, x, MPFR_RNDN);
  }
  Real(long x, mpfr_prec_t prec) {
    mpfr_init2(v_, clamp(prec));
    mpfr_set_si(v_, x, MPFR_RNDN);
  }
  Real(int x, mpfr_prec_t prec) : Real(static_cast<long>(x), prec) {}

  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  static Real pi(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }
  static Real two_pi(mpfr_prec_t prec) {
    Real r = pi(prec + 1);
    mpfr_mul_2ui(r.v_, r.v_, 1, MPFR_RNDN);
    return r;
  }
  // n! held exactly (the precision is grown to fit every bit).
  static Real factorial(unsigned long n, mpfr_prec_t min_prec);
  // Sum with no rounding: the result precision is chosen to fit exactly.
  static Real add_exact(const Real& a, const Real& b);
  static Real parse(const std::string& text, mpfr_prec_t prec);

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  std::string str(int sig_digits = 17) const;

  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_integer() const { return mpfr_integer_p(v_) != 0; }
  int sgn() const { return mpfr_sgn(v_); }

  Real operator-() const {
    Real r(prec());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  Real& operator+=(const Real& o) { return apply2(mpfr_add, o); }
  Real& operator-=(const Real& o) { return apply2(mpfr_sub, o); }
  Real& operator*=(const Real& o) { return apply2(mpfr_mul, o); }
  Real& operator/=(const Real& o) { return apply2(mpfr_div, o); }

  friend Real operator+(const Real& a, const Real& b) { return bin(mpfr_add, a, b); }
  friend Real operator-(const Real& a, const Real& b) { return bin(mpfr_sub, a, b); }
  friend Real operator*(const Real& a, const Real& b) { return bin(mpfr_mul, a, b); }
  friend Real operator/(const Real& a, const Real& b) { return bin(mpfr_div, a, b); }

  friend Real operator+(const Real& a, double b) { return bind(mpfr_add_d, a, b); }
  friend Real operator-(const Real& a, double b) { return bind(mpfr_sub_d, a, b); }
  friend Real operator*(const Real& a, double b) { return bind(mpfr_mul_d, a, b); }
  friend Real operator/(const Real& a, double b) { return bind(mpfr_div_d, a, b); }
  friend Real operator+(double a, const Real& b) { return b + a; }
  friend Real operator*(double a, const Real& b) { return b * a; }
  friend Real operator-(double a, const Real& b) {
    Real r(b.prec());
    mpfr_d_sub(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator/(double a, const Real& b) {
    Real r(b.prec());
    mpfr_d_div(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }

  friend Real operator*(const Real& a, long b) {
    Real r(a.prec());
    mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend Real operator/(const Real& a, long b) {
    Real r(a.prec());
    mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }

  // Exact three-way comparison; NaN operands are a logic error here.
  friend int cmp(const Real& a, const Real& b) {
    if (a.is_nan() || b.is_nan()) throw InvalidParameter("cmp on NaN");
    return mpfr_cmp(a.v_, b.v_);
  }
  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
  friend bool operator<(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) < 0; }
  friend bool operator>(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) > 0; }
  friend bool operator<=(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) <= 0; }
  friend bool operator>=(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) >= 0; }

  friend Real sqrt(const Real& a) { return un(mpfr_sqrt, a); }
  friend Real log(const Real& a) { return un(mpfr_log, a); }
  friend Real exp(const Real& a) { return un(mpfr_exp, a); }
  friend Real log1p(const Real& a) { return un(mpfr_log1p, a); }
  friend Real expm1(const Real& a) { return un(mpfr_expm1, a); }
  friend Real sin(const Real& a) { return un(mpfr_sin, a); }
  friend Real cos(const Real& a) { return un(mpfr_cos, a); }
  friend Real abs(const Real& a) { return un(mpfr_abs, a); }
  friend Real atan2(const Real& y, const Real& x) { return bin(mpfr_atan2, y, x); }
  friend Real hypot(const Real& a, const Real& b) { return bin(mpfr_hypot, a, b); }
  friend Real fma(const Real& a, const Real& b, const Real& c) {
    mpfr_prec_t p = a.prec() > b.prec() ? a.prec() : b.prec();
    if (c.prec() > p) p = c.prec();
    Real r(p);
    mpfr_fma(r.v_, a.v_, b.v_, c.v_, MPFR_RNDN);
    return r;
  }
  friend Real max(const Real& a, const Real& b) { return bin(mpfr_max, a, b); }
  friend Real min(const Real& a, const Real& b) { return bin(mpfr_min, a, b); }

  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

 private:
  static mpfr_prec_t clamp(mpfr_prec_t p) {
    return p < MPFR_PREC_MIN ? MPFR_PREC_MIN : p;
  }
  template <typename F>
  static Real un(F f, const Real& a) {
    Real r(a.prec());
    f(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  template <typename F>
  static Real bin(F f, const Real& a, const Real& b) {
    Real r(a.prec() > b.prec() ? a.prec() : b.prec());
    f(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  template <typename F>
  static Real bind(F f, const Real& a, double b) {
    Real r(a.prec());
    f(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  template <typename F>
  Real& apply2(F f, const Real& o) {
    if (o.prec() > prec()) {
      Real t = bin(f, *this, o);
      mpfr_swap(v_, t.v_);
    } else {
      f(v_, v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }

  mpfr_t v_;
};

}  // namespace wander
