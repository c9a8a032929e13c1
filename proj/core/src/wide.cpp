#include "wander/wide.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace wander {

Real Real::factorial(unsigned long n, mpfr_prec_t min_prec) {
  // Bits needed to hold n! exactly, from Stirling via lgamma.
  double bits = n < 2 ? 1.0 : std::lgamma(static_cast<double>(n) + 1.0) / std::log(2.0);
  mpfr_prec_t p = std::max<mpfr_prec_t>(min_prec, static_cast<mpfr_prec_t>(bits) + 8);
  Real r(p);
  int inexact = mpfr_fac_ui(r.v_, n, MPFR_RNDN);
  if (inexact != 0) throw InvalidParameter("factorial rounding unexpectedly inexact");
  return r;
}

Real Real::add_exact(const Real& a, const Real& b) {
  if (a.is_nan() || b.is_nan()) throw InvalidParameter("add_exact on NaN");
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  mpfr_exp_t ea = mpfr_get_exp(a.v_), eb = mpfr_get_exp(b.v_);
  mpfr_exp_t hi = std::max(ea, eb);
  mpfr_exp_t lo = std::min(ea - a.prec(), eb - b.prec());
  mpfr_prec_t need = static_cast<mpfr_prec_t>(hi - lo) + 4;
  Real r(std::max({need, a.prec(), b.prec()}));
  int inexact = mpfr_add(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  if (inexact != 0) throw InvalidParameter("add_exact rounded");
  return r;
}

Real Real::parse(const std::string& text, mpfr_prec_t prec) {
  Real r(prec);
  const char* s = text.c_str();
  char* end = nullptr;
  mpfr_strtofr(r.v_, s, &end, 10, MPFR_RNDN);
  if (end == s || *end != '\0') {
    throw InvalidParameter("cannot parse real value '" + text + "'");
  }
  return r;
}

std::string Real::str(int sig_digits) const {
  std::vector<char> buf(static_cast<size_t>(sig_digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", sig_digits, v_);
  return std::string(buf.data());
}

}  // namespace wander
