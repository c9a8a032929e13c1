#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "wander/wide.hpp"

using wander::Real;

TEST_CASE("factorials are exact") {
  CHECK(Real::factorial(0, 64).to_double() == 1.0);
  CHECK(Real::factorial(5, 64).to_double() == 120.0);
  // 20! and 25! exceed 53-bit doubles but must still be integers held exactly
  Real f20 = Real::factorial(20, 64);
  CHECK(f20.is_integer());
  CHECK(f20.str(20) == "2432902008176640000");
  Real f25 = Real::factorial(25, 64);
  CHECK(f25.is_integer());
  CHECK(f25.str(26) == "15511210043330985984000000");
}

TEST_CASE("add_exact never rounds") {
  Real big(1.0, 64);
  for (int i = 0; i < 8; ++i) big *= Real(1e9, 64);
  Real tiny(3.5e-30, 64);
  Real sum = Real::add_exact(big, tiny);
  Real back = Real::add_exact(sum, -big);
  CHECK(back == tiny);
}

TEST_CASE("string round trip keeps 17 significant digits") {
  Real x(0.1234567890123456789, 64);
  Real y = Real::parse(x.str(21), 64);
  CHECK(x == y);
  CHECK_THROWS_AS(Real::parse("12.#bad", 64), wander::InvalidParameter);
  CHECK_THROWS_AS(Real::parse("", 64), wander::InvalidParameter);
}

TEST_CASE("precision propagates through arithmetic") {
  Real a(1.0, 64);
  Real b(1.0, 128);
  CHECK((a + b).prec() == 128);
  CHECK((a * b).prec() == 128);
  CHECK(fma(a, b, b).prec() == 128);
}

TEST_CASE("elementary functions match libm on doubles") {
  for (double v : {0.3, 1.7, 2.0, 10.0}) {
    Real x(v, 64);
    CHECK(log(x).to_double() == doctest::Approx(std::log(v)).epsilon(1e-15));
    CHECK(exp(Real(-v, 64)).to_double() == doctest::Approx(std::exp(-v)).epsilon(1e-15));
    CHECK(sqrt(x).to_double() == doctest::Approx(std::sqrt(v)).epsilon(1e-15));
  }
  CHECK(Real::pi(64).to_double() == doctest::Approx(M_PI).epsilon(1e-16));
  CHECK(atan2(Real(1.0, 64), Real(1.0, 64)).to_double() ==
        doctest::Approx(M_PI / 4).epsilon(1e-15));
}
