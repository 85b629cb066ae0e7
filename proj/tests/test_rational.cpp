#include <cmath>

#include "doctest.h"

#include "moebius/errors.hpp"
#include "moebius/rational.hpp"

using namespace moebius;

TEST_CASE("rationals normalize on construction") {
  CHECK(Rational(6, 4) == Rational(3, 2));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(-3, -9) == Rational(1, 3));
  CHECK_THROWS_AS(Rational(1, 0), NumericError);
}

TEST_CASE("rational arithmetic is exact") {
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
  CHECK(Rational(1, 2) - Rational(2, 3) == Rational(-1, 6));
  CHECK(Rational(7, 5) / Rational(14, 15) == Rational(3, 2));
  CHECK(-Rational(3, 7) == Rational(-3, 7));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(!(Rational(1, 2) < Rational(1, 3)));
  CHECK_THROWS_AS(Rational(1) / Rational(0), NumericError);
  CHECK(Rational(-19, 108).to_double() == doctest::Approx(-0.17592592592592593));
}

TEST_CASE("rational overflow throws instead of wrapping") {
  Rational big(3037000499LL, 1);  // near sqrt(int64 max)
  CHECK_NOTHROW(big * big);
  CHECK_THROWS_AS(big * big * big, NumericError);
}

TEST_CASE("rational parsing accepts integers, fractions, and finite decimals") {
  Rational r;
  CHECK(Rational::parse("3", &r));
  CHECK(r == Rational(3));
  CHECK(Rational::parse("-5/2", &r));
  CHECK(r == Rational(-5, 2));
  CHECK(Rational::parse("0.25", &r));
  CHECK(r == Rational(1, 4));
  CHECK(Rational::parse("-1.5", &r));
  CHECK(r == Rational(-3, 2));

  CHECK_FALSE(Rational::parse("", &r));
  CHECK_FALSE(Rational::parse("abc", &r));
  CHECK_FALSE(Rational::parse("1e3", &r));
  CHECK_FALSE(Rational::parse("1/0", &r));
  CHECK_FALSE(Rational::parse("1.2.3", &r));
}

TEST_CASE("exact double conversion mirrors the binary value") {
  Rational r;
  CHECK(Rational::from_double_exact(0.25, &r));
  CHECK(r == Rational(1, 4));
  CHECK(Rational::from_double_exact(-3.0, &r));
  CHECK(r == Rational(-3));

  // every normal double of moderate exponent is a dyadic rational, so even
  // 1/3 converts: exactness refers to the stored value, not the decimal
  CHECK(Rational::from_double_exact(1.0 / 3.0, &r));
  CHECK((r.den() & (r.den() - 1)) == 0);
  CHECK(std::abs(r.to_double() - 1.0 / 3.0) == 0.0);

  // extreme exponents overflow the fixed-width representation
  CHECK_FALSE(Rational::from_double_exact(1e-300, &r));
  CHECK_FALSE(Rational::from_double_exact(1e300, &r));
}

TEST_CASE("rational string form") {
  CHECK(Rational(3, 2).str() == "3/2");
  CHECK(Rational(-4).str() == "-4");
  CHECK(Rational(0).str() == "0");
}

TEST_CASE("quadratic extension multiplies out the radical") {
  // (1 + 2 sqrt(5)) (3 - sqrt(5)) = -7 + 5 sqrt(5)
  QuadExt x(Rational(1), Rational(2), Rational(5));
  QuadExt y(Rational(3), Rational(-1), Rational(5));
  QuadExt z = x * y;
  CHECK(z.rational_part() == Rational(-7));
  CHECK(z.radical_part() == Rational(5));
  CHECK(z.radicand() == Rational(5));

  QuadExt diff = z - z;
  CHECK(diff.is_zero());

  // a pure-rational element combines with any radicand
  QuadExt plain(Rational(2));
  CHECK((plain + x).rational_part() == Rational(3));

  QuadExt other(Rational(0), Rational(1), Rational(3));
  CHECK_THROWS_AS(x + other, NumericError);
}

TEST_CASE("quadratic extension tracks exact zero through cancellation") {
  // sqrt(54)/54 * 5 - 5/sqrt(54) written over D = 1/54
  QuadExt a(Rational(0), Rational(5), Rational(1, 54));
  QuadExt b(Rational(0), Rational(-5), Rational(1, 54));
  CHECK((a + b).is_zero());
  CHECK_FALSE((a - b).is_zero());
  CHECK((a + b).to_double() == 0.0);
}
