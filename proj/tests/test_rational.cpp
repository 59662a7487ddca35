#include <doctest.h>

#include <sstream>

#include "oklab/rational.hpp"

using oklab::Rational;

TEST_CASE("canonical form") {
  Rational r(6, -4);
  CHECK(r.numerator() == -3);
  CHECK(r.denominator() == 2);
  CHECK(r.str() == "-3/2");
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(10, 5).str() == "2");
}

TEST_CASE("arithmetic") {
  const Rational a(1, 3), b(1, 6);
  CHECK(a + b == Rational(1, 2));
  CHECK(a - b == Rational(1, 6));
  CHECK(a * b == Rational(1, 18));
  CHECK(a / b == Rational(2));
  CHECK(-a == Rational(-1, 3));
  CHECK_THROWS_AS(a / Rational(0), oklab::GeomError);
  CHECK_THROWS_AS(Rational(1, 0), oklab::GeomError);
}

TEST_CASE("ordering and sign") {
  CHECK(Rational(-1, 2) < Rational(1, 3));
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-5).sgn() == -1);
  CHECK(Rational(0).sgn() == 0);
  CHECK(Rational(-7, 3).abs() == Rational(7, 3));
}

TEST_CASE("floor and ceil") {
  CHECK(Rational(7, 2).floor_z() == 3);
  CHECK(Rational(7, 2).ceil_z() == 4);
  CHECK(Rational(-7, 2).floor_z() == -4);
  CHECK(Rational(-7, 2).ceil_z() == -3);
  CHECK(Rational(4).floor_z() == 4);
  CHECK(Rational(4).ceil_z() == 4);
}

TEST_CASE("string round trip") {
  for (const char* s : {"0", "5", "-5", "3/7", "-3/7", "22/7"}) {
    const Rational r = Rational::from_string(s);
    CHECK(r.str() == s);
  }
  CHECK(Rational::from_string("4/2") == Rational(2));
  CHECK(Rational::from_string("+3") == Rational(3));
  CHECK_THROWS_AS(Rational::from_string("1/0"), oklab::SchemaError);
  CHECK_THROWS_AS(Rational::from_string("a/b"), oklab::SchemaError);
  CHECK_THROWS_AS(Rational::from_string(""), oklab::SchemaError);
  CHECK_THROWS_AS(Rational::from_string("1.5"), oklab::SchemaError);
}

TEST_CASE("stream output") {
  std::ostringstream os;
  os << Rational(-2, 6);
  CHECK(os.str() == "-1/3");
}

TEST_CASE("big values stay exact") {
  Rational r(1);
  for (int i = 0; i < 40; ++i) r *= Rational(10);
  Rational s = r + Rational(1, 3);
  CHECK(s - r == Rational(1, 3));
  CHECK_THROWS_AS(r.to_ll(), oklab::GeomError);  // does not fit
}

TEST_CASE("to_ll") {
  CHECK(Rational(42).to_ll() == 42);
  CHECK_THROWS_AS(Rational(1, 2).to_ll(), oklab::GeomError);
}
