#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>

#include "oklab/errors.hpp"

namespace oklab {

// Arbitrary-precision rational number, always kept in canonical form:
// denominator > 0 and gcd(|num|, den) = 1.  Arithmetic is exact; there is
// deliberately no conversion to floating point in the core.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long long n) : v_(static_cast<long>(n)) {}  // NOLINT(runtime/explicit)
  Rational(int n) : v_(n) {}                           // NOLINT(runtime/explicit)
  Rational(long long n, long long d);
  explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }
  explicit Rational(const mpz_class& n) : v_(n) {}

  // Parses "p/q" or "p" with optional sign.  Throws SchemaError on junk.
  static Rational from_string(const std::string& s);

  // Renders "p/q", or "p" when the denominator is 1.
  std::string str() const;

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  int sgn() const { return ::sgn(v_); }
  bool is_zero() const { return sgn() == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  Rational abs() const { return Rational(mpq_class(::abs(v_))); }

  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }

  // Largest integer <= value / smallest integer >= value.
  mpz_class floor_z() const;
  mpz_class ceil_z() const;

  // Checked conversion; throws GeomError unless the value is an integer
  // fitting in long long.
  long long to_ll() const;

  const mpq_class& raw() const { return v_; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  mpq_class v_;
};

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace oklab
