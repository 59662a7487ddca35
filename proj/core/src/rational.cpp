#include "oklab/rational.hpp"

#include <cctype>
#include <ostream>

namespace oklab {

Rational::Rational(long long n, long long d) {
  if (d == 0) throw GeomError("rational with zero denominator");
  v_ = mpq_class(static_cast<long>(n), static_cast<long>(d));
  v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw GeomError("division by zero");
  v_ /= o.v_;
  return *this;
}

Rational Rational::from_string(const std::string& s) {
  if (s.empty()) throw SchemaError("empty rational literal");
  auto check_int = [&](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '+' || t[0] == '-') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  auto strip_plus = [](std::string t) {
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    return t;
  };
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      if (!check_int(s)) throw SchemaError("bad rational literal: " + s);
      return Rational(mpq_class(mpz_class(strip_plus(s))));
    }
    const std::string num = strip_plus(s.substr(0, slash));
    const std::string den = strip_plus(s.substr(slash + 1));
    if (!check_int(num) || !check_int(den)) throw SchemaError("bad rational literal: " + s);
    mpz_class d(den);
    if (d == 0) throw SchemaError("zero denominator in rational literal: " + s);
    mpq_class q(mpz_class(num), d);
    q.canonicalize();
    return Rational(q);
  } catch (const std::invalid_argument&) {
    throw SchemaError("bad rational literal: " + s);
  }
}

std::string Rational::str() const {
  if (is_integer()) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

mpz_class Rational::floor_z() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
  return q;
}

mpz_class Rational::ceil_z() const {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
  return q;
}

long long Rational::to_ll() const {
  if (!is_integer()) throw GeomError("not an integer: " + str());
  if (!v_.get_num().fits_slong_p()) throw GeomError("integer overflow: " + str());
  return v_.get_num().get_si();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace oklab
