#include <doctest.h>

#include "oklab/vec.hpp"

using namespace oklab;

namespace {
QVector qv(std::initializer_list<long long> xs) {
  std::vector<Rational> e;
  for (long long x : xs) e.emplace_back(x);
  return QVector(std::move(e));
}
}  // namespace

TEST_CASE("vector arithmetic and dimension checks") {
  const QVector a = qv({1, 2}), b = qv({3, -1});
  CHECK(a + b == qv({4, 1}));
  CHECK(a - b == qv({-2, 3}));
  CHECK(Rational(2) * a == qv({2, 4}));
  CHECK(dot(a, b) == Rational(1));
  CHECK_THROWS_AS(dot(a, qv({1, 2, 3})), DimensionMismatch);
  CHECK(lex_less(qv({0, 5}), qv({1, 0})));
  CHECK_FALSE(lex_less(a, a));
}

TEST_CASE("primitive scaling") {
  QVector v{Rational(2, 3), Rational(-4, 3)};
  CHECK(primitive(v) == qv({1, -2}));
  CHECK(primitive(qv({6, -9})) == qv({2, -3}));
  CHECK_THROWS_AS(primitive(qv({0, 0})), GeomError);
}

TEST_CASE("rank det inverse") {
  QMatrix m = QMatrix::from_rows({qv({1, 2}), qv({3, 4})});
  CHECK(rank(m) == 2);
  CHECK(det(m) == Rational(-2));
  const QMatrix inv = *inverse(m);
  CHECK(matmul(m, inv) == QMatrix::identity(2));

  QMatrix sing = QMatrix::from_rows({qv({1, 2}), qv({2, 4})});
  CHECK(rank(sing) == 1);
  CHECK(det(sing) == Rational(0));
  CHECK_FALSE(inverse(sing).has_value());
}

TEST_CASE("solve_linear") {
  QMatrix a = QMatrix::from_rows({qv({1, 1}), qv({1, -1})});
  const auto x = solve_linear(a, qv({3, 1}));
  REQUIRE(x.has_value());
  CHECK(*x == qv({2, 1}));

  QMatrix inconsistent = QMatrix::from_rows({qv({1, 1}), qv({2, 2})});
  CHECK_FALSE(solve_linear(inconsistent, qv({1, 3})).has_value());

  // Underdetermined: free variables pinned to zero.
  QMatrix under = QMatrix::from_rows({qv({1, 1})});
  const auto y = solve_linear(under, qv({5}));
  REQUIRE(y.has_value());
  CHECK(a.rows() == 2);
  CHECK(*y == qv({5, 0}));
}

TEST_CASE("nullspace") {
  QMatrix a = QMatrix::from_rows({qv({1, 1, 0}), qv({0, 0, 1})});
  const auto ns = nullspace(a);
  REQUIRE(ns.size() == 1);
  CHECK(a.apply(ns[0]).is_zero());

  CHECK(nullspace(QMatrix::identity(3)).empty());
}

TEST_CASE("matrix apply and transpose") {
  QMatrix m = QMatrix::from_rows({qv({1, 0, 2}), qv({0, 1, -1})});
  CHECK(m.apply(qv({1, 1, 1})) == qv({3, 0}));
  CHECK(m.transpose().apply(qv({1, 1})) == qv({1, 1, 1}));
}
