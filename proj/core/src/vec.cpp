#include "oklab/vec.hpp"

#include <algorithm>

namespace oklab {

namespace {

void require_same_dim(const QVector& a, const QVector& b, const char* op) {
  if (a.dim() != b.dim())
    throw DimensionMismatch(std::string(op) + ": dimensions " + std::to_string(a.dim()) +
                            " vs " + std::to_string(b.dim()));
}

}  // namespace

QVector QVector::unit(int dim, int i) {
  QVector v(dim);
  v[i] = Rational(1);
  return v;
}

bool QVector::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](const Rational& r) { return r.is_zero(); });
}

QVector& QVector::operator+=(const QVector& o) {
  require_same_dim(*this, o, "vector add");
  for (int i = 0; i < dim(); ++i) e_[i] += o.e_[i];
  return *this;
}

QVector& QVector::operator-=(const QVector& o) {
  require_same_dim(*this, o, "vector sub");
  for (int i = 0; i < dim(); ++i) e_[i] -= o.e_[i];
  return *this;
}

QVector& QVector::operator*=(const Rational& c) {
  for (auto& x : e_) x *= c;
  return *this;
}

QVector QVector::operator-() const {
  QVector v(*this);
  for (int i = 0; i < v.dim(); ++i) v[i] = -v[i];
  return v;
}

Rational dot(const QVector& a, const QVector& b) {
  require_same_dim(a, b, "dot");
  Rational s;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

bool lex_less(const QVector& a, const QVector& b) {
  require_same_dim(a, b, "lex compare");
  for (int i = 0; i < a.dim(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return false;
}

QVector primitive(const QVector& v) {
  if (v.is_zero()) throw GeomError("primitive of zero vector");
  mpz_class den_lcm(1);
  for (int i = 0; i < v.dim(); ++i)
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), v[i].denominator().get_mpz_t());
  mpz_class num_gcd(0);
  for (int i = 0; i < v.dim(); ++i) {
    mpz_class scaled = v[i].numerator() * (den_lcm / v[i].denominator());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled.get_mpz_t());
  }
  Rational factor(mpq_class(den_lcm, num_gcd));
  QVector out(v.dim());
  for (int i = 0; i < v.dim(); ++i) out[i] = v[i] * factor;
  return out;
}

QVector from_ll(const std::vector<long long>& v) {
  QVector out(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = Rational(v[i]);
  return out;
}

QMatrix QMatrix::identity(int n) {
  QMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = Rational(1);
  return m;
}

QMatrix QMatrix::from_rows(const std::vector<QVector>& rows) {
  if (rows.empty()) return QMatrix(0, 0);
  QMatrix m(static_cast<int>(rows.size()), rows[0].dim());
  for (int i = 0; i < m.rows(); ++i) {
    if (rows[i].dim() != m.cols()) throw DimensionMismatch("ragged rows in matrix");
    for (int j = 0; j < m.cols(); ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

QVector QMatrix::row(int i) const {
  QVector v(cols_);
  for (int j = 0; j < cols_; ++j) v[j] = at(i, j);
  return v;
}

QVector QMatrix::col(int j) const {
  QVector v(rows_);
  for (int i = 0; i < rows_; ++i) v[i] = at(i, j);
  return v;
}

QVector QMatrix::apply(const QVector& v) const {
  if (v.dim() != cols_) throw DimensionMismatch("matrix apply");
  QVector out(rows_);
  for (int i = 0; i < rows_; ++i) {
    Rational s;
    for (int j = 0; j < cols_; ++j) s += at(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

QMatrix matmul(const QMatrix& a, const QMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matmul");
  QMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      if (a.at(i, k).is_zero()) continue;
      for (int j = 0; j < b.cols(); ++j) c.at(i, j) += a.at(i, k) * b.at(k, j);
    }
  return c;
}

namespace {

// Row echelon reduction in place; returns pivot columns.
std::vector<int> echelon(QMatrix& m) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int p = -1;
    for (int i = r; i < m.rows(); ++i)
      if (!m.at(i, c).is_zero()) { p = i; break; }
    if (p < 0) continue;
    if (p != r)
      for (int j = 0; j < m.cols(); ++j) std::swap(m.at(p, j), m.at(r, j));
    const Rational inv = Rational(1) / m.at(r, c);
    for (int j = c; j < m.cols(); ++j) m.at(r, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == r || m.at(i, c).is_zero()) continue;
      const Rational f = m.at(i, c);
      for (int j = c; j < m.cols(); ++j) m.at(i, j) -= f * m.at(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

int rank(QMatrix m) { return static_cast<int>(echelon(m).size()); }

Rational det(QMatrix m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("det of non-square matrix");
  const int n = m.rows();
  Rational d(1);
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (!m.at(i, c).is_zero()) { p = i; break; }
    if (p < 0) return Rational(0);
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(m.at(p, j), m.at(c, j));
      d = -d;
    }
    d *= m.at(c, c);
    const Rational inv = Rational(1) / m.at(c, c);
    for (int i = c + 1; i < n; ++i) {
      if (m.at(i, c).is_zero()) continue;
      const Rational f = m.at(i, c) * inv;
      for (int j = c; j < n; ++j) m.at(i, j) -= f * m.at(c, j);
    }
  }
  return d;
}

std::optional<QMatrix> inverse(const QMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("inverse of non-square matrix");
  const int n = m.rows();
  QMatrix aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = Rational(1);
  }
  const auto pivots = echelon(aug);
  if (static_cast<int>(pivots.size()) != n || pivots.back() != n - 1) return std::nullopt;
  QMatrix inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
  return inv;
}

std::optional<QVector> solve_linear(const QMatrix& a, const QVector& b) {
  if (a.rows() != b.dim()) throw DimensionMismatch("solve_linear");
  QMatrix aug(a.rows(), a.cols() + 1);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
    aug.at(i, a.cols()) = b[i];
  }
  const auto pivots = echelon(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;  // row (0..0 | 1)
  QVector x(a.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(static_cast<int>(r), a.cols());
  return x;
}

std::vector<QVector> nullspace(const QMatrix& a) {
  QMatrix m = a;
  const auto pivots = echelon(m);
  std::vector<bool> is_pivot(static_cast<std::size_t>(a.cols()), false);
  for (int c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<QVector> basis;
  for (int free = 0; free < a.cols(); ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    QVector v(a.cols());
    v[free] = Rational(1);
    for (std::size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = -m.at(static_cast<int>(r), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace oklab
