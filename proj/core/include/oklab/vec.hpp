#pragma once

#include <initializer_list>
#include <optional>
#include <vector>

#include "oklab/rational.hpp"

namespace oklab {

// Dense rational vector with a fixed dimension.
class QVector {
 public:
  QVector() = default;
  explicit QVector(int dim) : e_(static_cast<std::size_t>(dim)) {}
  QVector(std::initializer_list<Rational> init) : e_(init) {}
  explicit QVector(std::vector<Rational> entries) : e_(std::move(entries)) {}

  static QVector zero(int dim) { return QVector(dim); }
  static QVector unit(int dim, int i);

  int dim() const { return static_cast<int>(e_.size()); }
  Rational& operator[](int i) { return e_[static_cast<std::size_t>(i)]; }
  const Rational& operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }
  const std::vector<Rational>& entries() const { return e_; }

  bool is_zero() const;

  QVector& operator+=(const QVector& o);
  QVector& operator-=(const QVector& o);
  QVector& operator*=(const Rational& c);
  friend QVector operator+(QVector a, const QVector& b) { return a += b; }
  friend QVector operator-(QVector a, const QVector& b) { return a -= b; }
  friend QVector operator*(const Rational& c, QVector v) { return v *= c; }
  QVector operator-() const;

  friend bool operator==(const QVector& a, const QVector& b) { return a.e_ == b.e_; }
  friend bool operator!=(const QVector& a, const QVector& b) { return !(a == b); }

 private:
  std::vector<Rational> e_;
};

Rational dot(const QVector& a, const QVector& b);

// Lexicographic order, used everywhere a deterministic choice is needed.
bool lex_less(const QVector& a, const QVector& b);

// Scales a nonzero rational vector to the primitive integer vector with the
// same direction (sign preserved).
QVector primitive(const QVector& v);

QVector from_ll(const std::vector<long long>& v);

// Dense rational matrix, row major.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(int rows, int cols) : rows_(rows), cols_(cols),
      a_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {}

  static QMatrix identity(int n);
  static QMatrix from_rows(const std::vector<QVector>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& at(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Rational& at(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  QVector row(int i) const;
  QVector col(int j) const;
  QVector apply(const QVector& v) const;  // M v
  QMatrix transpose() const;

  friend bool operator==(const QMatrix& a, const QMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

QMatrix matmul(const QMatrix& a, const QMatrix& b);

int rank(QMatrix m);
Rational det(QMatrix m);
std::optional<QMatrix> inverse(const QMatrix& m);

// One solution of A x = b, or nullopt when inconsistent.  Free variables are
// set to zero, pivoting on the first nonzero entry per column; deterministic.
std::optional<QVector> solve_linear(const QMatrix& a, const QVector& b);

// Basis of the kernel of A, derived from the reduced row echelon form.
std::vector<QVector> nullspace(const QMatrix& a);

}  // namespace oklab
