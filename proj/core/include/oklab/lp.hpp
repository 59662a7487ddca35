#pragma once

#include <vector>

#include "oklab/vec.hpp"

namespace oklab {

enum class LpSense { Minimize, Maximize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

// Linear constraints over free variables x in Q^dim:
//   ge rows:  <row, x> >= rhs
//   eq rows:  <row, x> == rhs
class LpBuilder {
 public:
  explicit LpBuilder(int dim) : dim_(dim) {}

  void add_ge(const QVector& row, const Rational& rhs);
  void add_le(const QVector& row, const Rational& rhs) { add_ge(-row, -rhs); }
  void add_eq(const QVector& row, const Rational& rhs);

  int dim() const { return dim_; }
  const std::vector<QVector>& ge_rows() const { return ge_rows_; }
  const std::vector<Rational>& ge_rhs() const { return ge_rhs_; }
  const std::vector<QVector>& eq_rows() const { return eq_rows_; }
  const std::vector<Rational>& eq_rhs() const { return eq_rhs_; }

 private:
  int dim_;
  std::vector<QVector> ge_rows_;
  std::vector<Rational> ge_rhs_;
  std::vector<QVector> eq_rows_;
  std::vector<Rational> eq_rhs_;
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Rational value;  // meaningful only when Optimal
  QVector x;       // meaningful only when Optimal
};

// Exact two-phase simplex with Bland's rule; deterministic for a fixed
// constraint order.
LpSolution lp_solve(const QVector& objective, LpSense sense, const LpBuilder& lp);

// Lexicographically smallest point of the optimal face.  For polytopes this
// is a vertex.  Throws InfeasibleError / UnboundedError.
struct LpOptimum {
  Rational value;
  QVector point;
};
LpOptimum lp_lex_optimum(const QVector& objective, LpSense sense, const LpBuilder& lp);

}  // namespace oklab
