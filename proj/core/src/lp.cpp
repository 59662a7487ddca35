#include "oklab/lp.hpp"

#include <algorithm>

#include "oklab/errors.hpp"

namespace oklab {

void LpBuilder::add_ge(const QVector& row, const Rational& rhs) {
  if (row.dim() != dim_) throw DimensionMismatch("LpBuilder::add_ge");
  ge_rows_.push_back(row);
  ge_rhs_.push_back(rhs);
}

void LpBuilder::add_eq(const QVector& row, const Rational& rhs) {
  if (row.dim() != dim_) throw DimensionMismatch("LpBuilder::add_eq");
  eq_rows_.push_back(row);
  eq_rhs_.push_back(rhs);
}

namespace {

// Dense simplex tableau.  Variable layout: u_0..u_{d-1}, w_0..w_{d-1}
// (x = u - w), slacks for the >= rows, then artificials.  Minimization only;
// maximization is handled by negating the objective up front.
class Tableau {
 public:
  Tableau(const QVector& cost, const LpBuilder& lp) : d_(lp.dim()) {
    const int m_ge = static_cast<int>(lp.ge_rows().size());
    const int m_eq = static_cast<int>(lp.eq_rows().size());
    m_ = m_ge + m_eq;
    n_struct_ = 2 * d_ + m_ge;
    n_total_ = n_struct_ + m_;
    rows_.assign(m_, std::vector<Rational>(n_total_ + 1));
    basis_.resize(m_);
    cost_.assign(n_total_ + 1, Rational(0));

    for (int i = 0; i < m_; ++i) {
      const bool is_ge = i < m_ge;
      const QVector& r = is_ge ? lp.ge_rows()[i] : lp.eq_rows()[i - m_ge];
      Rational rhs = is_ge ? lp.ge_rhs()[i] : lp.eq_rhs()[i - m_ge];
      auto& row = rows_[i];
      for (int j = 0; j < d_; ++j) {
        row[j] = r[j];
        row[d_ + j] = -r[j];
      }
      if (is_ge) row[2 * d_ + i] = Rational(-1);  // a.x - s = b
      row[n_total_] = rhs;
      if (rhs < Rational(0))
        for (auto& v : row) v = -v;
      row[n_struct_ + i] = Rational(1);  // artificial
      basis_[i] = n_struct_ + i;
    }

    // Phase-1 cost: minimize the sum of artificials.  With the artificial
    // basis, the reduced cost row is minus the column sums.
    for (int j = 0; j <= n_total_; ++j) {
      Rational s;
      for (int i = 0; i < m_; ++i) s += rows_[i][j];
      cost_[j] = -s;
    }
    for (int i = 0; i < m_; ++i) cost_[n_struct_ + i] = Rational(0);

    phase1_objective_ = -cost_[n_total_];

    // Real objective on the structural variables, for phase 2.
    real_cost_.assign(n_total_ + 1, Rational(0));
    for (int j = 0; j < d_; ++j) {
      real_cost_[j] = cost[j];
      real_cost_[d_ + j] = -cost[j];
    }
  }

  LpStatus run() {
    if (!iterate(/*allow_artificials=*/false)) return LpStatus::Unbounded;  // cannot happen in phase 1
    if (!(-cost_[n_total_]).is_zero()) return LpStatus::Infeasible;
    purge_artificials();

    cost_ = real_cost_;
    for (int i = 0; i < m_; ++i) {
      if (dropped_[i]) continue;
      const Rational cb = cost_[basis_[i]];
      if (cb.is_zero()) continue;
      for (int j = 0; j <= n_total_; ++j) cost_[j] -= cb * rows_[i][j];
    }
    if (!iterate(/*allow_artificials=*/false)) return LpStatus::Unbounded;
    return LpStatus::Optimal;
  }

  Rational objective_value() const { return -cost_[n_total_]; }

  QVector solution() const {
    QVector x(d_);
    for (int i = 0; i < m_; ++i) {
      if (dropped_[i]) continue;
      const int b = basis_[i];
      if (b < d_) x[b] += rows_[i][n_total_];
      else if (b < 2 * d_) x[b - d_] -= rows_[i][n_total_];
    }
    return x;
  }

 private:
  // Bland's rule: entering = lowest-index column with negative reduced cost,
  // leaving = min-ratio row breaking ties by lowest basic variable index.
  bool iterate(bool allow_artificials) {
    if (dropped_.empty()) dropped_.assign(m_, false);
    for (;;) {
      int enter = -1;
      const int limit = allow_artificials ? n_total_ : n_struct_;
      for (int j = 0; j < limit; ++j)
        if (cost_[j] < Rational(0)) { enter = j; break; }
      if (enter < 0) return true;

      int leave = -1;
      Rational best;
      for (int i = 0; i < m_; ++i) {
        if (dropped_[i]) continue;
        if (rows_[i][enter] <= Rational(0)) continue;
        const Rational ratio = rows_[i][n_total_] / rows_[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  void pivot(int r, int c) {
    auto& row = rows_[r];
    const Rational inv = Rational(1) / row[c];
    for (auto& v : row) v *= inv;
    for (int i = 0; i < m_; ++i) {
      if (i == r || dropped_[i] || rows_[i][c].is_zero()) continue;
      const Rational f = rows_[i][c];
      for (int j = 0; j <= n_total_; ++j) rows_[i][j] -= f * row[j];
    }
    if (!cost_[c].is_zero()) {
      const Rational f = cost_[c];
      for (int j = 0; j <= n_total_; ++j) cost_[j] -= f * row[j];
    }
    basis_[r] = c;
  }

  // After phase 1 an artificial may remain basic at value zero; pivot it out
  // on any structural column, or drop the (redundant) row.
  void purge_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (dropped_[i] || basis_[i] < n_struct_) continue;
      int c = -1;
      for (int j = 0; j < n_struct_; ++j)
        if (!rows_[i][j].is_zero()) { c = j; break; }
      if (c >= 0) pivot(i, c);
      else dropped_[i] = true;
    }
  }

  int d_, m_, n_struct_, n_total_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> cost_, real_cost_;
  std::vector<int> basis_;
  std::vector<bool> dropped_;
  Rational phase1_objective_;
};

}  // namespace

LpSolution lp_solve(const QVector& objective, LpSense sense, const LpBuilder& lp) {
  if (objective.dim() != lp.dim()) throw DimensionMismatch("lp_solve objective");
  QVector cost = sense == LpSense::Minimize ? objective : -objective;
  Tableau t(cost, lp);
  LpSolution out;
  out.status = t.run();
  if (out.status == LpStatus::Optimal) {
    out.x = t.solution();
    out.value = dot(objective, out.x);
  }
  return out;
}

LpOptimum lp_lex_optimum(const QVector& objective, LpSense sense, const LpBuilder& lp) {
  LpSolution first = lp_solve(objective, sense, lp);
  if (first.status == LpStatus::Infeasible) throw InfeasibleError("lp: infeasible");
  if (first.status == LpStatus::Unbounded) throw UnboundedError("lp: unbounded");

  LpBuilder fixed = lp;
  fixed.add_eq(objective, first.value);
  QVector point(lp.dim());
  for (int j = 0; j < lp.dim(); ++j) {
    const QVector ej = QVector::unit(lp.dim(), j);
    LpSolution step = lp_solve(ej, LpSense::Minimize, fixed);
    if (step.status != LpStatus::Optimal)
      throw UnboundedError("lp: optimal face unbounded, no lex-min point");
    point[j] = step.value;
    fixed.add_eq(ej, step.value);
  }
  return LpOptimum{first.value, point};
}

}  // namespace oklab
