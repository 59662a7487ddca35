#include "oklab/surface.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "oklab/errors.hpp"
#include "oklab/limits.hpp"

namespace oklab::surface {

namespace {

void require_class(const LatticeSurface& s, const SurfDivisor& d) {
  if (d.dim() != s.rank) throw DimensionMismatch("divisor class has wrong rank");
}

int curve_index(const LatticeSurface& s, const std::string& name) {
  for (std::size_t i = 0; i < s.curves.size(); ++i)
    if (s.curves[i].name == name) return static_cast<int>(i);
  throw GeomError("unknown curve: " + name);
}

// Membership of the effective cone as LP feasibility over the generators.
bool in_effective_cone(const LatticeSurface& s, const SurfDivisor& d) {
  const int g = static_cast<int>(s.effective_generators.size());
  LpBuilder lp(g);
  for (int r = 0; r < s.rank; ++r) {
    QVector row(g);
    for (int i = 0; i < g; ++i) row[i] = s.effective_generators[static_cast<std::size_t>(i)][r];
    lp.add_eq(row, d[r]);
  }
  for (int i = 0; i < g; ++i) lp.add_ge(QVector::unit(g, i), Rational(0));
  return lp_solve(QVector::zero(g), LpSense::Minimize, lp).status == LpStatus::Optimal;
}

// Signature of a symmetric rational matrix by congruent diagonalization.
std::pair<int, int> signature(QMatrix m) {
  const int n = m.rows();
  int pos = 0, neg = 0;
  for (int i = 0; i < n; ++i) {
    if (m.at(i, i).is_zero()) {
      int j = -1;
      for (int k = i + 1; k < n; ++k)
        if (!m.at(k, k).is_zero()) { j = k; break; }
      if (j >= 0) {
        for (int c = 0; c < n; ++c) std::swap(m.at(i, c), m.at(j, c));
        for (int r = 0; r < n; ++r) std::swap(m.at(r, i), m.at(r, j));
      } else {
        for (int k = i + 1; k < n && j < 0; ++k)
          if (!m.at(i, k).is_zero()) j = k;
        if (j < 0) continue;  // zero row/column: null direction
        for (int c = 0; c < n; ++c) m.at(i, c) += m.at(j, c);
        for (int r = 0; r < n; ++r) m.at(r, i) += m.at(r, j);
      }
    }
    const Rational piv = m.at(i, i);
    (piv.sgn() > 0 ? pos : neg) += 1;
    for (int r = i + 1; r < n; ++r) {
      if (m.at(r, i).is_zero()) continue;
      const Rational f = m.at(r, i) / piv;
      for (int c = 0; c < n; ++c) m.at(r, c) -= f * m.at(i, c);
      for (int c = 0; c < n; ++c) m.at(c, r) = m.at(r, c);
    }
  }
  return {pos, neg};
}

bool negative_definite_gram(const LatticeSurface& s, const std::vector<int>& support) {
  const int k = static_cast<int>(support.size());
  QMatrix gram(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      gram.at(i, j) = pairing(s, s.curves[static_cast<std::size_t>(support[static_cast<std::size_t>(i)])].cls,
                              s.curves[static_cast<std::size_t>(support[static_cast<std::size_t>(j)])].cls);
  // (-1)^k det of the leading k x k minor must be positive for every k.
  for (int lead = 1; lead <= k; ++lead) {
    QMatrix minor(lead, lead);
    for (int i = 0; i < lead; ++i)
      for (int j = 0; j < lead; ++j) minor.at(i, j) = gram.at(i, j);
    Rational dt = det(minor);
    if (lead % 2 == 1) dt = -dt;
    if (dt.sgn() <= 0) return false;
  }
  return true;
}

bool is_nef(const LatticeSurface& s, const SurfDivisor& d) {
  for (const auto& g : s.effective_generators)
    if (pairing(s, d, g).sgn() < 0) return false;
  for (const auto& c : s.curves)
    if (pairing(s, d, c.cls).sgn() < 0) return false;
  return true;
}

}  // namespace

Rational pairing(const LatticeSurface& s, const SurfDivisor& a, const SurfDivisor& b) {
  require_class(s, a);
  require_class(s, b);
  return dot(a, s.form.apply(b));
}

const Curve& curve_by_name(const LatticeSurface& s, const std::string& name) {
  return s.curves[static_cast<std::size_t>(curve_index(s, name))];
}

SurfValidation validate(const LatticeSurface& s) {
  SurfValidation v;
  auto fail = [&](const std::string& m) {
    v.ok = false;
    v.problems.push_back(m);
  };

  if (s.rank < 1) {
    fail("rank must be positive");
    return v;
  }
  if (s.form.rows() != s.rank || s.form.cols() != s.rank) {
    fail("intersection form has wrong shape");
    return v;
  }
  if (s.form != s.form.transpose()) fail("intersection form is not symmetric");
  const auto [pos, neg] = signature(s.form);
  if (pos != 1 || neg != s.rank - 1)
    fail("signature not (1," + std::to_string(s.rank - 1) + ")");

  if (s.effective_generators.empty()) fail("no effective cone generators");
  for (const auto& g : s.effective_generators) {
    if (g.dim() != s.rank) fail("generator with wrong rank");
    else if (g.is_zero()) fail("zero effective generator");
  }
  if (!v.ok) return v;

  std::set<std::string> names;
  for (const auto& c : s.curves) {
    if (c.cls.dim() != s.rank) {
      fail("curve " + c.name + " has wrong rank");
      continue;
    }
    if (!names.insert(c.name).second) fail("duplicate curve name " + c.name);
    if (c.cls.is_zero()) fail("curve " + c.name + " has zero class");
    if (pairing(s, c.cls, c.cls).sgn() < 0) {
      const bool listed = std::any_of(
          s.effective_generators.begin(), s.effective_generators.end(),
          [&](const QVector& g) { return g == c.cls; });
      if (!listed) fail("negative curve " + c.name + " missing from effective generators");
    }
    if (!in_effective_cone(s, c.cls)) fail("curve " + c.name + " outside the effective cone");
  }

  // Pointedness: a functional strictly positive on all generators exists.
  {
    const int g = static_cast<int>(s.effective_generators.size());
    LpBuilder lp(s.rank);
    for (const auto& gen : s.effective_generators) lp.add_ge(gen, Rational(1));
    QVector obj(s.rank);
    bool pointed = true;
    // Any feasible point suffices; feasibility fails iff the cone is not pointed
    // or the generators do not span a pointed cone.
    LpBuilder feas = lp;
    if (lp_solve(QVector::zero(s.rank), LpSense::Minimize, feas).status != LpStatus::Optimal)
      pointed = false;
    (void)g;
    (void)obj;
    if (!pointed) fail("effective generators do not span a pointed cone");
  }

  {
    std::vector<QVector> rows = s.effective_generators;
    if (rank(QMatrix::from_rows(rows)) != s.rank)
      fail("effective cone is not full dimensional");
  }

  for (const auto& f : s.fibrations) {
    if (f.dim() != s.rank) {
      fail("fibration class with wrong rank");
      continue;
    }
    if (!pairing(s, f, f).is_zero()) fail("fibration class with nonzero self-intersection");
    if (!is_nef(s, f)) fail("fibration class is not nef");
    if (f.is_zero()) fail("zero fibration class");
  }
  return v;
}

SurfClassification classify(const LatticeSurface& s, const SurfDivisor& d) {
  require_class(s, d);
  SurfClassification c;
  c.pseudoeffective = in_effective_cone(s, d);
  c.nef = is_nef(s, d);
  if (c.pseudoeffective) {
    const auto zd = zariski_decompose(s, d, ZKind::Sigma);
    c.big = pairing(s, zd.positive, zd.positive).sgn() > 0;
  }
  return c;
}

ZariskiDecomposition zariski_decompose(const LatticeSurface& s, const SurfDivisor& d,
                                       ZKind kind) {
  require_class(s, d);
  if (!in_effective_cone(s, d))
    throw HypothesisError("zariski_decompose: divisor not pseudoeffective");

  if (kind == ZKind::S) {
    // Coefficient of each curve = minimum multiplicity over effective
    // representations of the class.  Representations decompose into the
    // declared curve classes and the cone generators; only a rigid curve
    // (negative self-intersection, hence a unique effective member) can pick
    // up multiplicity along itself -- members of mobile classes avoid any
    // fixed curve.
    ZariskiDecomposition out;
    out.kind = ZKind::S;
    out.positive = d;
    std::vector<QVector> blocks = s.effective_generators;
    for (const auto& c : s.curves)
      if (std::find(blocks.begin(), blocks.end(), c.cls) == blocks.end())
        blocks.push_back(c.cls);
    const int g = static_cast<int>(blocks.size());
    for (std::size_t ci = 0; ci < s.curves.size(); ++ci) {
      if (pairing(s, s.curves[ci].cls, s.curves[ci].cls).sgn() >= 0) continue;
      int block_idx = -1;
      for (int i = 0; i < g; ++i)
        if (blocks[static_cast<std::size_t>(i)] == s.curves[ci].cls) {
          block_idx = i;
          break;
        }
      LpBuilder lp(g);
      for (int r = 0; r < s.rank; ++r) {
        QVector row(g);
        for (int i = 0; i < g; ++i) row[i] = blocks[static_cast<std::size_t>(i)][r];
        lp.add_eq(row, d[r]);
      }
      for (int i = 0; i < g; ++i) lp.add_ge(QVector::unit(g, i), Rational(0));
      const auto sol = lp_solve(QVector::unit(g, block_idx), LpSense::Minimize, lp);
      if (sol.status != LpStatus::Optimal)
        throw GeomError("zariski_decompose: representation LP failed");
      if (sol.value.sgn() > 0) {
        out.negative.push_back({s.curves[ci].name, sol.value});
        out.positive -= sol.value * s.curves[ci].cls;
      }
    }
    std::sort(out.negative.begin(), out.negative.end());
    out.positive_semiample = s.abundant && is_nef(s, out.positive);
    return out;
  }

  // Support iteration.
  std::set<int> support;
  for (std::size_t i = 0; i < s.curves.size(); ++i)
    if (pairing(s, d, s.curves[i].cls).sgn() < 0) support.insert(static_cast<int>(i));

  std::vector<int> t(support.begin(), support.end());
  QVector coeffs;
  for (;;) {
    const int k = static_cast<int>(t.size());
    if (k > 0) {
      QMatrix gram(k, k);
      QVector rhs(k);
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j)
          gram.at(i, j) = pairing(s, s.curves[static_cast<std::size_t>(t[static_cast<std::size_t>(i)])].cls,
                                  s.curves[static_cast<std::size_t>(t[static_cast<std::size_t>(j)])].cls);
        rhs[i] = pairing(s, d, s.curves[static_cast<std::size_t>(t[static_cast<std::size_t>(i)])].cls);
      }
      const auto inv = inverse(gram);
      if (!inv) throw GeomError("zariski_decompose: singular Gram matrix (invalid curve list)");
      coeffs = inv->apply(rhs);
    } else {
      coeffs = QVector(0);
    }
    SurfDivisor p = d;
    for (int i = 0; i < k; ++i)
      p -= coeffs[i] * s.curves[static_cast<std::size_t>(t[static_cast<std::size_t>(i)])].cls;
    bool grew = false;
    for (std::size_t i = 0; i < s.curves.size(); ++i) {
      if (std::find(t.begin(), t.end(), static_cast<int>(i)) != t.end()) continue;
      if (pairing(s, p, s.curves[i].cls).sgn() < 0) {
        t.push_back(static_cast<int>(i));
        grew = true;
      }
    }
    if (!grew) break;
    std::sort(t.begin(), t.end());
  }

  ZariskiDecomposition out;
  out.kind = kind;
  out.positive = d;
  std::vector<int> final_support;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (coeffs[static_cast<int>(i)].sgn() < 0)
      throw GeomError("zariski_decompose: negative coefficient (invalid curve list)");
    if (coeffs[static_cast<int>(i)].sgn() == 0) continue;
    final_support.push_back(t[i]);
    out.negative.push_back({s.curves[static_cast<std::size_t>(t[i])].name, coeffs[static_cast<int>(i)]});
    out.positive -= coeffs[static_cast<int>(i)] * s.curves[static_cast<std::size_t>(t[i])].cls;
  }
  std::sort(out.negative.begin(), out.negative.end());

  // Output invariants.
  if (!is_nef(s, out.positive))
    throw GeomError("zariski_decompose: positive part not nef (generator list incomplete?)");
  for (int i : final_support)
    if (!pairing(s, out.positive, s.curves[static_cast<std::size_t>(i)].cls).is_zero())
      throw GeomError("zariski_decompose: positive part meets the support");
  if (!final_support.empty() && !negative_definite_gram(s, final_support))
    throw GeomError("zariski_decompose: support Gram matrix not negative definite");

  if (kind == ZKind::Good) {
    if (!s.abundant)
      throw HypothesisError("zariski_decompose: good decomposition needs the abundance flag");
    const auto via_s = zariski_decompose(s, d, ZKind::S);
    if (via_s.negative != out.negative)
      throw RefutationError("zariski_decompose: sigma and s routes disagree");
    out.positive_semiample = is_nef(s, out.positive);  // nef implies semiample on the model
  }
  return out;
}

int numerical_dim(const LatticeSurface& s, const SurfDivisor& d) {
  require_class(s, d);
  if (!in_effective_cone(s, d)) return toric::kKappaNone;
  const auto zd = zariski_decompose(s, d, ZKind::Sigma);
  const Rational p2 = pairing(s, zd.positive, zd.positive);
  if (p2.sgn() > 0) return 2;
  return zd.positive.is_zero() ? 0 : 1;
}

int kappa(const LatticeSurface& s, const SurfDivisor& d) {
  const int nu = numerical_dim(s, d);
  if (nu == toric::kKappaNone || nu == 2) return nu;
  if (!s.abundant)
    throw HypothesisError("kappa: non-big divisor on a model without the abundance flag");
  return nu;
}

Rational mu(const LatticeSurface& s, const SurfDivisor& d, const std::string& curve) {
  require_class(s, d);
  const QVector c = curve_by_name(s, curve).cls;
  const int g = static_cast<int>(s.effective_generators.size());
  // Variables (t, lambda): D - tC = sum lambda_i G_i, lambda >= 0; maximize t.
  LpBuilder lp(1 + g);
  for (int r = 0; r < s.rank; ++r) {
    QVector row(1 + g);
    row[0] = c[r];
    for (int i = 0; i < g; ++i) row[1 + i] = s.effective_generators[static_cast<std::size_t>(i)][r];
    lp.add_eq(row, d[r]);
  }
  for (int i = 0; i < g; ++i) lp.add_ge(QVector::unit(1 + g, 1 + i), Rational(0));
  const auto sol = lp_solve(QVector::unit(1 + g, 0), LpSense::Maximize, lp);
  if (sol.status == LpStatus::Infeasible)
    throw HypothesisError("mu: divisor not pseudoeffective");
  if (sol.status == LpStatus::Unbounded)
    throw GeomError("mu: unbounded (effective cone not pointed?)");
  return sol.value;
}

namespace {

Rational ord_in(const ZariskiDecomposition& zd, const std::string& curve) {
  for (const auto& [name, c] : zd.negative)
    if (name == curve) return c;
  return Rational(0);
}

struct AffineDecomp {
  std::vector<int> support;
  // c(t) = c0 + t c1 per support curve
  std::vector<Rational> c0, c1;
  Rational lo, hi;  // validity interval
};

// Affine solution of the Gram system for a fixed support, with its exact
// validity interval inside [t_lo, t_hi].
AffineDecomp affine_on_support(const LatticeSurface& s, const SurfDivisor& d, const QVector& c,
                               const std::vector<int>& support, const Rational& t_lo,
                               const Rational& t_hi) {
  AffineDecomp out;
  out.support = support;
  const int k = static_cast<int>(support.size());
  if (k > 0) {
    QMatrix gram(k, k);
    QVector b0(k), b1(k);
    for (int i = 0; i < k; ++i) {
      const QVector& ci = s.curves[static_cast<std::size_t>(support[static_cast<std::size_t>(i)])].cls;
      for (int j = 0; j < k; ++j)
        gram.at(i, j) = pairing(s, ci, s.curves[static_cast<std::size_t>(support[static_cast<std::size_t>(j)])].cls);
      b0[i] = pairing(s, d, ci);
      b1[i] = -pairing(s, c, ci);
    }
    const auto inv = inverse(gram);
    if (!inv) throw GeomError("parametric_sweep: singular Gram matrix");
    const QVector x0 = inv->apply(b0), x1 = inv->apply(b1);
    out.c0.assign(x0.entries().begin(), x0.entries().end());
    out.c1.assign(x1.entries().begin(), x1.entries().end());
  }

  // Validity: coefficients nonnegative and the positive part nef.
  Rational lo = t_lo, hi = t_hi;
  auto restrict_by = [&](const Rational& a0, const Rational& a1) {
    // condition a0 + a1 t >= 0
    if (a1.sgn() == 0) return;
    const Rational root = -a0 / a1;
    if (a1.sgn() > 0) lo = max(lo, root);
    else hi = min(hi, root);
  };
  for (int i = 0; i < k; ++i) restrict_by(out.c0[static_cast<std::size_t>(i)], out.c1[static_cast<std::size_t>(i)]);

  // P_t = D - tC - sum c_j(t) C_j; its product with any class is affine.
  auto beta_affine = [&](const QVector& probe) {
    Rational a0 = pairing(s, d, probe);
    Rational a1 = -pairing(s, c, probe);
    for (int i = 0; i < k; ++i) {
      const Rational pc = pairing(s, s.curves[static_cast<std::size_t>(support[static_cast<std::size_t>(i)])].cls, probe);
      a0 -= out.c0[static_cast<std::size_t>(i)] * pc;
      a1 -= out.c1[static_cast<std::size_t>(i)] * pc;
    }
    return std::pair<Rational, Rational>(a0, a1);
  };
  for (std::size_t ci = 0; ci < s.curves.size(); ++ci) {
    if (std::find(support.begin(), support.end(), static_cast<int>(ci)) != support.end())
      continue;
    const auto [a0, a1] = beta_affine(s.curves[ci].cls);
    restrict_by(a0, a1);
  }
  for (const auto& g : s.effective_generators) {
    const auto [a0, a1] = beta_affine(g);
    restrict_by(a0, a1);
  }
  out.lo = lo;
  out.hi = hi;
  return out;
}

}  // namespace

Sweep parametric_sweep(const LatticeSurface& s, const SurfDivisor& d, const std::string& curve) {
  require_class(s, d);
  const QVector c = curve_by_name(s, curve).cls;
  Sweep sweep;
  sweep.a = ord_in(zariski_decompose(s, d, ZKind::Sigma), curve);
  sweep.mu_value = mu(s, d, curve);
  if (!(sweep.a < sweep.mu_value)) return sweep;

  // Divide and conquer: decompose at the midpoint, extend its support's
  // affine formula to its exact validity interval, recurse on both sides.
  struct Task { Rational lo, hi; };
  std::vector<Task> stack = {{sweep.a, sweep.mu_value}};
  std::vector<SweepChamber> chambers;
  int guard = 0;
  while (!stack.empty()) {
    if (++guard > 1000) throw GeomError("parametric_sweep: chamber recursion runaway");
    const Task task = stack.back();
    stack.pop_back();
    if (!(task.lo < task.hi)) continue;
    const Rational mid = (task.lo + task.hi) / Rational(2);
    const auto zd = zariski_decompose(s, d - mid * c, ZKind::Sigma);
    std::vector<int> support;
    for (const auto& [name, coeff] : zd.negative) support.push_back(curve_index(s, name));
    std::sort(support.begin(), support.end());
    const AffineDecomp ad = affine_on_support(s, d, c, support, sweep.a, sweep.mu_value);
    if (!(ad.lo <= mid && mid <= ad.hi))
      throw GeomError("parametric_sweep: validity interval misses the probe");

    const Rational lo = max(ad.lo, task.lo), hi = min(ad.hi, task.hi);
    SweepChamber ch;
    ch.t_lo = lo;
    ch.t_hi = hi;
    for (std::size_t i = 0; i < support.size(); ++i) {
      ch.support.push_back(s.curves[static_cast<std::size_t>(support[i])].name);
      ch.coeff_affine.push_back({ad.c0[i], ad.c1[i]});
    }
    // beta(t) = P_t . C
    Rational b0 = pairing(s, d, c), b1 = -pairing(s, c, c);
    for (std::size_t i = 0; i < support.size(); ++i) {
      const Rational pc = pairing(s, s.curves[static_cast<std::size_t>(support[i])].cls, c);
      b0 -= ad.c0[i] * pc;
      b1 -= ad.c1[i] * pc;
    }
    ch.beta0 = b0;
    ch.beta1 = b1;
    chambers.push_back(std::move(ch));

    if (task.lo < lo) stack.push_back({task.lo, lo});
    if (hi < task.hi) stack.push_back({hi, task.hi});
  }
  std::sort(chambers.begin(), chambers.end(),
            [](const SweepChamber& a, const SweepChamber& b) { return a.t_lo < b.t_lo; });
  sweep.chambers = std::move(chambers);

  // The chambers must tile [a, mu] and beta must be concave across them.
  Rational cursor = sweep.a;
  for (const auto& ch : sweep.chambers) {
    if (ch.t_lo != cursor) throw GeomError("parametric_sweep: chamber gap");
    cursor = ch.t_hi;
  }
  if (cursor != sweep.mu_value) throw GeomError("parametric_sweep: chambers do not reach mu");
  for (std::size_t i = 0; i + 1 < sweep.chambers.size(); ++i)
    if (sweep.chambers[i].beta1 < sweep.chambers[i + 1].beta1)
      throw RefutationError("parametric_sweep: beta is not concave");
  return sweep;
}

Polytope okounkov_polygon(const LatticeSurface& s, const SurfDivisor& d, const SurfFlag& flag,
                          BodyKind kind) {
  require_class(s, d);
  const std::string& cname = flag.curve;
  curve_by_name(s, cname);

  const auto cls = classify(s, d);
  auto big_polygon = [&]() {
    const Sweep sw = parametric_sweep(s, d, cname);
    std::vector<QVector> pts;
    pts.push_back(QVector{sw.a, Rational(0)});
    pts.push_back(QVector{sw.mu_value, Rational(0)});
    for (const auto& ch : sw.chambers) {
      pts.push_back(QVector{ch.t_lo, ch.beta0 + ch.beta1 * ch.t_lo});
      pts.push_back(QVector{ch.t_hi, ch.beta0 + ch.beta1 * ch.t_hi});
    }
    return Polytope::hull(2, pts);
  };

  switch (kind) {
    case BodyKind::Big:
      if (!cls.big) throw HypothesisError("okounkov_polygon: divisor not big");
      return big_polygon();
    case BodyKind::Lim: {
      if (!cls.pseudoeffective)
        throw HypothesisError("okounkov_polygon: divisor not pseudoeffective");
      const int nu = numerical_dim(s, d);
      if (nu == 2) return big_polygon();
      // nu <= 1: the body degenerates to the triangle with the horizontal
      // reach [a, mu] and the vertical reach P.C; at most one of the two is
      // nontrivial (a positive height forces mu = a, a fiber-type flag curve
      // forces height zero).
      const auto zd = zariski_decompose(s, d, ZKind::Sigma);
      const Rational t0 = ord_in(zd, cname);
      const Rational t1 = mu(s, d, cname);
      const Rational height = pairing(s, zd.positive, curve_by_name(s, cname).cls);
      return Polytope::hull(
          2, {QVector{t0, Rational(0)}, QVector{t1, Rational(0)}, QVector{t0, height}});
    }
    case BodyKind::Val: {
      if (!cls.pseudoeffective)
        throw HypothesisError("okounkov_polygon: divisor not effective");
      const int k = kappa(s, d);
      if (k == 2) return big_polygon();
      const auto zd = zariski_decompose(s, d, ZKind::S);
      const Rational t0 = ord_in(zd, cname);
      const Rational t1 = mu(s, d, cname);
      if (k == 0) return Polytope::hull(2, {QVector{t0, Rational(0)}});
      // kappa = 1: the moving part is a multiple of a declared fiber class F.
      // A flag curve dominating the base (C.F >= 1) sees the full pencil as
      // the vertical reach d; a fiber component sees the horizontal reach mu.
      const QVector c = curve_by_name(s, cname).cls;
      for (const auto& f : s.fibrations) {
        int pivot = -1;
        for (int r = 0; r < s.rank; ++r)
          if (!f[r].is_zero()) { pivot = r; break; }
        const Rational dcoef = zd.positive[pivot] / f[pivot];
        if (dcoef * f == zd.positive && dcoef.sgn() >= 0) {
          const Rational height = pairing(s, c, f) >= Rational(1) ? dcoef : Rational(0);
          return Polytope::hull(
              2, {QVector{t0, Rational(0)}, QVector{t1, Rational(0)}, QVector{t0, height}});
        }
      }
      throw HypothesisError("fibration data required");
    }
  }
  throw GeomError("okounkov_polygon: unknown kind");
}

RestrictedVolumes restricted_volumes(const LatticeSurface& s, const SurfDivisor& d,
                                     const std::string& curve,
                                     const std::optional<SurfDivisor>& ample) {
  require_class(s, d);
  const QVector c = curve_by_name(s, curve).cls;
  const auto cls = classify(s, d);
  if (!cls.pseudoeffective)
    throw HypothesisError("restricted_volumes: divisor not pseudoeffective");
  const SurfDivisor a = ample ? *ample : default_ample(s);

  const auto zd = zariski_decompose(s, d, ZKind::Sigma);
  RestrictedVolumes out;
  if (cls.big) {
    const auto loci = base_loci_divisorial(s, d);
    if (std::find(loci.plus.begin(), loci.plus.end(), curve) != loci.plus.end())
      throw HypothesisError("restricted_volumes: curve inside B+");
    out.vol = pairing(s, zd.positive, c);
    out.vol_plus = limit_at_zero([&](const Rational& eps) {
      const auto zde = zariski_decompose(s, d + eps * a, ZKind::Sigma);
      return pairing(s, zde.positive, c);
    });
    if (out.vol != out.vol_plus)
      throw RefutationError("restricted_volumes: vol+ differs from vol on a big divisor");
    return out;
  }

  for (const auto& [name, coeff] : zd.negative)
    if (name == curve) throw HypothesisError("restricted_volumes: curve inside B-");
  out.vol_plus = pairing(s, zd.positive, c);

  const int k = kappa(s, d);
  if (k == 0) {
    out.vol = Rational(0);
    return out;
  }
  // kappa = 1: sections are pulled back from the base of the fibration, so
  // the restricted volume is the multiple d in P_s = d F whenever the curve
  // dominates the base.
  const auto zs = zariski_decompose(s, d, ZKind::S);
  for (const auto& f : s.fibrations) {
    int pivot = -1;
    for (int r = 0; r < s.rank; ++r)
      if (!f[r].is_zero()) { pivot = r; break; }
    const Rational dcoef = zs.positive[pivot] / f[pivot];
    if (dcoef * f == zs.positive && dcoef.sgn() >= 0) {
      const Rational cf = pairing(s, c, f);
      out.vol = cf >= Rational(1) ? dcoef : Rational(0);
      return out;
    }
  }
  throw HypothesisError("fibration data required");
}

DivisorialLoci base_loci_divisorial(const LatticeSurface& s, const SurfDivisor& d) {
  require_class(s, d);
  if (!in_effective_cone(s, d))
    throw HypothesisError("base_loci_divisorial: divisor not pseudoeffective");
  const auto zd = zariski_decompose(s, d, ZKind::Sigma);
  DivisorialLoci out;
  for (const auto& [name, coeff] : zd.negative) out.minus.push_back(name);

  const Rational p2 = pairing(s, zd.positive, zd.positive);
  if (p2.sgn() > 0) {
    std::set<std::string> plus(out.minus.begin(), out.minus.end());
    for (const auto& c : s.curves)
      if (pairing(s, zd.positive, c.cls).is_zero()) plus.insert(c.name);
    out.plus.assign(plus.begin(), plus.end());
  } else {
    throw HypothesisError("base_loci_divisorial: B+ needs a big divisor");
  }
  return out;
}

SurfDivisor default_ample(const LatticeSurface& s) {
  // Any class pairing to at least 1 with every effective generator is ample
  // on the model (strictly positive on the effective cone, hence of positive
  // self-intersection).  Minimizing against the summed pairing keeps the LP
  // bounded; the lex rule makes the result deterministic.
  LpBuilder lp(s.rank);
  QVector sumrow(s.rank);
  for (const auto& gen : s.effective_generators) {
    const QVector row = s.form.apply(gen);
    lp.add_ge(row, Rational(1));
    sumrow += row;
  }
  const auto opt = lp_lex_optimum(sumrow, LpSense::Minimize, lp);
  return opt.point;
}

SurfDivisor second_ample(const LatticeSurface& s) {
  const SurfDivisor a = default_ample(s);
  if (!s.fibrations.empty()) return a + s.fibrations[0];
  return a + a;  // proportional fallback; instances override where it matters
}

// ---------------------------------------------------------------------------
// Toric surface models
// ---------------------------------------------------------------------------

ToricSurfaceModel from_toric(const toric::ToricVariety& x) {
  if (x.n != 2) throw HypothesisError("from_toric: only surfaces");
  const auto val = toric::validate(x);
  if (!val.ok()) throw GeomError("from_toric: fan invalid");
  const int r = x.num_rays();
  const int rho = r - 2;
  if (rho < 1) throw GeomError("from_toric: rank would not be positive");

  // Cyclic order of the rays.
  std::vector<int> order(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) order[static_cast<std::size_t>(i)] = i;
  auto half = [&](int i) {
    const auto& v = x.rays[static_cast<std::size_t>(i)];
    return (v[1] > 0 || (v[1] == 0 && v[0] > 0)) ? 0 : 1;
  };
  auto cross = [&](int i, int j) {
    const auto& u = x.rays[static_cast<std::size_t>(i)];
    const auto& v = x.rays[static_cast<std::size_t>(j)];
    return u[0] * v[1] - u[1] * v[0];
  };
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (half(i) != half(j)) return half(i) < half(j);
    return cross(i, j) > 0;
  });

  // Consecutive pairs must be exactly the maximal cones.
  {
    std::set<std::vector<int>> cones;
    for (const auto& mc : x.max_cones) {
      auto cc = mc;
      std::sort(cc.begin(), cc.end());
      cones.insert(cc);
    }
    for (int i = 0; i < r; ++i) {
      std::vector<int> pair = {order[static_cast<std::size_t>(i)],
                               order[static_cast<std::size_t>((i + 1) % r)]};
      std::sort(pair.begin(), pair.end());
      if (!cones.count(pair)) throw GeomError("from_toric: fan is not a cyclic surface fan");
    }
  }

  // Self-intersections from the wall relations v_prev + v_next = b * v.
  std::vector<Rational> self_int(static_cast<std::size_t>(r));
  for (int idx = 0; idx < r; ++idx) {
    const int prev = order[static_cast<std::size_t>((idx + r - 1) % r)];
    const int cur = order[static_cast<std::size_t>(idx)];
    const int next = order[static_cast<std::size_t>((idx + 1) % r)];
    const auto& vp = x.rays[static_cast<std::size_t>(prev)];
    const auto& vc = x.rays[static_cast<std::size_t>(cur)];
    const auto& vn = x.rays[static_cast<std::size_t>(next)];
    const long long sx = vp[0] + vn[0], sy = vp[1] + vn[1];
    Rational b;
    if (vc[0] != 0) b = Rational(sx, vc[0]);
    else b = Rational(sy, vc[1]);
    if (Rational(vc[0]) * b != Rational(sx) || Rational(vc[1]) * b != Rational(sy))
      throw GeomError("from_toric: wall relation failed");
    self_int[static_cast<std::size_t>(cur)] = -b;
  }

  // Intersection table of the invariant divisors.
  std::vector<std::vector<Rational>> table(static_cast<std::size_t>(r),
                                           std::vector<Rational>(static_cast<std::size_t>(r)));
  std::vector<int> pos_of(static_cast<std::size_t>(r));
  for (int idx = 0; idx < r; ++idx) pos_of[static_cast<std::size_t>(order[static_cast<std::size_t>(idx)])] = idx;
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      if (i == j) table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          self_int[static_cast<std::size_t>(i)];
      else {
        const int di = pos_of[static_cast<std::size_t>(i)], dj = pos_of[static_cast<std::size_t>(j)];
        const bool adjacent = (di + 1) % r == dj || (dj + 1) % r == di;
        table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            adjacent ? Rational(1) : Rational(0);
      }
    }
  }

  // Basis of the class lattice: drop the two rays of the first maximal cone
  // (their classes are expressed through the character relations).
  const int i0 = std::min(x.max_cones[0][0], x.max_cones[0][1]);
  const int j0 = std::max(x.max_cones[0][0], x.max_cones[0][1]);
  std::vector<int> basis_rays;
  for (int i = 0; i < r; ++i)
    if (i != i0 && i != j0) basis_rays.push_back(i);

  // Relations sum_k v_k[c] e_k = 0 for c = 0, 1 express e_{i0}, e_{j0}.
  QMatrix m2(2, 2);
  m2.at(0, 0) = Rational(x.rays[static_cast<std::size_t>(i0)][0]);
  m2.at(0, 1) = Rational(x.rays[static_cast<std::size_t>(j0)][0]);
  m2.at(1, 0) = Rational(x.rays[static_cast<std::size_t>(i0)][1]);
  m2.at(1, 1) = Rational(x.rays[static_cast<std::size_t>(j0)][1]);
  const QMatrix inv2 = *inverse(m2);

  std::vector<QVector> ray_classes(static_cast<std::size_t>(r), QVector(rho));
  for (int bi = 0; bi < rho; ++bi)
    ray_classes[static_cast<std::size_t>(basis_rays[static_cast<std::size_t>(bi)])] =
        QVector::unit(rho, bi);
  for (int which = 0; which < 2; ++which) {
    // e_{i0}, e_{j0} = -inv2 * (sum over basis rays of v_k e_k)
    QVector cls(rho);
    for (int bi = 0; bi < rho; ++bi) {
      const int k = basis_rays[static_cast<std::size_t>(bi)];
      const Rational vx(x.rays[static_cast<std::size_t>(k)][0]);
      const Rational vy(x.rays[static_cast<std::size_t>(k)][1]);
      cls[bi] = -(inv2.at(which, 0) * vx + inv2.at(which, 1) * vy);
    }
    ray_classes[static_cast<std::size_t>(which == 0 ? i0 : j0)] = cls;
  }

  // Intersection form on the basis classes.
  ToricSurfaceModel model;
  model.surface.rank = rho;
  model.surface.form = QMatrix(rho, rho);
  for (int a = 0; a < rho; ++a)
    for (int b = 0; b < rho; ++b)
      model.surface.form.at(a, b) =
          table[static_cast<std::size_t>(basis_rays[static_cast<std::size_t>(a)])]
               [static_cast<std::size_t>(basis_rays[static_cast<std::size_t>(b)])];

  model.ray_classes = ray_classes;
  for (int i = 0; i < r; ++i) {
    model.ray_curve_names.push_back("D" + std::to_string(i));
    model.surface.curves.push_back({"D" + std::to_string(i), ray_classes[static_cast<std::size_t>(i)]});
  }
  // Effective generators: the distinct ray classes.
  std::vector<QVector> gens;
  for (const auto& cls : ray_classes)
    if (std::find(gens.begin(), gens.end(), cls) == gens.end()) gens.push_back(cls);
  model.surface.effective_generators = gens;
  // Fibrations: nef ray divisors with self-intersection zero.
  std::vector<QVector> fibs;
  const auto ws = toric::walls(x);
  for (int i = 0; i < r; ++i) {
    if (!self_int[static_cast<std::size_t>(i)].is_zero()) continue;
    toric::DivisorQ di;
    di.coeffs.assign(static_cast<std::size_t>(r), Rational(0));
    di.coeffs[static_cast<std::size_t>(i)] = Rational(1);
    bool nef = true;
    for (const auto& w : ws)
      if (toric::wall_degree(x, di, w).sgn() < 0) { nef = false; break; }
    if (nef && std::find(fibs.begin(), fibs.end(), ray_classes[static_cast<std::size_t>(i)]) == fibs.end())
      fibs.push_back(ray_classes[static_cast<std::size_t>(i)]);
  }
  model.surface.fibrations = fibs;
  model.surface.abundant = true;
  return model;
}

SurfDivisor class_of(const ToricSurfaceModel& m, const toric::DivisorQ& d) {
  if (d.coeffs.size() != m.ray_classes.size())
    throw DimensionMismatch("class_of: wrong number of coefficients");
  SurfDivisor out(m.surface.rank);
  for (std::size_t i = 0; i < d.coeffs.size(); ++i) out += d.coeffs[i] * m.ray_classes[i];
  return out;
}

}  // namespace oklab::surface
