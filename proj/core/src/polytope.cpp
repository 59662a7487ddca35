#include "oklab/polytope.hpp"

#include <algorithm>
#include <cstdint>

#include "oklab/errors.hpp"

namespace oklab {

bool operator==(const Halfspace& a, const Halfspace& b) {
  return a.offset == b.offset && a.normal == b.normal;
}

Polytope make_polytope_unchecked(int ambient_dim, int affine_dim, std::vector<QVector> vertices,
                                 std::vector<Halfspace> facets, std::vector<Halfspace> equalities) {
  Polytope p;
  p.ambient_dim_ = ambient_dim;
  p.affine_dim_ = affine_dim;
  p.vertices_ = std::move(vertices);
  p.facets_ = std::move(facets);
  p.equalities_ = std::move(equalities);
  return p;
}

namespace {

// ---------------------------------------------------------------------------
// Double description over a pointed cone {y : <row, y> >= 0 for all rows}.
// ---------------------------------------------------------------------------

class Bits {
 public:
  explicit Bits(std::size_t n) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  static Bits intersect(const Bits& a, const Bits& b) {
    Bits r(a);
    for (std::size_t w = 0; w < r.words_.size(); ++w) r.words_[w] &= b.words_[w];
    return r;
  }
  bool contains(const Bits& sub) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if ((sub.words_[w] & ~words_[w]) != 0) return false;
    return true;
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct Ray {
  QVector dir;  // primitive integer vector
  Bits zero;    // tight rows among those processed so far
};

// Extreme rays of the cone cut out by `rows` in Q^k.  Requires rank(rows)=k,
// which makes the cone pointed; inequalities are inserted in input order.
std::vector<QVector> dd_extreme_rays(int k, const std::vector<QVector>& rows) {
  const std::size_t s = rows.size();
  // Initial simplicial subcone from the first k independent rows.
  std::vector<int> base;
  {
    std::vector<QVector> acc;
    for (std::size_t i = 0; i < s && static_cast<int>(base.size()) < k; ++i) {
      acc.push_back(rows[i]);
      if (rank(QMatrix::from_rows(acc)) == static_cast<int>(acc.size()))
        base.push_back(static_cast<int>(i));
      else
        acc.pop_back();
    }
  }
  if (static_cast<int>(base.size()) != k)
    throw GeomError("double description: cone is not pointed");

  QMatrix b(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) b.at(i, j) = rows[base[i]][j];
  const QMatrix binv = *inverse(b);

  std::vector<Ray> rays;
  for (int j = 0; j < k; ++j) {
    Ray r{primitive(binv.col(j)), Bits(s)};
    for (int i = 0; i < k; ++i)
      if (i != j) r.zero.set(static_cast<std::size_t>(base[i]));
    rays.push_back(std::move(r));
  }

  std::vector<bool> in_base(s, false);
  for (int i : base) in_base[static_cast<std::size_t>(i)] = true;

  for (std::size_t t = 0; t < s; ++t) {
    if (in_base[t]) continue;
    std::vector<Rational> d(rays.size());
    for (std::size_t i = 0; i < rays.size(); ++i) d[i] = dot(rows[t], rays[i].dir);

    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      if (d[i].sgn() > 0) pos.push_back(i);
      else if (d[i].sgn() < 0) neg.push_back(i);
    }
    if (neg.empty()) {
      for (std::size_t i = 0; i < rays.size(); ++i)
        if (d[i].is_zero()) rays[i].zero.set(t);
      continue;
    }

    std::vector<Ray> next;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      if (d[i].sgn() < 0) continue;
      Ray r = rays[i];
      if (d[i].is_zero()) r.zero.set(t);
      next.push_back(std::move(r));
    }
    for (std::size_t ip : pos) {
      for (std::size_t in : neg) {
        const Bits common = Bits::intersect(rays[ip].zero, rays[in].zero);
        bool adjacent = true;
        for (std::size_t o = 0; o < rays.size(); ++o) {
          if (o == ip || o == in) continue;
          if (rays[o].zero.contains(common)) { adjacent = false; break; }
        }
        if (!adjacent) continue;
        QVector dir = d[ip] * rays[in].dir - d[in] * rays[ip].dir;
        Ray r{primitive(dir), common};
        r.zero.set(t);
        next.push_back(std::move(r));
      }
    }
    rays = std::move(next);
  }

  std::vector<QVector> out;
  out.reserve(rays.size());
  for (auto& r : rays) out.push_back(std::move(r.dir));
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

// ---------------------------------------------------------------------------
// Affine charts
// ---------------------------------------------------------------------------

struct AffineChart {
  QVector y0;                          // base point in Q^d
  QMatrix basis;                       // d x r, columns span the directions
  QMatrix to_chart;                    // r x d, lambda = to_chart (y - y0)
  std::vector<Halfspace> equalities;   // affine hull cut out in Q^d
  int r = 0;
};

Halfspace canonical_equality(const QVector& normal, const QVector& y0) {
  QVector n = primitive(normal);
  for (int i = 0; i < n.dim(); ++i) {
    if (n[i].is_zero()) continue;
    if (n[i].sgn() < 0) n = -n;
    break;
  }
  Rational off = dot(n, y0);
  return Halfspace(std::move(n), std::move(off));
}

AffineChart make_chart(const QVector& y0, const std::vector<QVector>& directions, int d) {
  AffineChart ch;
  ch.y0 = y0;
  std::vector<QVector> basis_dirs;
  for (const auto& dir : directions) {
    if (dir.is_zero()) continue;
    basis_dirs.push_back(dir);
    if (rank(QMatrix::from_rows(basis_dirs)) != static_cast<int>(basis_dirs.size()))
      basis_dirs.pop_back();
  }
  ch.r = static_cast<int>(basis_dirs.size());
  ch.basis = QMatrix(d, ch.r);
  for (int j = 0; j < ch.r; ++j)
    for (int i = 0; i < d; ++i) ch.basis.at(i, j) = basis_dirs[j][i];

  if (ch.r > 0) {
    const QMatrix bt = ch.basis.transpose();
    const QMatrix gram = matmul(bt, ch.basis);
    ch.to_chart = matmul(*inverse(gram), bt);
  } else {
    ch.to_chart = QMatrix(0, d);
  }

  std::vector<Halfspace> eqs;
  for (const auto& n : nullspace(ch.basis.transpose()))
    eqs.push_back(canonical_equality(n, y0));
  std::sort(eqs.begin(), eqs.end(), [](const Halfspace& a, const Halfspace& b) {
    if (a.normal != b.normal) return lex_less(a.normal, b.normal);
    return a.offset < b.offset;
  });
  ch.equalities = std::move(eqs);
  return ch;
}

QVector chart_coords(const AffineChart& ch, const QVector& y) {
  return ch.to_chart.apply(y - ch.y0);
}

QVector chart_point(const AffineChart& ch, const QVector& lambda) {
  return ch.y0 + ch.basis.apply(lambda);
}

Halfspace sort_key_normalize(const Halfspace& h) {
  const QVector n = primitive(h.normal);
  // primitive() preserves direction; rescale offset by the same factor
  int i = 0;
  while (h.normal[i].is_zero()) ++i;
  const Rational factor = n[i] / h.normal[i];
  return Halfspace(n, h.offset * factor);
}

bool halfspace_less(const Halfspace& a, const Halfspace& b) {
  if (a.normal != b.normal) return lex_less(a.normal, b.normal);
  return a.offset < b.offset;
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

Polytope Polytope::empty(int ambient_dim) {
  return make_polytope_unchecked(ambient_dim, -1, {}, {}, {});
}

Polytope Polytope::hull(int ambient_dim, const std::vector<QVector>& points) {
  for (const auto& p : points)
    if (p.dim() != ambient_dim) throw DimensionMismatch("hull: point dimension");

  std::vector<QVector> pts = points;
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.empty()) return empty(ambient_dim);

  std::vector<QVector> diffs;
  diffs.reserve(pts.size());
  for (std::size_t i = 1; i < pts.size(); ++i) diffs.push_back(pts[i] - pts[0]);
  AffineChart ch = make_chart(pts[0], diffs, ambient_dim);

  if (ch.r == 0)
    return make_polytope_unchecked(ambient_dim, 0, {pts[0]}, {}, ch.equalities);

  std::vector<QVector> q;
  q.reserve(pts.size());
  for (const auto& p : pts) q.push_back(chart_coords(ch, p));

  // Facets of conv(q) are the extreme rays of the dual cone
  // {(c0, c) : c0 + <c, q_i> >= 0}.
  std::vector<QVector> dual_rows;
  dual_rows.reserve(q.size());
  for (const auto& qi : q) {
    QVector row(ch.r + 1);
    row[0] = Rational(1);
    for (int j = 0; j < ch.r; ++j) row[j + 1] = qi[j];
    dual_rows.push_back(std::move(row));
  }
  const std::vector<QVector> facet_rays = dd_extreme_rays(ch.r + 1, dual_rows);

  struct ChartFacet { Rational c0; QVector c; };
  std::vector<ChartFacet> chart_facets;
  for (const auto& ray : facet_rays) {
    QVector c(ch.r);
    for (int j = 0; j < ch.r; ++j) c[j] = ray[j + 1];
    chart_facets.push_back({ray[0], std::move(c)});
  }

  // A point is a vertex iff its tight facet normals span the chart.
  std::vector<QVector> vertices;
  for (std::size_t i = 0; i < q.size(); ++i) {
    std::vector<QVector> tight;
    for (const auto& f : chart_facets)
      if ((f.c0 + dot(f.c, q[i])).is_zero()) tight.push_back(f.c);
    if (static_cast<int>(tight.size()) >= ch.r &&
        rank(QMatrix::from_rows(tight)) == ch.r)
      vertices.push_back(pts[i]);
  }

  const QMatrix lt = ch.to_chart.transpose();
  std::vector<Halfspace> facets;
  for (const auto& f : chart_facets) {
    QVector normal = lt.apply(f.c);
    Rational offset = dot(normal, ch.y0) - f.c0;
    facets.push_back(sort_key_normalize(Halfspace(std::move(normal), std::move(offset))));
  }
  std::sort(facets.begin(), facets.end(), halfspace_less);

  return make_polytope_unchecked(ambient_dim, ch.r, std::move(vertices), std::move(facets),
                                 ch.equalities);
}

Polytope Polytope::from_halfspaces(int ambient_dim, const std::vector<Halfspace>& halfspaces) {
  for (const auto& h : halfspaces) {
    if (h.normal.dim() != ambient_dim) throw DimensionMismatch("from_halfspaces: normal dimension");
    if (h.normal.is_zero()) throw GeomError("halfspace with zero normal");
  }

  LpBuilder feas(ambient_dim);
  for (const auto& h : halfspaces) feas.add_ge(h.normal, h.offset);
  if (lp_solve(QVector::zero(ambient_dim), LpSense::Minimize, feas).status ==
      LpStatus::Infeasible)
    return empty(ambient_dim);

  // An inequality is an implicit equality when its maximum over the feasible
  // set equals its offset.
  std::vector<QVector> eq_normals;
  std::vector<Rational> eq_offsets;
  std::vector<std::size_t> strict;
  for (std::size_t i = 0; i < halfspaces.size(); ++i) {
    const LpSolution s = lp_solve(halfspaces[i].normal, LpSense::Maximize, feas);
    if (s.status == LpStatus::Optimal && s.value == halfspaces[i].offset) {
      eq_normals.push_back(halfspaces[i].normal);
      eq_offsets.push_back(halfspaces[i].offset);
    } else {
      strict.push_back(i);
    }
  }

  QVector y0(ambient_dim);
  QMatrix basis_dirs_stub;
  if (!eq_normals.empty()) {
    const QMatrix e = QMatrix::from_rows(eq_normals);
    QVector rhs(static_cast<int>(eq_offsets.size()));
    for (int i = 0; i < rhs.dim(); ++i) rhs[i] = eq_offsets[i];
    y0 = *solve_linear(e, rhs);
  }
  std::vector<QVector> dirs;
  if (eq_normals.empty()) {
    for (int i = 0; i < ambient_dim; ++i) dirs.push_back(QVector::unit(ambient_dim, i));
  } else {
    dirs = nullspace(QMatrix::from_rows(eq_normals));
  }
  AffineChart ch = make_chart(y0, dirs, ambient_dim);

  if (ch.r == 0) return hull(ambient_dim, {y0});

  struct ChartRow { QVector a; Rational b; };
  std::vector<ChartRow> chart_rows;
  std::vector<QVector> chart_normals;
  const QMatrix bt = ch.basis.transpose();
  for (std::size_t i : strict) {
    QVector a = bt.apply(halfspaces[i].normal);
    Rational b = halfspaces[i].offset - dot(halfspaces[i].normal, ch.y0);
    if (a.is_zero()) continue;  // constant on the hull, satisfied strictly
    chart_normals.push_back(a);
    chart_rows.push_back({std::move(a), std::move(b)});
  }
  if (chart_normals.empty() || rank(QMatrix::from_rows(chart_normals)) < ch.r)
    throw UnboundedError("from_halfspaces: unbounded polyhedron");

  std::vector<QVector> cone_rows;
  {
    QVector trow(ch.r + 1);
    trow[0] = Rational(1);
    cone_rows.push_back(std::move(trow));
  }
  for (const auto& cr : chart_rows) {
    QVector row(ch.r + 1);
    row[0] = -cr.b;
    for (int j = 0; j < ch.r; ++j) row[j + 1] = cr.a[j];
    cone_rows.push_back(std::move(row));
  }

  std::vector<QVector> rays = dd_extreme_rays(ch.r + 1, cone_rows);
  std::vector<QVector> verts;
  for (const auto& ray : rays) {
    if (ray[0].is_zero()) throw UnboundedError("from_halfspaces: unbounded polyhedron");
    QVector lambda(ch.r);
    const Rational inv = Rational(1) / ray[0];
    for (int j = 0; j < ch.r; ++j) lambda[j] = ray[j + 1] * inv;
    verts.push_back(chart_point(ch, lambda));
  }
  return hull(ambient_dim, verts);
}

std::vector<Halfspace> Polytope::halfspaces() const {
  std::vector<Halfspace> out = facets_;
  for (const auto& e : equalities_) {
    out.push_back(e);
    out.emplace_back(-e.normal, -e.offset);
  }
  return out;
}

bool Polytope::contains_point(const QVector& p) const {
  if (p.dim() != ambient_dim_) throw DimensionMismatch("contains_point");
  if (is_empty()) return false;
  for (const auto& e : equalities_)
    if (dot(e.normal, p) != e.offset) return false;
  for (const auto& f : facets_)
    if (dot(f.normal, p) < f.offset) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

Polytope convert(const Polytope& p) {
  if (p.is_empty()) return p;
  return Polytope::from_halfspaces(p.ambient_dim(), p.halfspaces());
}

namespace {

// Pulling triangulation: recursively cone the lex-least vertex over the
// facets that do not contain it.  Returns (k+1)-tuples of vertices where k is
// the affine dimension.
void triangulate(const Polytope& p, std::vector<std::vector<QVector>>* out) {
  const auto& v = p.vertices();
  const int k = p.affine_dim();
  if (static_cast<int>(v.size()) == k + 1) {
    out->push_back(v);
    return;
  }
  const QVector& apex = v[0];
  for (const auto& f : p.facets()) {
    if (dot(f.normal, apex) == f.offset) continue;
    std::vector<QVector> tight;
    for (const auto& w : v)
      if (dot(f.normal, w) == f.offset) tight.push_back(w);
    std::vector<std::vector<QVector>> sub;
    triangulate(Polytope::hull(p.ambient_dim(), tight), &sub);
    for (auto& s : sub) {
      s.insert(s.begin(), apex);
      out->push_back(std::move(s));
    }
  }
}

Rational simplex_volume(const std::vector<QVector>& s) {
  const int r = static_cast<int>(s.size()) - 1;
  QMatrix m(r, r);
  for (int i = 0; i < r; ++i) {
    const QVector d = s[i + 1] - s[0];
    for (int j = 0; j < r; ++j) m.at(i, j) = d[j];
  }
  Rational factorial(1);
  for (int i = 2; i <= r; ++i) factorial *= Rational(i);
  return det(std::move(m)).abs() / factorial;
}

}  // namespace

Rational volume(const Polytope& p, const std::vector<int>& coords) {
  std::vector<int> cs = coords;
  std::sort(cs.begin(), cs.end());
  if (std::unique(cs.begin(), cs.end()) != cs.end())
    throw GeomError("volume: repeated coordinate");
  for (int c : cs)
    if (c < 0 || c >= p.ambient_dim()) throw DimensionMismatch("volume: coordinate out of range");
  if (p.is_empty()) return Rational(0);

  std::vector<bool> keep(static_cast<std::size_t>(p.ambient_dim()), false);
  for (int c : cs) keep[static_cast<std::size_t>(c)] = true;
  for (const auto& v : p.vertices())
    for (int i = 0; i < p.ambient_dim(); ++i)
      if (!keep[static_cast<std::size_t>(i)] && !v[i].is_zero())
        throw GeomError("volume: not coordinate-flat");

  const int r = static_cast<int>(cs.size());
  if (p.affine_dim() < r) return Rational(0);

  std::vector<QVector> projected;
  projected.reserve(p.vertices().size());
  for (const auto& v : p.vertices()) {
    QVector q(r);
    for (int j = 0; j < r; ++j) q[j] = v[cs[static_cast<std::size_t>(j)]];
    projected.push_back(std::move(q));
  }
  const Polytope flat = Polytope::hull(r, projected);
  if (flat.affine_dim() < r) return Rational(0);

  std::vector<std::vector<QVector>> simplices;
  triangulate(flat, &simplices);
  Rational total;
  for (const auto& s : simplices) total += simplex_volume(s);
  return total;
}

Rational volume_full(const Polytope& p) {
  std::vector<int> all(static_cast<std::size_t>(p.ambient_dim()));
  for (int i = 0; i < p.ambient_dim(); ++i) all[static_cast<std::size_t>(i)] = i;
  return volume(p, all);
}

std::vector<std::vector<long long>> lattice_points(const Polytope& p) {
  std::vector<std::vector<long long>> out;
  if (p.is_empty()) return out;
  const int d = p.ambient_dim();
  std::vector<long long> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    Rational mn = p.vertices()[0][i], mx = mn;
    for (const auto& v : p.vertices()) {
      mn = min(mn, v[i]);
      mx = max(mx, v[i]);
    }
    const mpz_class l = mn.ceil_z(), h = mx.floor_z();
    if (l > h) return out;
    if (!l.fits_slong_p() || !h.fits_slong_p())
      throw GeomError("lattice_points: bounding box too large");
    lo[static_cast<std::size_t>(i)] = l.get_si();
    hi[static_cast<std::size_t>(i)] = h.get_si();
  }
  std::vector<long long> cur(static_cast<std::size_t>(d));
  QVector probe(d);
  auto scan = [&](auto&& self, int i) -> void {
    if (i == d) {
      if (p.contains_point(probe)) out.push_back(cur);
      return;
    }
    for (long long x = lo[static_cast<std::size_t>(i)]; x <= hi[static_cast<std::size_t>(i)]; ++x) {
      cur[static_cast<std::size_t>(i)] = x;
      probe[i] = Rational(x);
      self(self, i + 1);
    }
  };
  scan(scan, 0);
  return out;
}

PolytopeOpt lp_optimize(const QVector& objective, const Polytope& p, LpSense sense) {
  if (objective.dim() != p.ambient_dim()) throw DimensionMismatch("lp_optimize objective");
  if (p.is_empty()) throw InfeasibleError("lp_optimize: empty polytope");
  LpBuilder lp(p.ambient_dim());
  for (const auto& f : p.facets()) lp.add_ge(f.normal, f.offset);
  for (const auto& e : p.equalities()) lp.add_eq(e.normal, e.offset);
  const LpOptimum opt = lp_lex_optimum(objective, sense, lp);
  return PolytopeOpt{opt.value, opt.point};
}

Polytope slice(const Polytope& p, int k) {
  if (k < 0 || k > p.ambient_dim()) throw DimensionMismatch("slice: bad k");
  if (p.is_empty()) return p;
  std::vector<Halfspace> hs = p.halfspaces();
  for (int i = 0; i < p.ambient_dim() - k; ++i) {
    hs.emplace_back(QVector::unit(p.ambient_dim(), i), Rational(0));
    hs.emplace_back(-QVector::unit(p.ambient_dim(), i), Rational(0));
  }
  return Polytope::from_halfspaces(p.ambient_dim(), hs);
}

Polytope affine_image(const Polytope& p, const QMatrix& m, const QVector& t) {
  if (m.cols() != p.ambient_dim() || t.dim() != m.rows())
    throw DimensionMismatch("affine_image");
  if (p.is_empty()) return Polytope::empty(m.rows());
  std::vector<QVector> pts;
  pts.reserve(p.vertices().size());
  for (const auto& v : p.vertices()) pts.push_back(m.apply(v) + t);
  return Polytope::hull(m.rows(), pts);
}

Polytope minkowski_sum(const Polytope& p, const Polytope& q) {
  if (p.ambient_dim() != q.ambient_dim()) throw DimensionMismatch("minkowski_sum");
  if (p.is_empty() || q.is_empty()) return Polytope::empty(p.ambient_dim());
  std::vector<QVector> pts;
  pts.reserve(p.vertices().size() * q.vertices().size());
  for (const auto& a : p.vertices())
    for (const auto& b : q.vertices()) pts.push_back(a + b);
  return Polytope::hull(p.ambient_dim(), pts);
}

Polytope intersect(const Polytope& p, const Polytope& q) {
  if (p.ambient_dim() != q.ambient_dim()) throw DimensionMismatch("intersect");
  if (p.is_empty() || q.is_empty()) return Polytope::empty(p.ambient_dim());
  std::vector<Halfspace> hs = p.halfspaces();
  for (auto& h : q.halfspaces()) hs.push_back(h);
  return Polytope::from_halfspaces(p.ambient_dim(), hs);
}

Polytope scale(const Polytope& p, const Rational& factor) {
  QMatrix m = QMatrix::identity(p.ambient_dim());
  for (int i = 0; i < p.ambient_dim(); ++i) m.at(i, i) = factor;
  return affine_image(p, m, QVector::zero(p.ambient_dim()));
}

Polytope translate(const Polytope& p, const QVector& t) {
  return affine_image(p, QMatrix::identity(p.ambient_dim()), t);
}

Polytope project_coords(const Polytope& p, const std::vector<int>& coords) {
  QMatrix m(static_cast<int>(coords.size()), p.ambient_dim());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] < 0 || coords[i] >= p.ambient_dim())
      throw DimensionMismatch("project_coords");
    m.at(static_cast<int>(i), coords[i]) = Rational(1);
  }
  return affine_image(p, m, QVector::zero(static_cast<int>(coords.size())));
}

bool contains(const Polytope& outer, const Polytope& inner) {
  if (outer.ambient_dim() != inner.ambient_dim()) throw DimensionMismatch("contains");
  if (inner.is_empty()) return true;
  if (outer.is_empty()) return false;
  for (const auto& v : inner.vertices())
    if (!outer.contains_point(v)) return false;
  return true;
}

bool equals(const Polytope& p, const Polytope& q) {
  return contains(p, q) && contains(q, p);
}

Rational relative_volume_ratio(const Polytope& inner, const Polytope& outer) {
  if (outer.is_empty()) throw GeomError("relative_volume_ratio: empty reference");
  if (inner.is_empty()) return Rational(0);
  if (inner.ambient_dim() != outer.ambient_dim())
    throw DimensionMismatch("relative_volume_ratio");
  for (const auto& v : inner.vertices())
    for (const auto& e : outer.equalities())
      if (dot(e.normal, v) != e.offset)
        throw GeomError("relative_volume_ratio: not in the reference affine hull");

  const int k = outer.affine_dim();
  if (k == 0) return Rational(1);  // inner is the same single point

  // Pick k coordinates on which the affine hull of `outer` projects
  // injectively; the volume distortion cancels in the ratio.
  std::vector<QVector> dirs;
  for (std::size_t i = 1; i < outer.vertices().size(); ++i)
    dirs.push_back(outer.vertices()[i] - outer.vertices()[0]);
  std::vector<int> coords;
  std::vector<QVector> picked;
  for (int c = 0; c < outer.ambient_dim() && static_cast<int>(coords.size()) < k; ++c) {
    QVector comp(static_cast<int>(dirs.size()));
    for (std::size_t i = 0; i < dirs.size(); ++i) comp[static_cast<int>(i)] = dirs[i][c];
    picked.push_back(comp);
    if (rank(QMatrix::from_rows(picked)) == static_cast<int>(picked.size()))
      coords.push_back(c);
    else
      picked.pop_back();
  }

  const Polytope po = project_coords(outer, coords);
  const Polytope pi = project_coords(inner, coords);
  const Rational vo = volume_full(po);
  if (vo.is_zero()) throw GeomError("relative_volume_ratio: degenerate reference");
  return volume_full(pi) / vo;
}

}  // namespace oklab
