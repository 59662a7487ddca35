#include <doctest.h>

#include <algorithm>

#include "oklab/polytope.hpp"
#include "oklab/rng.hpp"

using namespace oklab;

namespace {

QVector qv(std::initializer_list<long long> xs) {
  std::vector<Rational> e;
  for (long long x : xs) e.emplace_back(x);
  return QVector(std::move(e));
}

Polytope unit_square() {
  return Polytope::hull(2, {qv({0, 0}), qv({1, 0}), qv({0, 1}), qv({1, 1})});
}

Polytope unit_simplex2() {
  return Polytope::hull(2, {qv({0, 0}), qv({1, 0}), qv({0, 1})});
}

Polytope random_lattice_polytope(Rng& rng, int dim, int npts, long long box) {
  std::vector<QVector> pts;
  for (int i = 0; i < npts; ++i) {
    QVector p(dim);
    for (int j = 0; j < dim; ++j) p[j] = Rational(rng.int_in(-box, box));
    pts.push_back(std::move(p));
  }
  return Polytope::hull(dim, pts);
}

}  // namespace

TEST_CASE("hull absorbs interior points") {
  const Polytope p = Polytope::hull(
      2, {qv({0, 0}), qv({1, 0}), qv({0, 1}), QVector{Rational(1, 4), Rational(1, 4)}});
  CHECK(p.affine_dim() == 2);
  CHECK(p.vertices().size() == 3);
  CHECK(equals(p, unit_simplex2()));
}

TEST_CASE("hull of a single point") {
  const Polytope p = Polytope::hull(2, {qv({2, 3})});
  CHECK(p.affine_dim() == 0);
  CHECK(p.vertices().size() == 1);
  CHECK(p.facets().empty());
  CHECK(p.equalities().size() == 2);
  CHECK(p.contains_point(qv({2, 3})));
  CHECK_FALSE(p.contains_point(qv({2, 4})));
}

TEST_CASE("hull of dilated simplex lattice points rescales to the simplex") {
  // Oracle: direct enumeration of the lattice points of 3 * simplex.
  std::vector<QVector> pts;
  for (long long i = 0; i <= 3; ++i)
    for (long long j = 0; i + j <= 3; ++j)
      pts.push_back(QVector{Rational(i, 3), Rational(j, 3)});
  CHECK(pts.size() == 10);
  CHECK(equals(Polytope::hull(2, pts), unit_simplex2()));
}

TEST_CASE("hull of empty input") {
  const Polytope p = Polytope::hull(3, {});
  CHECK(p.is_empty());
  CHECK(p.affine_dim() == -1);
  CHECK(p.vertices().empty());
}

TEST_CASE("from_halfspaces simplex") {
  const Polytope p = Polytope::from_halfspaces(
      2, {Halfspace(qv({1, 0}), Rational(0)), Halfspace(qv({0, 1}), Rational(0)),
          Halfspace(qv({-1, -1}), Rational(-1))});
  CHECK(p.affine_dim() == 2);
  CHECK(equals(p, unit_simplex2()));
  CHECK(p.vertices().size() == 3);
}

TEST_CASE("square facets") {
  const Polytope p = unit_square();
  CHECK(p.facets().size() == 4);
  CHECK(p.equalities().empty());
  CHECK(equals(convert(p), p));
}

TEST_CASE("contradictory halfspaces give the empty polytope") {
  const Polytope p = Polytope::from_halfspaces(
      1, {Halfspace(qv({1}), Rational(1)), Halfspace(qv({-1}), Rational(0))});
  CHECK(p.is_empty());
}

TEST_CASE("unbounded systems are rejected") {
  CHECK_THROWS_AS(Polytope::from_halfspaces(2, {Halfspace(qv({1, 0}), Rational(0))}),
                  UnboundedError);
  // Contains a line.
  CHECK_THROWS_AS(Polytope::from_halfspaces(
                      2, {Halfspace(qv({1, 0}), Rational(0)),
                          Halfspace(qv({-1, 0}), Rational(-1))}),
                  UnboundedError);
  CHECK_THROWS_AS(Polytope::from_halfspaces(1, {Halfspace(qv({0}), Rational(0))}), GeomError);
}

TEST_CASE("lower dimensional polytopes keep equalities") {
  const Polytope seg = Polytope::hull(3, {qv({0, 1, 2}), qv({0, 3, 2})});
  CHECK(seg.affine_dim() == 1);
  CHECK(seg.equalities().size() == 2);
  CHECK(seg.facets().size() == 2);
  CHECK(seg.contains_point(qv({0, 2, 2})));
  CHECK_FALSE(seg.contains_point(qv({0, 2, 1})));
  CHECK(equals(convert(seg), seg));
}

TEST_CASE("implicit equalities are detected") {
  // x >= 0, y >= 0, x + y <= 0 forces the origin.
  const Polytope p = Polytope::from_halfspaces(
      2, {Halfspace(qv({1, 0}), Rational(0)), Halfspace(qv({0, 1}), Rational(0)),
          Halfspace(qv({-1, -1}), Rational(0))});
  CHECK(p.affine_dim() == 0);
  CHECK(p.vertices().size() == 1);
  CHECK(p.vertices()[0] == qv({0, 0}));
}

TEST_CASE("volume basics") {
  CHECK(volume(unit_square(), {0, 1}) == Rational(1));
  CHECK(volume(Polytope::hull(2, {qv({0, 0}), qv({1, 0}), qv({0, 2})}), {0, 1}) == Rational(1));
  CHECK(volume(Polytope::hull(2, {qv({0, 0}), qv({1, 0}), qv({1, 1})}), {0, 1}) ==
        Rational(1, 2));
  // Degenerate: affine dim below the requested dimension.
  CHECK(volume(Polytope::hull(2, {qv({0, 0}), qv({1, 0})}), {0, 1}) == Rational(0));
  CHECK(volume(Polytope::empty(2), {0, 1}) == Rational(0));
  // Segment length measured in its own coordinate.
  CHECK(volume(Polytope::hull(2, {qv({0, 2}), qv({0, 5})}), {1}) == Rational(3));
  CHECK_THROWS_WITH_AS(volume(unit_square(), {0}), "volume: not coordinate-flat", GeomError);
}

TEST_CASE("volume of a 3d cross-polytope") {
  std::vector<QVector> pts;
  for (int i = 0; i < 3; ++i) {
    pts.push_back(QVector::unit(3, i));
    pts.push_back(-QVector::unit(3, i));
  }
  CHECK(volume_full(Polytope::hull(3, pts)) == Rational(4, 3));
}

TEST_CASE("volume is translation invariant and scales by lambda^d") {
  Rng rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    const int dim = 2 + static_cast<int>(rng.below(2));
    const Polytope p = random_lattice_polytope(rng, dim, dim + 3, 3);
    if (p.affine_dim() < dim) continue;
    const Rational v = volume_full(p);
    QVector t(dim);
    for (int j = 0; j < dim; ++j) t[j] = Rational(rng.int_in(-5, 5), 1 + rng.int_in(0, 2));
    CHECK(volume_full(translate(p, t)) == v);
    const Rational lambda(1 + rng.int_in(0, 4), 1 + rng.int_in(0, 2));
    Rational factor(1);
    for (int j = 0; j < dim; ++j) factor *= lambda;
    CHECK(volume_full(scale(p, lambda)) == factor * v);
  }
}

TEST_CASE("lattice point counts") {
  CHECK(lattice_points(scale(unit_simplex2(), Rational(2))).size() == 6);
  CHECK(lattice_points(Polytope::empty(2)).empty());
  const auto seg = lattice_points(Polytope::hull(2, {qv({0, 0}), qv({3, 0})}));
  REQUIRE(seg.size() == 4);
  CHECK(seg[0] == std::vector<long long>{0, 0});
  CHECK(seg[3] == std::vector<long long>{3, 0});
}

TEST_CASE("lattice points in lex order and dilation self-oracle") {
  Rng rng(23);
  for (int trial = 0; trial < 8; ++trial) {
    const Polytope p = random_lattice_polytope(rng, 2, 5, 2);
    for (int m = 1; m <= 5; ++m) {
      const Polytope mp = scale(p, Rational(m));
      const auto pts = lattice_points(mp);
      CHECK(std::is_sorted(pts.begin(), pts.end()));
      // Independent membership oracle: barycentric LP feasibility.
      long long count = 0;
      std::vector<long long> lo(2, 0), hi(2, 0);
      for (const auto& v : mp.vertices())
        for (int i = 0; i < 2; ++i) {
          lo[i] = std::min(lo[i], static_cast<long long>(v[i].floor_z().get_si()));
          hi[i] = std::max(hi[i], static_cast<long long>(v[i].ceil_z().get_si()));
        }
      const int nv = static_cast<int>(mp.vertices().size());
      for (long long x = lo[0]; x <= hi[0]; ++x)
        for (long long y = lo[1]; y <= hi[1]; ++y) {
          LpBuilder lp(nv);
          QVector ones(nv);
          for (int i = 0; i < nv; ++i) {
            lp.add_ge(QVector::unit(nv, i), Rational(0));
            ones[i] = Rational(1);
          }
          lp.add_eq(ones, Rational(1));
          for (int c = 0; c < 2; ++c) {
            QVector row(nv);
            for (int i = 0; i < nv; ++i) row[i] = mp.vertices()[i][c];
            lp.add_eq(row, c == 0 ? Rational(x) : Rational(y));
          }
          if (lp_solve(QVector::zero(nv), LpSense::Minimize, lp).status == LpStatus::Optimal)
            ++count;
        }
      CHECK(count == static_cast<long long>(pts.size()));
    }
  }
}

TEST_CASE("lp_optimize spec cases") {
  const auto sq = lp_optimize(qv({1, 0}), unit_square(), LpSense::Minimize);
  CHECK(sq.value == Rational(0));
  CHECK(sq.witness == qv({0, 0}));

  const Polytope tri = Polytope::hull(2, {qv({1, 0}), qv({0, 1}), qv({1, 1})});
  const auto t = lp_optimize(qv({1, 1}), tri, LpSense::Minimize);
  CHECK(t.value == Rational(1));
  CHECK(t.witness == qv({0, 1}));  // lex-least of the two optimal vertices

  const Polytope half = Polytope::hull(2, {qv({0, 0}), qv({1, 0}), qv({1, 1})});
  const auto m = lp_optimize(qv({0, 1}), half, LpSense::Maximize);
  CHECK(m.value == Rational(1));
  CHECK(m.witness == qv({1, 1}));

  CHECK_THROWS_AS(lp_optimize(qv({1, 0}), Polytope::empty(2), LpSense::Minimize),
                  InfeasibleError);
}

TEST_CASE("lp_optimize equals vertex scan on random polytopes") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + static_cast<int>(rng.below(3));
    const Polytope p = random_lattice_polytope(rng, dim, dim + 4, 4);
    QVector obj(dim);
    for (int j = 0; j < dim; ++j) obj[j] = Rational(rng.int_in(-4, 4));
    const auto opt = lp_optimize(obj, p, LpSense::Minimize);
    Rational best = dot(obj, p.vertices()[0]);
    for (const auto& v : p.vertices()) best = min(best, dot(obj, v));
    CHECK(opt.value == best);
    CHECK(p.contains_point(opt.witness));
    CHECK(dot(obj, opt.witness) == best);
  }
}

TEST_CASE("slice") {
  const Polytope s1 = slice(unit_simplex2(), 1);
  CHECK(equals(s1, Polytope::hull(2, {qv({0, 0}), qv({0, 1})})));

  CHECK(slice(Polytope::hull(2, {qv({1, 0}), qv({2, 0}), qv({2, 1})}), 1).is_empty());

  const Polytope pt = Polytope::hull(2, {qv({0, 3})});
  CHECK(equals(slice(pt, 1), pt));

  // slice(p, k) is contained in p and idempotent.
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const Polytope p = random_lattice_polytope(rng, 3, 6, 3);
    for (int k = 0; k <= 3; ++k) {
      const Polytope s = slice(p, k);
      CHECK(contains(p, s));
      CHECK(equals(slice(s, k), s));
    }
  }
}

TEST_CASE("affine_image translate") {
  QMatrix id = QMatrix::identity(2);
  const Polytope img = affine_image(unit_simplex2(), id, qv({1, 0}));
  CHECK(equals(img, Polytope::hull(2, {qv({1, 0}), qv({2, 0}), qv({1, 1})})));
  CHECK_THROWS_AS(affine_image(unit_simplex2(), QMatrix::identity(3), qv({0, 0, 0})),
                  DimensionMismatch);
}

TEST_CASE("minkowski sum of segments") {
  const Polytope a = Polytope::hull(2, {qv({0, 0}), qv({1, 0})});
  const Polytope b = Polytope::hull(2, {qv({0, 0}), qv({0, 1})});
  CHECK(equals(minkowski_sum(a, b), unit_square()));
  CHECK(minkowski_sum(a, Polytope::empty(2)).is_empty());
}

TEST_CASE("equals is set equality across representations") {
  const Polytope p = unit_simplex2();
  const Polytope rebuilt = Polytope::from_halfspaces(2, p.halfspaces());
  CHECK(equals(p, rebuilt));
  CHECK(equals(Polytope::empty(2), Polytope::empty(2)));
  CHECK_FALSE(equals(Polytope::empty(2), p));
}

TEST_CASE("convert round trip is the identity on 100 random polytopes") {
  Rng rng(1234);
  int done = 0;
  while (done < 100) {
    const int dim = 2 + static_cast<int>(rng.below(3));
    const int npts = dim + 1 + static_cast<int>(rng.below(5));
    const Polytope p = random_lattice_polytope(rng, dim, npts, 4);
    if (p.is_empty()) continue;
    const Polytope rt = convert(convert(p));
    CHECK(equals(rt, p));
    CHECK(rt.vertices().size() == p.vertices().size());
    ++done;
  }
}

TEST_CASE("intersect") {
  const Polytope shifted = translate(unit_square(), QVector{Rational(1, 2), Rational(0)});
  const Polytope overlap = intersect(unit_square(), shifted);
  CHECK(volume_full(overlap) == Rational(1, 2));
  const Polytope far = translate(unit_square(), qv({5, 5}));
  CHECK(intersect(unit_square(), far).is_empty());
}

TEST_CASE("project_coords") {
  const Polytope tri3 = Polytope::hull(3, {qv({0, 0, 1}), qv({1, 0, 1}), qv({0, 1, 1})});
  const Polytope proj = project_coords(tri3, {0, 1});
  CHECK(equals(proj, unit_simplex2()));
}

TEST_CASE("relative volume ratio") {
  CHECK(relative_volume_ratio(unit_simplex2(), unit_square()) == Rational(1, 2));
  // Degenerate reference handled in its own affine hull.
  const Polytope seg = Polytope::hull(2, {qv({0, 0}), qv({0, 4})});
  const Polytope sub = Polytope::hull(2, {qv({0, 1}), qv({0, 2})});
  CHECK(relative_volume_ratio(sub, seg) == Rational(1, 4));
  const Polytope pt = Polytope::hull(2, {qv({1, 1})});
  CHECK(relative_volume_ratio(pt, pt) == Rational(1));
  CHECK(relative_volume_ratio(Polytope::empty(2), seg) == Rational(0));
}

TEST_CASE("halfspaces accessor covers equalities") {
  const Polytope seg = Polytope::hull(2, {qv({0, 0}), qv({0, 1})});
  CHECK(seg.halfspaces().size() == 4);  // two endpoints + equality pair
  const Polytope rebuilt = Polytope::from_halfspaces(2, seg.halfspaces());
  CHECK(equals(rebuilt, seg));
}
