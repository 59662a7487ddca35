#include <doctest.h>

#include <algorithm>

#include "oklab/rng.hpp"
#include "oklab/toric.hpp"

using namespace oklab;
using namespace oklab::toric;

namespace {

QVector qv(std::initializer_list<long long> xs) {
  std::vector<Rational> e;
  for (long long x : xs) e.emplace_back(x);
  return QVector(std::move(e));
}

DivisorQ dv(std::initializer_list<long long> xs) {
  DivisorQ d;
  for (long long x : xs) d.coeffs.emplace_back(x);
  return d;
}

Polytope unit_simplex2() {
  return Polytope::hull(2, {qv({0, 0}), qv({1, 0}), qv({0, 1})});
}

DivisorQ random_effective(Rng& rng, const ToricVariety& x) {
  for (;;) {
    DivisorQ d;
    for (int i = 0; i < x.num_rays(); ++i)
      d.coeffs.emplace_back(rng.int_in(-2, 4), 1 + rng.int_in(0, 1));
    if (!section_polytope(x, d).is_empty()) return d;
  }
}

}  // namespace

TEST_CASE("standard fans validate") {
  for (const auto& x : {projective_space(2), projective_space(3), product_p1_p1(),
                        hirzebruch(1), hirzebruch(2)}) {
    const auto v = validate(x);
    CHECK(v.ok());
    CHECK(v.smooth);
    CHECK(v.complete);
  }
}

TEST_CASE("incomplete fan is reported with a witness direction") {
  ToricVariety x = projective_space(2);
  x.max_cones.pop_back();  // drop {1,2}
  const auto v = validate(x);
  CHECK_FALSE(v.complete);
  CHECK(v.smooth);
  REQUIRE(v.witness_direction.has_value());
  // The witness really is uncovered.
  const QVector w = from_ll(*v.witness_direction);
  for (const auto& cone : x.max_cones) {
    QMatrix m(2, 2);
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i)
        m.at(i, j) = Rational(x.rays[static_cast<std::size_t>(cone[static_cast<std::size_t>(j)])]
                                    [static_cast<std::size_t>(i)]);
    const QVector lambda = inverse(m)->apply(w);
    CHECK((lambda[0].sgn() < 0 || lambda[1].sgn() < 0));
  }
}

TEST_CASE("non smooth cone is reported") {
  ToricVariety x;
  x.n = 2;
  x.rays = {{1, 0}, {1, 2}, {-1, -1}};  // cone {0,1} has det 2
  x.max_cones = {{0, 1}, {1, 2}, {0, 2}};
  const auto v = validate(x);
  CHECK_FALSE(v.smooth);
  CHECK(v.witness_cone.has_value());
}

TEST_CASE("section polytopes") {
  const auto p2 = projective_space(2);
  CHECK(equals(section_polytope(p2, dv({0, 0, 1})), unit_simplex2()));
  CHECK(section_polytope(p2, dv({0, 0, -1})).is_empty());

  const auto pp = product_p1_p1();
  const Polytope seg = section_polytope(pp, dv({0, 0, 1, 0}));
  CHECK(equals(seg, Polytope::hull(2, {qv({0, 0}), qv({1, 0})})));
}

TEST_CASE("iitaka dimension") {
  const auto p2 = projective_space(2);
  CHECK(iitaka_dim(p2, dv({0, 0, 1})) == 2);
  CHECK(iitaka_dim(p2, dv({0, 0, 0})) == 0);
  CHECK(iitaka_dim(p2, dv({0, 0, -1})) == kKappaNone);
  CHECK(iitaka_dim(product_p1_p1(), dv({0, 0, 1, 0})) == 1);
}

TEST_CASE("classification") {
  const auto p2 = projective_space(2);
  const auto h = classify(p2, dv({0, 0, 1}));
  CHECK(h.pseudoeffective);
  CHECK(h.big);
  CHECK(h.nef);
  CHECK(h.semiample);

  const auto fiber = classify(product_p1_p1(), dv({0, 0, 1, 0}));
  CHECK(fiber.pseudoeffective);
  CHECK(fiber.nef);
  CHECK(fiber.semiample);
  CHECK_FALSE(fiber.big);

  const auto neg = classify(p2, dv({0, 0, -1}));
  CHECK_FALSE(neg.pseudoeffective);
  CHECK_FALSE(neg.big);
  CHECK_FALSE(neg.nef);

  // The negative section of F2 is effective but neither nef nor big.
  const auto f2 = hirzebruch(2);
  const auto s = classify(f2, dv({0, 1, 0, 0}));
  CHECK(s.pseudoeffective);
  CHECK_FALSE(s.nef);
  CHECK_FALSE(s.big);
}

TEST_CASE("default ample") {
  const auto p2 = projective_space(2);
  const DivisorQ a2 = default_ample(p2);
  for (const auto& c : a2.coeffs) CHECK(c == Rational(1));

  // On F2 the sum of the invariant divisors has degree zero on the negative
  // section, so the LP fallback must produce something strictly ample.
  const auto f2 = hirzebruch(2);
  const DivisorQ a = default_ample(f2);
  for (const auto& w : walls(f2)) CHECK(wall_degree(f2, a, w).sgn() > 0);
  for (const auto& c : a.coeffs) CHECK(c.is_integer());
}

TEST_CASE("asymptotic orders") {
  const auto p2 = projective_space(2);
  for (int i = 0; i < 3; ++i)
    CHECK(asymptotic_order(p2, dv({0, 0, 1}), i) == Rational(0));
  for (int i = 0; i < 3; ++i)
    CHECK(asymptotic_order(p2, dv({1, 1, 1}), i) == Rational(0));
  CHECK_THROWS_AS(asymptotic_order(p2, dv({0, 0, -1}), 0), HypothesisError);

  // The negative section of F2 is rigid: its own order is 1, the others 0.
  const auto f2 = hirzebruch(2);
  const DivisorQ s = dv({0, 1, 0, 0});
  CHECK(asymptotic_order(f2, s, 1) == Rational(1));
  CHECK(asymptotic_order(f2, s, 0) == Rational(0));
  CHECK(asymptotic_order(f2, s, 2) == Rational(0));
  CHECK(asymptotic_order(f2, s, 3) == Rational(0));
}

TEST_CASE("sigma and s decompositions agree and are idempotent") {
  const auto f2 = hirzebruch(2);
  const auto dec = sigma_s_decomposition(f2, dv({0, 1, 0, 0}));
  REQUIRE(dec.sigma.negative.size() == 1);
  CHECK(dec.sigma.negative[0].first == 1);
  CHECK(dec.sigma.negative[0].second == Rational(1));
  for (const auto& c : dec.sigma.positive.coeffs) CHECK(c == Rational(0));

  // Any nef divisor has trivial negative part.
  const auto pp = product_p1_p1();
  CHECK(sigma_s_decomposition(pp, dv({0, 0, 1, 0})).sigma.negative.empty());
  CHECK(sigma_s_decomposition(pp, dv({1, 1, 1, 1})).sigma.negative.empty());

  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const DivisorQ d = random_effective(rng, f2);
    const auto sd = sigma_s_decomposition(f2, d);
    // Idempotence: the positive part has vanishing asymptotic orders.
    for (int i = 0; i < 4; ++i)
      CHECK(asymptotic_order(f2, sd.sigma.positive, i) == Rational(0));
    // P_sigma is nef on these surfaces.
    for (const auto& w : walls(f2))
      CHECK(wall_degree(f2, sd.sigma.positive, w).sgn() >= 0);
  }
}

TEST_CASE("base loci") {
  const auto p2 = projective_space(2);
  const auto ample_loci = base_loci(p2, dv({0, 0, 1}));
  CHECK(ample_loci.stable.empty());
  CHECK(ample_loci.plus.empty());
  CHECK(ample_loci.minus.empty());

  const auto none = base_loci(p2, dv({0, 0, -1}));
  CHECK(locus_contains(none.stable, {}));  // SB is everything

  // Non-big nef divisor: SB and B- empty, B+ the whole variety.
  const auto pp = product_p1_p1();
  const auto fiber = base_loci(pp, dv({1, 0, 0, 0}));
  CHECK(fiber.stable.empty());
  CHECK(fiber.minus.empty());
  CHECK(locus_contains(fiber.plus, {}));

  // Rigid negative section on F2: its ray sits in every locus flavor.
  const auto f2 = hirzebruch(2);
  const auto rigid = base_loci(f2, dv({0, 1, 0, 0}));
  CHECK(locus_contains(rigid.minus, {1}));
  CHECK(locus_contains(rigid.stable, {1}));
  CHECK(locus_contains(rigid.plus, {1}));
  CHECK_FALSE(locus_contains(rigid.minus, {0}));
}

TEST_CASE("okounkov bodies of invariant flags") {
  const auto p2 = projective_space(2);
  const InvariantFlag flag{{0, 1}};
  const Polytope body = okounkov_body(p2, dv({0, 0, 1}), flag, BodyKind::Big);
  CHECK(equals(body, unit_simplex2()));

  // Non-big: valuative body of the fiber class freezes one coordinate.
  const auto pp = product_p1_p1();
  const DivisorQ f1 = dv({0, 0, 1, 0});
  const Polytope val = okounkov_body(pp, f1, InvariantFlag{{1, 0}}, BodyKind::Val);
  CHECK(equals(val, Polytope::hull(2, {qv({0, 0}), qv({0, 1})})));

  // Limiting body equals the big body for big divisors.
  const DivisorQ big = dv({0, 0, 1, 1});
  const Polytope lim = okounkov_body(pp, big, InvariantFlag{{0, 1}}, BodyKind::Lim);
  const Polytope bb = okounkov_body(pp, big, InvariantFlag{{0, 1}}, BodyKind::Big);
  CHECK(equals(lim, bb));

  // Limiting body of the non-big fiber equals its valuative body here.
  const Polytope limf = okounkov_body(pp, f1, InvariantFlag{{1, 0}}, BodyKind::Lim);
  CHECK(equals(limf, val));

  CHECK_THROWS_AS(okounkov_body(pp, f1, InvariantFlag{{1, 0}}, BodyKind::Big),
                  HypothesisError);
  CHECK_THROWS_AS(okounkov_body(p2, dv({0, 0, -1}), flag, BodyKind::Val), HypothesisError);
}

TEST_CASE("restricted volumes via slices and counting") {
  const auto p2 = projective_space(2);
  const DivisorQ h = dv({0, 0, 1});
  CHECK(restricted_volume(p2, h, InvariantFlag{{0, 1}}, 1) == Rational(1));
  CHECK(restricted_volume(p2, h, InvariantFlag{{0, 1}}, 2) == Rational(1));  // vol_X(H)

  const auto pp = product_p1_p1();
  const DivisorQ d = dv({0, 0, 1, 1});
  CHECK(restricted_volume(pp, d, InvariantFlag{{0, 1}}, 1) == Rational(1));
  CHECK(restricted_volume(pp, d, InvariantFlag{{0, 1}}, 2) == Rational(2));  // vol = 2

  // Rational coefficients still give exact values.
  const DivisorQ half = Rational(1, 2) * h;
  CHECK(restricted_volume(p2, half, InvariantFlag{{0, 1}}, 2) == Rational(1, 4));

  // Flag element inside B+ is refused.
  const auto f2 = hirzebruch(2);
  const DivisorQ dd = dv({0, 1, 0, 0}) + default_ample(f2);
  // D = s + A is big with the negative section not in B+, but s alone fails.
  CHECK_THROWS_AS(restricted_volume(f2, dv({0, 1, 0, 0}), InvariantFlag{{1, 0}}, 1),
                  HypothesisError);
  CHECK(restricted_volume(f2, dd, InvariantFlag{{0, 1}}, 1) > Rational(0));
}

TEST_CASE("numerical dimension with growth guard") {
  const auto p2 = projective_space(2);
  CHECK(numerical_dim(p2, dv({0, 0, 1})) == 2);
  CHECK(numerical_dim(p2, dv({0, 0, 0})) == 0);
  CHECK(numerical_dim(p2, dv({0, 0, -1})) == kKappaNone);
  CHECK(numerical_dim(product_p1_p1(), dv({0, 0, 1, 0})) == 1);
  CHECK(numerical_dim(hirzebruch(2), dv({0, 1, 0, 0})) == 0);
}

TEST_CASE("graded series bodies") {
  const auto p2 = projective_space(2);
  const DivisorQ h = dv({0, 0, 1});
  const InvariantFlag flag{{0, 1}};

  GradedSeriesT full{h, {{0, 0}, {1, 0}, {0, 1}}};
  CHECK(equals(series_body(p2, full, flag), unit_simplex2()));

  GradedSeriesT partial{h, {{0, 0}, {1, 0}}};
  const Polytope seg = series_body(p2, partial, flag);
  CHECK(equals(seg, Polytope::hull(2, {qv({0, 0}), qv({1, 0})})));
  // Minkowski powers of a collinear series stay on the line.
  const auto deg3 = series_generate(p2, partial, 3);
  CHECK(deg3.size() == 4);
  for (const auto& u : deg3) CHECK(u[1] == 0);

  GradedSeriesT vertices_only{h, {{0, 0}, {1, 0}, {0, 1}}};
  CHECK(equals(series_body(p2, vertices_only, flag), series_body(p2, full, flag)));

  // Generated pieces scaled back stay inside the degree-one body.
  for (int k = 1; k <= 3; ++k) {
    for (const auto& u : series_generate(p2, full, k)) {
      QVector scaled(2);
      scaled[0] = Rational(u[0], k);
      scaled[1] = Rational(u[1], k);
      CHECK(unit_simplex2().contains_point(scaled));
    }
  }

  GradedSeriesT bad{h, {{5, 5}}};
  CHECK_THROWS_AS(series_body(p2, bad, flag), GeomError);
}

TEST_CASE("blowup of P2 gives F1") {
  const auto p2 = projective_space(2);
  const auto bl = blowup_fixed_point(p2, {0, 1});
  CHECK(bl.variety.num_rays() == 4);
  CHECK(bl.variety.rays[3] == std::vector<long long>{1, 1});
  CHECK(bl.variety.max_cones.size() == 4);
  CHECK(validate(bl.variety).ok());

  CHECK(pullback(bl, dv({0, 0, 1})).coeffs[3] == Rational(0));
  CHECK(pullback(bl, dv({1, 1, 0})).coeffs[3] == Rational(2));
  CHECK_THROWS_AS(blowup_fixed_point(p2, {0}), HypothesisError);
}

TEST_CASE("blowup of P3 validates") {
  const auto p3 = projective_space(3);
  const auto bl = blowup_fixed_point(p3, {0, 1, 2});
  CHECK(bl.variety.max_cones.size() == 6);
  CHECK(validate(bl.variety).ok());
}

TEST_CASE("dilation linearity of section polytopes") {
  Rng rng(7);
  const auto f1 = blowup_fixed_point(projective_space(2), {0, 1}).variety;
  for (int trial = 0; trial < 10; ++trial) {
    const DivisorQ d = random_effective(rng, f1);
    const Rational m(1 + rng.int_in(0, 6), 1 + rng.int_in(0, 3));
    CHECK(equals(section_polytope(f1, m * d), scale(section_polytope(f1, d), m)));
  }
}

TEST_CASE("kappa equals the dimension of the valuative body") {
  Rng rng(2024);
  const std::vector<ToricVariety> xs = {projective_space(2), product_p1_p1(),
                                        blowup_fixed_point(projective_space(2), {0, 1}).variety,
                                        hirzebruch(2), projective_space(3)};
  int checked = 0;
  while (checked < 30) {
    const auto& x = xs[checked % xs.size()];
    const DivisorQ d = random_effective(rng, x);
    InvariantFlag flag{x.max_cones[0]};
    const Polytope body = okounkov_body(x, d, flag, BodyKind::Val);
    CHECK(body.affine_dim() == iitaka_dim(x, d));
    ++checked;
  }
}
