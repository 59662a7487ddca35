#include <doctest.h>

#include <algorithm>
#include <map>

#include "oklab/rng.hpp"
#include "oklab/surface.hpp"

using namespace oklab;
using namespace oklab::surface;

namespace {

QVector qv(std::initializer_list<long long> xs) {
  std::vector<Rational> e;
  for (long long x : xs) e.emplace_back(x);
  return QVector(std::move(e));
}

// Blowup of the plane in one point, basis (H, E).
LatticeSurface bl1p2() {
  LatticeSurface s;
  s.rank = 2;
  s.form = QMatrix::from_rows({qv({1, 0}), qv({0, -1})});
  s.curves = {{"E", qv({0, 1})}, {"L", qv({1, -1})}, {"H", qv({1, 0})}};
  s.effective_generators = {qv({0, 1}), qv({1, -1})};
  s.fibrations = {qv({1, -1})};
  s.abundant = true;
  return s;
}

// Product of two lines, basis (f1, f2); C12 is an irreducible curve of
// class f1 + 2 f2.
LatticeSurface quadric() {
  LatticeSurface s;
  s.rank = 2;
  s.form = QMatrix::from_rows({qv({0, 1}), qv({1, 0})});
  s.curves = {{"f1", qv({1, 0})}, {"f2", qv({0, 1})}, {"C12", qv({1, 2})}};
  s.effective_generators = {qv({1, 0}), qv({0, 1})};
  s.fibrations = {qv({1, 0}), qv({0, 1})};
  s.abundant = true;
  return s;
}

// Second Hirzebruch surface, basis (f, s) with s the (-2)-section.
LatticeSurface f2_model() {
  LatticeSurface s;
  s.rank = 2;
  s.form = QMatrix::from_rows({qv({0, 1}), qv({1, -2})});
  s.curves = {{"s", qv({0, 1})}, {"f", qv({1, 0})}, {"s2", qv({2, 1})}};
  s.effective_generators = {qv({0, 1}), qv({1, 0})};
  s.fibrations = {qv({1, 0})};
  s.abundant = true;
  return s;
}

SurfDivisor random_psef(Rng& rng, const LatticeSurface& s) {
  for (;;) {
    SurfDivisor d(s.rank);
    for (int i = 0; i < s.rank; ++i) d[i] = Rational(rng.int_in(-3, 5), 1 + rng.int_in(0, 2));
    if (classify(s, d).pseudoeffective) return d;
  }
}

}  // namespace

TEST_CASE("validation") {
  CHECK(validate(bl1p2()).ok);
  CHECK(validate(quadric()).ok);
  CHECK(validate(f2_model()).ok);

  LatticeSurface bad = bl1p2();
  bad.form = QMatrix::identity(2);
  const auto v = validate(bad);
  CHECK_FALSE(v.ok);
  bool found = false;
  for (const auto& p : v.problems) found |= p.find("signature") != std::string::npos;
  CHECK(found);

  LatticeSurface asym = bl1p2();
  asym.form.at(0, 1) = Rational(1);
  CHECK_FALSE(validate(asym).ok);

  // A negative curve not listed among the generators is flagged.
  LatticeSurface missing = bl1p2();
  missing.effective_generators = {qv({0, 1}), qv({1, 0})};
  CHECK_FALSE(validate(missing).ok);
}

TEST_CASE("pairing") {
  const auto s = bl1p2();
  CHECK(pairing(s, qv({1, 1}), qv({0, 1})) == Rational(-1));  // (H+E).E
  CHECK(pairing(s, qv({1, 0}), qv({1, 0})) == Rational(1));
  CHECK(pairing(s, qv({1, 0}), qv({0, 1})) == Rational(0));
}

TEST_CASE("classification") {
  const auto s = bl1p2();
  const auto h = classify(s, qv({1, 0}));
  CHECK(h.pseudoeffective);
  CHECK(h.nef);
  CHECK(h.big);

  const auto he = classify(s, qv({1, 1}));
  CHECK(he.pseudoeffective);
  CHECK(he.big);
  CHECK_FALSE(he.nef);

  CHECK_FALSE(classify(s, qv({1, -2})).pseudoeffective);
}

TEST_CASE("zariski decomposition") {
  const auto s = bl1p2();
  const auto zd = zariski_decompose(s, qv({1, 1}));
  CHECK(zd.positive == qv({1, 0}));
  REQUIRE(zd.negative.size() == 1);
  CHECK(zd.negative[0].first == "E");
  CHECK(zd.negative[0].second == Rational(1));

  CHECK(zariski_decompose(s, qv({1, 0})).negative.empty());
  CHECK(zariski_decompose(quadric(), qv({1, 0})).negative.empty());
  CHECK_THROWS_AS(zariski_decompose(s, qv({1, -2})), HypothesisError);

  // s-route agrees on abundant models; good kind checks it internally.
  const auto good = zariski_decompose(s, qv({1, 1}), ZKind::Good);
  CHECK(good.positive_semiample);
  const auto via_s = zariski_decompose(s, qv({1, 1}), ZKind::S);
  CHECK(via_s.negative == good.negative);
}

TEST_CASE("zariski invariants on random divisors with permuted curve lists") {
  Rng rng(5150);
  for (const auto& model : {bl1p2(), quadric(), f2_model()}) {
    for (int trial = 0; trial < 15; ++trial) {
      const SurfDivisor d = random_psef(rng, model);
      const auto zd = zariski_decompose(model, d);
      // Reassemble and check N >= 0, P.C = 0 on support, P nef.
      SurfDivisor n(model.rank);
      for (const auto& [name, c] : zd.negative) {
        CHECK(c > Rational(0));
        n += c * curve_by_name(model, name).cls;
        CHECK(pairing(model, zd.positive, curve_by_name(model, name).cls) == Rational(0));
      }
      CHECK(zd.positive + n == d);
      for (const auto& g : model.effective_generators)
        CHECK(pairing(model, zd.positive, g) >= Rational(0));
      // Idempotence.
      const auto again = zariski_decompose(model, zd.positive);
      CHECK(again.negative.empty());
      CHECK(again.positive == zd.positive);
      // Permutation independence.
      LatticeSurface shuffled = model;
      std::reverse(shuffled.curves.begin(), shuffled.curves.end());
      const auto zd2 = zariski_decompose(shuffled, d);
      auto sorted = zd.negative;
      auto sorted2 = zd2.negative;
      std::sort(sorted.begin(), sorted.end());
      std::sort(sorted2.begin(), sorted2.end());
      CHECK(sorted == sorted2);
    }
  }
}

TEST_CASE("numerical dimension") {
  CHECK(numerical_dim(quadric(), qv({1, 0})) == 1);
  CHECK(numerical_dim(bl1p2(), qv({1, 0})) == 2);
  CHECK(numerical_dim(bl1p2(), qv({0, 1})) == 0);  // D = E
  CHECK(numerical_dim(bl1p2(), qv({-1, 0})) == toric::kKappaNone);
}

TEST_CASE("mu thresholds") {
  const auto s = bl1p2();
  CHECK(mu(s, qv({1, 0}), "E") == Rational(1));
  CHECK(mu(s, qv({1, 0}), "L") == Rational(1));
  CHECK(mu(s, qv({1, 1}), "E") == Rational(2));
  CHECK_THROWS_AS(mu(s, qv({-1, 0}), "E"), HypothesisError);
  CHECK_THROWS_AS(mu(s, qv({1, 0}), "nope"), GeomError);
}

TEST_CASE("parametric sweep spec instances") {
  const auto s = bl1p2();

  const Sweep sw1 = parametric_sweep(s, qv({1, 0}), "L");
  CHECK(sw1.a == Rational(0));
  CHECK(sw1.mu_value == Rational(1));
  REQUIRE(sw1.chambers.size() == 1);
  CHECK(sw1.chambers[0].support == std::vector<std::string>{"E"});
  // N(t) = t E, beta(t) = 1 - t
  CHECK(sw1.chambers[0].coeff_affine[0] == std::pair<Rational, Rational>(Rational(0), Rational(1)));
  CHECK(sw1.chambers[0].beta0 == Rational(1));
  CHECK(sw1.chambers[0].beta1 == Rational(-1));

  const Sweep sw2 = parametric_sweep(s, qv({1, 0}), "E");
  CHECK(sw2.a == Rational(0));
  CHECK(sw2.mu_value == Rational(1));
  REQUIRE(sw2.chambers.size() == 1);
  CHECK(sw2.chambers[0].support.empty());
  CHECK(sw2.chambers[0].beta0 == Rational(0));
  CHECK(sw2.chambers[0].beta1 == Rational(1));

  const Sweep sw3 = parametric_sweep(s, qv({1, 1}), "E");
  CHECK(sw3.a == Rational(1));
  CHECK(sw3.mu_value == Rational(2));
  REQUIRE(sw3.chambers.size() == 1);
  CHECK(sw3.chambers[0].support.empty());
  CHECK(sw3.chambers[0].beta0 == Rational(-1));
  CHECK(sw3.chambers[0].beta1 == Rational(1));
}

TEST_CASE("parametric sweep of a non-big class") {
  // f1 swept along a fiber of the same ruling: trivial negative part and a
  // flat beta over the whole pseudoeffective range.
  const auto q = quadric();
  const Sweep sw = parametric_sweep(q, qv({1, 0}), "f1");
  CHECK(sw.a == Rational(0));
  CHECK(sw.mu_value == Rational(1));
  REQUIRE(sw.chambers.size() == 1);
  CHECK(sw.chambers[0].support.empty());
  CHECK(sw.chambers[0].beta0 == Rational(0));
  CHECK(sw.chambers[0].beta1 == Rational(0));
}

TEST_CASE("okounkov polygons") {
  const auto s = bl1p2();
  const Polytope tri = okounkov_polygon(s, qv({1, 0}), SurfFlag{"L"}, BodyKind::Big);
  CHECK(equals(tri, Polytope::hull(2, {qv({0, 0}), qv({1, 0}), qv({0, 1})})));

  // Big: limiting and big polygons agree.
  const Polytope lim = okounkov_polygon(s, qv({1, 1}), SurfFlag{"E"}, BodyKind::Lim);
  CHECK(equals(lim, Polytope::hull(2, {qv({1, 0}), qv({2, 0}), qv({2, 1})})));

  const auto q = quadric();
  const Polytope seg = okounkov_polygon(q, qv({1, 0}), SurfFlag{"f2"}, BodyKind::Lim);
  CHECK(equals(seg, Polytope::hull(2, {qv({0, 0}), qv({0, 1})})));

  // Strict gap: val width 1 vs lim width 2 on the (1,2)-curve flag.
  const Polytope val12 = okounkov_polygon(q, qv({1, 0}), SurfFlag{"C12"}, BodyKind::Val);
  const Polytope lim12 = okounkov_polygon(q, qv({1, 0}), SurfFlag{"C12"}, BodyKind::Lim);
  CHECK(equals(val12, Polytope::hull(2, {qv({0, 0}), qv({0, 1})})));
  CHECK(equals(lim12, Polytope::hull(2, {qv({0, 0}), qv({0, 2})})));
  CHECK(contains(lim12, val12));

  // kappa_nu = 0: the body is a point at the multiplicity of the flag curve.
  const Polytope pt = okounkov_polygon(s, qv({0, 1}), SurfFlag{"E"}, BodyKind::Lim);
  CHECK(equals(pt, Polytope::hull(2, {qv({1, 0})})));

  CHECK_THROWS_AS(okounkov_polygon(q, qv({1, 0}), SurfFlag{"f2"}, BodyKind::Big),
                  HypothesisError);
}

TEST_CASE("polygon area equals half the volume for big classes") {
  Rng rng(808);
  for (const auto& model : {bl1p2(), quadric(), f2_model()}) {
    int done = 0;
    while (done < 8) {
      const SurfDivisor d = random_psef(rng, model);
      if (!classify(model, d).big) continue;
      const auto zd = zariski_decompose(model, d);
      const Rational vol = pairing(model, zd.positive, zd.positive);
      for (const auto& c : model.curves) {
        const Polytope poly = okounkov_polygon(model, d, SurfFlag{c.name}, BodyKind::Big);
        CHECK(Rational(2) * volume_full(poly) == vol);
        const Polytope val = okounkov_polygon(model, d, SurfFlag{c.name}, BodyKind::Val);
        CHECK(equals(poly, val));
      }
      ++done;
    }
  }
}

TEST_CASE("valuative bodies sit inside limiting bodies") {
  Rng rng(6174);
  for (const auto& model : {bl1p2(), quadric(), f2_model()}) {
    int done = 0;
    while (done < 10) {
      const SurfDivisor d = random_psef(rng, model);
      for (const auto& c : model.curves) {
        const Polytope val = okounkov_polygon(model, d, SurfFlag{c.name}, BodyKind::Val);
        const Polytope lim = okounkov_polygon(model, d, SurfFlag{c.name}, BodyKind::Lim);
        CHECK(contains(lim, val));
        if (classify(model, d).big) CHECK(equals(lim, val));
      }
      ++done;
    }
  }
}

TEST_CASE("restricted volumes") {
  const auto s = bl1p2();
  const auto rv = restricted_volumes(s, qv({1, 0}), "L");
  CHECK(rv.vol == Rational(1));
  CHECK(rv.vol_plus == Rational(1));

  const auto q = quadric();
  const auto rf = restricted_volumes(q, qv({1, 0}), "f2");
  CHECK(rf.vol == Rational(1));
  CHECK(rf.vol_plus == Rational(1));

  const auto rgap = restricted_volumes(q, qv({1, 0}), "C12");
  CHECK(rgap.vol == Rational(1));
  CHECK(rgap.vol_plus == Rational(2));

  // E is inside B+(H), so the restricted volume along E is refused.
  CHECK_THROWS_AS(restricted_volumes(s, qv({1, 0}), "E"), HypothesisError);
}

TEST_CASE("divisorial base loci") {
  const auto s = bl1p2();
  const auto h = base_loci_divisorial(s, qv({1, 0}));
  CHECK(h.minus.empty());
  CHECK(h.plus == std::vector<std::string>{"E"});

  const auto he = base_loci_divisorial(s, qv({1, 1}));
  CHECK(he.minus == std::vector<std::string>{"E"});
  CHECK(he.plus == std::vector<std::string>{"E"});

  const auto ample = base_loci_divisorial(s, qv({2, -1}));
  CHECK(ample.minus.empty());
  CHECK(ample.plus.empty());

  CHECK_THROWS_AS(base_loci_divisorial(quadric(), qv({1, 0})), HypothesisError);
}

TEST_CASE("default ample classes") {
  for (const auto& model : {bl1p2(), quadric(), f2_model()}) {
    const SurfDivisor a = default_ample(model);
    for (const auto& g : model.effective_generators)
      CHECK(pairing(model, a, g) >= Rational(1));
    CHECK(pairing(model, a, a) > Rational(0));
    const SurfDivisor a2 = second_ample(model);
    for (const auto& g : model.effective_generators) CHECK(pairing(model, a2, g) > Rational(0));
  }
  CHECK(default_ample(bl1p2()) == qv({2, -1}));
}

TEST_CASE("from_toric models") {
  const auto p2_model = from_toric(toric::projective_space(2));
  CHECK(p2_model.surface.rank == 1);
  CHECK(p2_model.surface.form.at(0, 0) == Rational(1));
  CHECK(validate(p2_model.surface).ok);

  const auto f1 = toric::blowup_fixed_point(toric::projective_space(2), {0, 1}).variety;
  const auto f1_model = from_toric(f1);
  CHECK(f1_model.surface.rank == 2);
  CHECK(validate(f1_model.surface).ok);
  // Exactly one invariant curve is exceptional.
  int minus_one = 0;
  for (const auto& c : f1_model.surface.curves)
    if (pairing(f1_model.surface, c.cls, c.cls) == Rational(-1)) ++minus_one;
  CHECK(minus_one == 1);
  CHECK(f1_model.surface.fibrations.size() == 1);

  const auto f2 = from_toric(toric::hirzebruch(2));
  CHECK(validate(f2.surface).ok);
  bool has_minus_two = false;
  for (const auto& c : f2.surface.curves)
    has_minus_two |= pairing(f2.surface, c.cls, c.cls) == Rational(-2);
  CHECK(has_minus_two);

  const auto pp = from_toric(toric::product_p1_p1());
  CHECK(pp.surface.rank == 2);
  CHECK(validate(pp.surface).ok);
  CHECK(pp.surface.fibrations.size() == 2);
}

TEST_CASE("cross-model decomposition agreement") {
  // The toric LP route and the lattice-model support iteration must produce
  // the same negative part, curve by curve.
  Rng rng(31337);
  for (const auto& x : {toric::hirzebruch(2), toric::product_p1_p1(),
                        toric::blowup_fixed_point(toric::projective_space(2), {0, 1}).variety}) {
    const auto model = from_toric(x);
    for (int trial = 0; trial < 10; ++trial) {
      toric::DivisorQ d;
      for (int i = 0; i < x.num_rays(); ++i) d.coeffs.emplace_back(rng.int_in(-2, 4));
      if (toric::section_polytope(x, d).is_empty()) continue;
      const auto toric_dec = toric::sigma_s_decomposition(x, d);
      const SurfDivisor cls = class_of(model, d);
      REQUIRE(classify(model.surface, cls).pseudoeffective);
      const auto surf_dec = zariski_decompose(model.surface, cls);
      std::map<std::string, Rational> toric_coeffs;
      for (const auto& [ray, c] : toric_dec.sigma.negative)
        toric_coeffs[model.ray_curve_names[static_cast<std::size_t>(ray)]] = c;
      std::map<std::string, Rational> surf_coeffs(surf_dec.negative.begin(),
                                                  surf_dec.negative.end());
      CHECK(toric_coeffs == surf_coeffs);
    }
  }
}
