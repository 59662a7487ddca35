#include <doctest.h>

#include <thread>
#include <vector>

#include "oklab/surface.hpp"
#include "oklab/toric.hpp"

using namespace oklab;

TEST_CASE("pure operations are safe to run concurrently") {
  const auto x = toric::hirzebruch(2);
  toric::DivisorQ d;
  d.coeffs = {Rational(1), Rational(1), Rational(1), Rational(1)};
  const toric::InvariantFlag flag{{0, 1}};
  const Polytope reference = toric::okounkov_body(x, d, flag, BodyKind::Big);

  const auto model = surface::from_toric(x);
  const surface::SurfDivisor cls = surface::class_of(model, d);
  const auto ref_dec = surface::zariski_decompose(model.surface, cls);

  std::vector<std::thread> workers;
  std::vector<int> ok(8, 0);
  for (int t = 0; t < 8; ++t) {
    workers.emplace_back([&, t] {
      bool good = true;
      for (int i = 0; i < 8; ++i) {
        const Polytope body = toric::okounkov_body(x, d, flag, BodyKind::Big);
        good &= equals(body, reference);
        const auto dec = surface::zariski_decompose(model.surface, cls);
        good &= dec.negative == ref_dec.negative;
        good &= !toric::section_polytope(x, d).is_empty();
      }
      ok[static_cast<std::size_t>(t)] = good ? 1 : 0;
    });
  }
  for (auto& w : workers) w.join();
  for (int t = 0; t < 8; ++t) CHECK(ok[static_cast<std::size_t>(t)] == 1);
}
