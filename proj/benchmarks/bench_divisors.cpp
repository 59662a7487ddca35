#include <benchmark/benchmark.h>

#include "oklab/rng.hpp"
#include "oklab/surface.hpp"
#include "oklab/toric.hpp"

using namespace oklab;

namespace {

surface::LatticeSurface bl1p2() {
  surface::LatticeSurface s;
  s.rank = 2;
  s.form = QMatrix::from_rows({QVector{Rational(1), Rational(0)},
                               QVector{Rational(0), Rational(-1)}});
  s.curves = {{"E", QVector{Rational(0), Rational(1)}},
              {"L", QVector{Rational(1), Rational(-1)}},
              {"H", QVector{Rational(1), Rational(0)}}};
  s.effective_generators = {QVector{Rational(0), Rational(1)},
                            QVector{Rational(1), Rational(-1)}};
  s.fibrations = {QVector{Rational(1), Rational(-1)}};
  s.abundant = true;
  return s;
}

}  // namespace

static void BM_ZariskiDecompose(benchmark::State& state) {
  const auto model = bl1p2();
  Rng rng(404);
  std::vector<surface::SurfDivisor> divisors;
  while (divisors.size() < 64) {
    surface::SurfDivisor d(2);
    for (int i = 0; i < 2; ++i) d[i] = Rational(rng.int_in(-4, 8), 1 + rng.int_in(0, 3));
    if (surface::classify(model, d).pseudoeffective) divisors.push_back(std::move(d));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(surface::zariski_decompose(model, divisors[i % divisors.size()]));
    ++i;
  }
}
BENCHMARK(BM_ZariskiDecompose);

static void BM_ParametricSweep(benchmark::State& state) {
  const auto model = bl1p2();
  const surface::SurfDivisor d{Rational(3), Rational(1)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(surface::parametric_sweep(model, d, "E"));
  }
}
BENCHMARK(BM_ParametricSweep);

static void BM_OkounkovPolygon(benchmark::State& state) {
  const auto model = bl1p2();
  const surface::SurfDivisor d{Rational(5, 2), Rational(1)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        surface::okounkov_polygon(model, d, surface::SurfFlag{"L"}, BodyKind::Big));
  }
}
BENCHMARK(BM_OkounkovPolygon);

static void BM_ToricBody(benchmark::State& state) {
  const auto x = toric::projective_space(static_cast<int>(state.range(0)));
  toric::DivisorQ d;
  d.coeffs.assign(static_cast<std::size_t>(x.num_rays()), Rational(1));
  const toric::InvariantFlag flag{x.max_cones[0]};
  for (auto _ : state) {
    benchmark::DoNotOptimize(toric::okounkov_body(x, d, flag, BodyKind::Big));
  }
}
BENCHMARK(BM_ToricBody)->Arg(2)->Arg(3);

static void BM_BaseLoci(benchmark::State& state) {
  const auto x = toric::hirzebruch(2);
  const toric::DivisorQ d{{Rational(0), Rational(1), Rational(0), Rational(0)}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(toric::base_loci(x, d));
  }
}
BENCHMARK(BM_BaseLoci);

BENCHMARK_MAIN();
