#include <benchmark/benchmark.h>

#include "oklab/polytope.hpp"
#include "oklab/rng.hpp"

using namespace oklab;

namespace {

std::vector<QVector> random_points(Rng& rng, int dim, int count, long long box) {
  std::vector<QVector> pts;
  for (int i = 0; i < count; ++i) {
    QVector p(dim);
    for (int j = 0; j < dim; ++j) p[j] = Rational(rng.int_in(-box, box));
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace

static void BM_Hull(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(99);
  const auto pts = random_points(rng, dim, dim * 4, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Polytope::hull(dim, pts));
  }
}
BENCHMARK(BM_Hull)->Arg(2)->Arg(3)->Arg(4);

static void BM_ConvertRoundTrip(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(7);
  const Polytope p = Polytope::hull(dim, random_points(rng, dim, dim * 4, 5));
  for (auto _ : state) {
    benchmark::DoNotOptimize(convert(p));
  }
}
BENCHMARK(BM_ConvertRoundTrip)->Arg(2)->Arg(3)->Arg(4);

static void BM_LpOptimize(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(21);
  const Polytope p = Polytope::hull(dim, random_points(rng, dim, dim * 5, 8));
  QVector obj(dim);
  for (int j = 0; j < dim; ++j) obj[j] = Rational(rng.int_in(-3, 3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lp_optimize(obj, p, LpSense::Minimize));
  }
}
BENCHMARK(BM_LpOptimize)->Arg(2)->Arg(4);

static void BM_Volume3d(benchmark::State& state) {
  Rng rng(5);
  const Polytope p = Polytope::hull(3, random_points(rng, 3, 14, 6));
  for (auto _ : state) {
    benchmark::DoNotOptimize(volume_full(p));
  }
}
BENCHMARK(BM_Volume3d);

static void BM_LatticePoints(benchmark::State& state) {
  Rng rng(13);
  const Polytope p = Polytope::hull(2, random_points(rng, 2, 6, static_cast<long long>(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lattice_points(p));
  }
}
BENCHMARK(BM_LatticePoints)->Arg(5)->Arg(15);
