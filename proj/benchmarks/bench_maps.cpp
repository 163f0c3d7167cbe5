#include <benchmark/benchmark.h>

#include "dlab/charts.hpp"
#include "dlab/energy.hpp"
#include "dlab/topology.hpp"

using namespace dlab;

namespace {
const LimitMap& limit() {
  static LimitMap u;
  return u;
}
const RecoveryMap& recovery() {
  static RecoveryMap r(RecoveryParams(0.05, 1.0 / 3.0), &limit());
  return r;
}
}  // namespace

static void BM_LimitJet(benchmark::State& state) {
  long i = 0;
  for (auto _ : state) {
    const Vec3 p = 5.0 * halton3(i++ % 100000) - Vec3(2.5, 2.5, 2.5);
    if (p.norm() > 2.9) continue;
    benchmark::DoNotOptimize(limit().eval(p));
  }
}
BENCHMARK(BM_LimitJet);

static void BM_RecoveryJet(benchmark::State& state) {
  long i = 0;
  for (auto _ : state) {
    const Vec3 p = 5.0 * halton3(i++ % 100000) - Vec3(2.5, 2.5, 2.5);
    if (p.norm() > 2.9) continue;
    benchmark::DoNotOptimize(recovery().eval(p));
  }
}
BENCHMARK(BM_RecoveryJet);

static void BM_CapInversion(benchmark::State& state) {
  long i = 0;
  for (auto _ : state) {
    const Vec2 h = halton2(i++ % 100000);
    const Vec3 p =
        recovery().cap_lower_point(0.02 + 0.96 * h.x(), 0.76 * kPi / 2.0 * h.y());
    benchmark::DoNotOptimize(recovery().cap_lower_invert(p));
  }
}
BENCHMARK(BM_CapInversion);

static void BM_WindingDegree(benchmark::State& state) {
  const ProfileCurve curve([](const Vec3& p) { return limit().value(p); }, point_P(),
                           0.3);
  long i = 0;
  for (auto _ : state) {
    const Vec2 h = halton2(i++ % 100000);
    const Vec2 q(0.7 * h.x(), -0.2 + 1.3 * h.y());
    if (curve.distance(q) < curve.resolution_bound()) continue;
    benchmark::DoNotOptimize(curve.winding(q));
  }
}
BENCHMARK(BM_WindingDegree);

static void BM_TubeDirichlet(benchmark::State& state) {
  QuadSpec spec;
  spec.rtol = 1e-5;
  const auto atlas = recovery_atlas(recovery());
  const auto& tube = chart_for(atlas, RegionId::CEps);
  for (auto _ : state)
    benchmark::DoNotOptimize(dirichlet_energy(tube, spec));
}
BENCHMARK(BM_TubeDirichlet);

BENCHMARK_MAIN();
