#include <benchmark/benchmark.h>

#include <cmath>

#include "saleval/emd.hpp"
#include "saleval/rng.hpp"

using namespace saleval;

namespace {

DensityMap bumpy_map(RngStream& rng, int w, int h, int bumps) {
  DensityMap map(w, h);
  for (int b = 0; b < bumps; ++b) {
    const double cx = rng.uniform_unit() * w, cy = rng.uniform_unit() * h;
    const double sx = w / 12.0 + rng.uniform_unit() * w / 12.0;
    const double sy = h / 12.0 + rng.uniform_unit() * h / 12.0;
    const double inv_x = 1.0 / (2 * sx * sx), inv_y = 1.0 / (2 * sy * sy);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        map.at(x, y) += std::exp(-((x - cx) * (x - cx) * inv_x + (y - cy) * (y - cy) * inv_y));
  }
  return map;
}

// 640x480 pair solved at different downsampling caps; the cap drives the
// transportation problem size
void BM_EmdMaxSide(benchmark::State& state) {
  RngStream rng(11);
  const DensityMap a = bumpy_map(rng, 640, 480, 5);
  const DensityMap b = bumpy_map(rng, 640, 480, 5);
  const EmdConfig cfg{static_cast<int>(state.range(0)), true};
  for (auto _ : state) benchmark::DoNotOptimize(emd_metric(a, b, cfg));
}

void BM_SolveTransportGrid(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  RngStream rng(13);
  TransportProblem problem;
  problem.grid_width = side;
  for (int i = 0; i < side * side; ++i) {
    if (rng.uniform_unit() < 0.5)
      problem.supplies.push_back({i, 0.1 + rng.uniform_unit()});
    else
      problem.demands.push_back({i, 0.1 + rng.uniform_unit()});
  }
  double s = 0, d = 0;
  for (const MassPoint& p : problem.supplies) s += p.mass;
  for (const MassPoint& p : problem.demands) d += p.mass;
  for (MassPoint& p : problem.demands) p.mass *= s / d;
  for (auto _ : state) benchmark::DoNotOptimize(solve_transport(problem).cost);
}

}  // namespace

BENCHMARK(BM_EmdMaxSide)->Arg(16)->Arg(24)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveTransportGrid)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
