#include <benchmark/benchmark.h>

#include <cmath>

#include "saleval/metrics.hpp"
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

FixationSet some_fixations(RngStream& rng, int w, int h, int count) {
  FixationSet fix;
  fix.image_width = w;
  fix.image_height = h;
  for (int i = 0; i < count; ++i)
    fix.points.push_back({static_cast<int>(rng.uniform_below(w)),
                          static_cast<int>(rng.uniform_below(h)), "o"});
  return fix;
}

void BM_AucJudd640(benchmark::State& state) {
  RngStream rng(1);
  const DensityMap sal = bumpy_map(rng, 640, 480, 5);
  const FixationSet fix = some_fixations(rng, 640, 480, 40);
  for (auto _ : state) benchmark::DoNotOptimize(auc_judd(sal, fix).score);
}

void BM_AucBorji640(benchmark::State& state) {
  RngStream rng(2);
  const DensityMap sal = bumpy_map(rng, 640, 480, 5);
  const FixationSet fix = some_fixations(rng, 640, 480, 40);
  const SeededRng seeds{0};
  const int splits = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        auc_borji(sal, fix, {splits, seeds.stream("bench", "auc_borji")}).score);
}

void BM_Kl640(benchmark::State& state) {
  RngStream rng(3);
  const DensityMap sal = bumpy_map(rng, 640, 480, 5);
  const DensityMap gt = bumpy_map(rng, 640, 480, 5);
  for (auto _ : state) benchmark::DoNotOptimize(kl(gt, sal).score);
}

}  // namespace

BENCHMARK(BM_AucJudd640)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AucBorji640)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Kl640)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
