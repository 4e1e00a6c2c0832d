#include <benchmark/benchmark.h>

#include "saleval/gtgen.hpp"
#include "saleval/rng.hpp"

using namespace saleval;

namespace {

void BM_GaussianBlur640(benchmark::State& state) {
  RngStream rng(21);
  DensityMap counts(640, 480);
  for (int i = 0; i < 40; ++i)
    counts.at(static_cast<int>(rng.uniform_below(640)),
              static_cast<int>(rng.uniform_below(480))) += 1.0;
  const double sigma = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_blur(counts, sigma).total());
}

void BM_MakeGroundTruth(benchmark::State& state) {
  RngStream rng(22);
  FixationSet fix;
  fix.image_width = 640;
  fix.image_height = 480;
  for (int i = 0; i < 40; ++i)
    fix.points.push_back({static_cast<int>(rng.uniform_below(640)),
                          static_cast<int>(rng.uniform_below(480)), "o"});
  const ManifestEntry entry{"bench", 640, 480, 24.0, "", {}};
  for (auto _ : state) benchmark::DoNotOptimize(make_ground_truth(fix, entry).total());
}

}  // namespace

BENCHMARK(BM_GaussianBlur640)->Arg(8)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MakeGroundTruth)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
