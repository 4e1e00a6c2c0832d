#include "saleval/gtgen.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace saleval {
namespace {

std::vector<double> gaussian_kernel(double sigma, double truncation_radius) {
  const int radius = static_cast<int>(std::ceil(truncation_radius * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int t = -radius; t <= radius; ++t) {
    const double w = std::exp(-(static_cast<double>(t) * t) / (2.0 * sigma * sigma));
    kernel[t + radius] = w;
    sum += w;
  }
  for (double& w : kernel) w /= sum;
  return kernel;
}

// One 1-D pass along x (stride 1) or y (stride width). The kernel is
// renormalized over the in-bounds support of each output sample.
void blur_pass(const std::vector<double>& in, std::vector<double>& out, int line_count,
               int line_length, std::size_t line_stride, std::size_t elem_stride,
               const std::vector<double>& kernel) {
  const int radius = (static_cast<int>(kernel.size()) - 1) / 2;
  for (int line = 0; line < line_count; ++line) {
    const std::size_t base = line * line_stride;
    for (int i = 0; i < line_length; ++i) {
      const int lo = std::max(-radius, -i);
      const int hi = std::min(radius, line_length - 1 - i);
      double acc = 0.0;
      double weight = 0.0;
      for (int t = lo; t <= hi; ++t) {
        const double w = kernel[t + radius];
        acc += w * in[base + (i + t) * elem_stride];
        weight += w;
      }
      out[base + i * elem_stride] = acc / weight;
    }
  }
}

}  // namespace

DensityMap accumulate_fixations(const FixationSet& fix, int width, int height) {
  DensityMap out(width, height);
  for (const Fixation& p : fix.points) {
    if (p.x < 0 || p.x >= width || p.y < 0 || p.y >= height)
      raise(ErrorCode::OutOfBounds, "fixation (" + std::to_string(p.x) + "," +
                                        std::to_string(p.y) + ") outside " +
                                        std::to_string(width) + "x" + std::to_string(height));
    out.at(p.x, p.y) += 1.0;
  }
  return out;
}

DensityMap gaussian_blur(const DensityMap& map, double sigma_px, const BlurSpec& spec) {
  if (!(sigma_px > 0.0)) raise(ErrorCode::NonPositiveSigma, "sigma must be positive");
  if (spec.truncation_radius < 3.0)
    raise(ErrorCode::InvalidSpec, "truncation radius below 3 sigma loses too much tail mass");

  const std::vector<double> kernel = gaussian_kernel(sigma_px, spec.truncation_radius);

  std::vector<double> tmp(map.values.size());
  std::vector<double> result(map.values.size());
  // Horizontal pass: each row is a line of `width` samples with stride 1.
  blur_pass(map.values, tmp, map.height, map.width, static_cast<std::size_t>(map.width), 1,
            kernel);
  // Vertical pass: each column is a line of `height` samples with stride width.
  blur_pass(tmp, result, map.width, map.height, 1, static_cast<std::size_t>(map.width), kernel);

  DensityMap out(map.width, map.height, std::move(result));
  // Border renormalization preserves constants but can shift total mass;
  // restore the input mass exactly.
  const double out_sum = out.total();
  if (out_sum > 0.0) {
    const double scale = map.total() / out_sum;
    for (double& v : out.values) v *= scale;
  }
  out.normalized = map.normalized;
  return out;
}

DensityMap make_ground_truth(const FixationSet& fix, const ManifestEntry& entry,
                             const BlurSpec& spec) {
  if (!(entry.pixels_per_degree > 0.0))
    raise(ErrorCode::InvalidSpec, "pixels_per_degree must be positive for " + entry.image_id);
  const DensityMap counts = accumulate_fixations(fix, entry.width, entry.height);
  const double sigma_px = entry.pixels_per_degree * spec.sigma_degrees;
  return normalize_to_distribution(gaussian_blur(counts, sigma_px, spec));
}

}  // namespace saleval
