#pragma once

#include "saleval/core_types.hpp"

namespace saleval {

/// Blur parameters for ground-truth construction. sigma is given in visual
/// degrees and converted to pixels with the image's pixels-per-degree.
struct BlurSpec {
  double sigma_degrees = 1.0;
  double truncation_radius = 4.0;  // kernel support in multiples of sigma
};

/// Counts fixations into a per-pixel histogram. Output sums to the number
/// of fixations; an empty set yields an all-zero map.
DensityMap accumulate_fixations(const FixationSet& fix, int width, int height);

/// Separable Gaussian convolution with the kernel truncated at
/// truncation_radius * sigma. Near borders the kernel is renormalized over
/// its in-bounds support and the result is rescaled so the total mass
/// matches the input exactly.
DensityMap gaussian_blur(const DensityMap& map, double sigma_px, const BlurSpec& spec = {});

/// Fixation histogram blurred with sigma_px = pixels_per_degree *
/// sigma_degrees, normalized to a probability distribution.
DensityMap make_ground_truth(const FixationSet& fix, const ManifestEntry& entry,
                             const BlurSpec& spec = {});

}  // namespace saleval
