#pragma once

#include <vector>

#include "saleval/core_types.hpp"

namespace saleval {

/// Multi-channel grid, channel-major: values[(c * height + y) * width + x].
struct FeatureGrid {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> values;

  FeatureGrid() = default;
  FeatureGrid(int c, int h, int w);
  FeatureGrid(int c, int h, int w, std::vector<double> v);

  double at(int c, int y, int x) const {
    return values[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  double& at(int c, int y, int x) {
    return values[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
};

/// Convolution weights indexed (in_channel, out_channel, ky, kx).
struct ConvWeights {
  int in_channels = 0;
  int out_channels = 0;
  int kh = 0;
  int kw = 0;
  std::vector<double> w;

  ConvWeights() = default;
  ConvWeights(int in_c, int out_c, int k_h, int k_w);

  double at(int in_c, int out_c, int ky, int kx) const {
    return w[((static_cast<std::size_t>(in_c) * out_channels + out_c) * kh + ky) * kw + kx];
  }
  double& at(int in_c, int out_c, int ky, int kx) {
    return w[((static_cast<std::size_t>(in_c) * out_channels + out_c) * kh + ky) * kw + kx];
  }
};

enum class UpsampleKind { none, bilinear, deconv, subpixel };

struct ReadoutSpec {
  UpsampleKind upsample_kind = UpsampleKind::none;
  int n_layers = 0;  // must be 0 iff upsample_kind == none
  double leaky_slope = 0.01;
};

/// Weights for a readout head: optional per-layer upsampling convolutions
/// (4x4 deconvolutions or the 3x3 convolutions after each shuffle) and the
/// final 1x1 projection.
struct ReadoutWeights {
  std::vector<ConvWeights> upsample_convs;
  std::vector<double> proj_weights;  // one weight per channel at the projection point
  double proj_bias = 0.0;
};

/// Per-channel bilinear sampling with half-pixel-center mapping
/// (src = (dst + 0.5) * scale - 0.5), edge-clamped.
FeatureGrid bilinear_resize(const FeatureGrid& g, int out_h, int out_w);

/// Transposed convolution; equals convolving the zero-stuffed input with the
/// flipped kernel. With stride 2 / pad 1 / 4x4 kernels the output is exactly
/// twice the input size.
FeatureGrid transposed_conv2d(const FeatureGrid& g, const ConvWeights& kernel, int stride = 2,
                              int pad = 1);

/// Direct convolution with zero padding (same-size output for odd kernels
/// with pad = (k-1)/2).
FeatureGrid conv2d(const FeatureGrid& g, const ConvWeights& kernel, int pad);

/// Rearranges channel groups into 2x2 spatial blocks:
/// out(c, 2y+dy, 2x+dx) = in(4c + 2dy + dx, y, x) for factor 2.
FeatureGrid subpixel_shuffle(const FeatureGrid& g, int factor = 2);

/// Resizes the half-scale path to the full path's size and concatenates
/// along channels, full path first.
FeatureGrid concat_multiscale(const FeatureGrid& full, const FeatureGrid& half);

/// Plain channel concatenation; all grids must share spatial dimensions.
FeatureGrid concat_channels(const std::vector<FeatureGrid>& grids);

FeatureGrid relu(FeatureGrid g);
FeatureGrid leaky_relu(FeatureGrid g, double slope);

/// Readout head: upsampling layers per spec then a 1x1 projection with
/// Leaky ReLU. For the bilinear kind the projection (plus activation) runs
/// first and the upsampling layers follow. Output is 2^N times the input
/// size in each dimension.
DensityMap readout(const FeatureGrid& g, const ReadoutSpec& spec, const ReadoutWeights& weights);

}  // namespace saleval
