#include "saleval/resample.hpp"

#include <algorithm>
#include <cmath>

namespace saleval {
namespace {

void check_finite_dims(int c, int h, int w) {
  if (c < 1 || h < 1 || w < 1) raise(ErrorCode::EmptyMap, "feature grid dimensions must be >= 1");
}

}  // namespace

FeatureGrid::FeatureGrid(int c, int h, int w) : channels(c), height(h), width(w) {
  check_finite_dims(c, h, w);
  values.assign(static_cast<std::size_t>(c) * h * w, 0.0);
}

FeatureGrid::FeatureGrid(int c, int h, int w, std::vector<double> v)
    : channels(c), height(h), width(w), values(std::move(v)) {
  check_finite_dims(c, h, w);
  if (values.size() != static_cast<std::size_t>(c) * h * w)
    raise(ErrorCode::ShapeMismatch, "value count does not match channels*height*width");
}

ConvWeights::ConvWeights(int in_c, int out_c, int k_h, int k_w)
    : in_channels(in_c), out_channels(out_c), kh(k_h), kw(k_w) {
  if (in_c < 1 || out_c < 1 || k_h < 1 || k_w < 1)
    raise(ErrorCode::KernelShapeMismatch, "kernel dimensions must be >= 1");
  w.assign(static_cast<std::size_t>(in_c) * out_c * k_h * k_w, 0.0);
}

FeatureGrid bilinear_resize(const FeatureGrid& g, int out_h, int out_w) {
  if (out_h < 1 || out_w < 1) raise(ErrorCode::EmptyMap, "resize target must be >= 1");
  FeatureGrid out(g.channels, out_h, out_w);
  const double scale_y = static_cast<double>(g.height) / out_h;
  const double scale_x = static_cast<double>(g.width) / out_w;
  for (int y = 0; y < out_h; ++y) {
    double sy = (y + 0.5) * scale_y - 0.5;
    sy = std::clamp(sy, 0.0, static_cast<double>(g.height - 1));
    const int y0 = static_cast<int>(sy);
    const int y1 = std::min(y0 + 1, g.height - 1);
    const double fy = sy - y0;
    for (int x = 0; x < out_w; ++x) {
      double sx = (x + 0.5) * scale_x - 0.5;
      sx = std::clamp(sx, 0.0, static_cast<double>(g.width - 1));
      const int x0 = static_cast<int>(sx);
      const int x1 = std::min(x0 + 1, g.width - 1);
      const double fx = sx - x0;
      for (int c = 0; c < g.channels; ++c) {
        const double top = g.at(c, y0, x0) * (1.0 - fx) + g.at(c, y0, x1) * fx;
        const double bottom = g.at(c, y1, x0) * (1.0 - fx) + g.at(c, y1, x1) * fx;
        out.at(c, y, x) = top * (1.0 - fy) + bottom * fy;
      }
    }
  }
  return out;
}

FeatureGrid transposed_conv2d(const FeatureGrid& g, const ConvWeights& kernel, int stride,
                              int pad) {
  if (kernel.in_channels != g.channels)
    raise(ErrorCode::KernelShapeMismatch,
          "kernel expects " + std::to_string(kernel.in_channels) + " input channels, grid has " +
              std::to_string(g.channels));
  if (stride < 1 || pad < 0) raise(ErrorCode::KernelShapeMismatch, "invalid stride/pad");
  const int out_h = (g.height - 1) * stride - 2 * pad + kernel.kh;
  const int out_w = (g.width - 1) * stride - 2 * pad + kernel.kw;
  if (out_h < 1 || out_w < 1)
    raise(ErrorCode::KernelShapeMismatch, "padding swallows the whole output");

  FeatureGrid out(kernel.out_channels, out_h, out_w);
  // scatter form: each input sample stamps the kernel into the output
  for (int ic = 0; ic < g.channels; ++ic) {
    for (int iy = 0; iy < g.height; ++iy) {
      for (int ix = 0; ix < g.width; ++ix) {
        const double v = g.at(ic, iy, ix);
        if (v == 0.0) continue;
        for (int oc = 0; oc < kernel.out_channels; ++oc) {
          for (int ky = 0; ky < kernel.kh; ++ky) {
            const int oy = iy * stride + ky - pad;
            if (oy < 0 || oy >= out_h) continue;
            for (int kx = 0; kx < kernel.kw; ++kx) {
              const int ox = ix * stride + kx - pad;
              if (ox < 0 || ox >= out_w) continue;
              out.at(oc, oy, ox) += v * kernel.at(ic, oc, ky, kx);
            }
          }
        }
      }
    }
  }
  return out;
}

FeatureGrid conv2d(const FeatureGrid& g, const ConvWeights& kernel, int pad) {
  if (kernel.in_channels != g.channels)
    raise(ErrorCode::KernelShapeMismatch, "conv2d channel mismatch");
  const int out_h = g.height + 2 * pad - kernel.kh + 1;
  const int out_w = g.width + 2 * pad - kernel.kw + 1;
  if (out_h < 1 || out_w < 1) raise(ErrorCode::KernelShapeMismatch, "kernel larger than input");

  FeatureGrid out(kernel.out_channels, out_h, out_w);
  for (int oc = 0; oc < kernel.out_channels; ++oc) {
    for (int oy = 0; oy < out_h; ++oy) {
      for (int ox = 0; ox < out_w; ++ox) {
        double acc = 0.0;
        for (int ic = 0; ic < g.channels; ++ic) {
          for (int ky = 0; ky < kernel.kh; ++ky) {
            const int iy = oy + ky - pad;
            if (iy < 0 || iy >= g.height) continue;
            for (int kx = 0; kx < kernel.kw; ++kx) {
              const int ix = ox + kx - pad;
              if (ix < 0 || ix >= g.width) continue;
              acc += g.at(ic, iy, ix) * kernel.at(ic, oc, ky, kx);
            }
          }
        }
        out.at(oc, oy, ox) = acc;
      }
    }
  }
  return out;
}

FeatureGrid subpixel_shuffle(const FeatureGrid& g, int factor) {
  if (factor < 1) raise(ErrorCode::InvalidSpec, "shuffle factor must be >= 1");
  const int group = factor * factor;
  if (g.channels % group != 0)
    raise(ErrorCode::ChannelNotDivisible, "channels " + std::to_string(g.channels) +
                                              " not divisible by " + std::to_string(group));
  FeatureGrid out(g.channels / group, g.height * factor, g.width * factor);
  for (int c = 0; c < out.channels; ++c)
    for (int y = 0; y < g.height; ++y)
      for (int x = 0; x < g.width; ++x)
        for (int dy = 0; dy < factor; ++dy)
          for (int dx = 0; dx < factor; ++dx)
            out.at(c, y * factor + dy, x * factor + dx) = g.at(c * group + dy * factor + dx, y, x);
  return out;
}

FeatureGrid concat_multiscale(const FeatureGrid& full, const FeatureGrid& half) {
  const FeatureGrid resized = bilinear_resize(half, full.height, full.width);
  FeatureGrid out(full.channels + resized.channels, full.height, full.width);
  std::copy(full.values.begin(), full.values.end(), out.values.begin());
  std::copy(resized.values.begin(), resized.values.end(),
            out.values.begin() + static_cast<std::ptrdiff_t>(full.values.size()));
  return out;
}

FeatureGrid concat_channels(const std::vector<FeatureGrid>& grids) {
  if (grids.empty()) raise(ErrorCode::EmptyMap, "nothing to concatenate");
  int channels = 0;
  for (const FeatureGrid& g : grids) {
    if (g.height != grids.front().height || g.width != grids.front().width)
      raise(ErrorCode::ShapeMismatch, "concatenation inputs have different spatial sizes");
    channels += g.channels;
  }
  FeatureGrid out(channels, grids.front().height, grids.front().width);
  auto dst = out.values.begin();
  for (const FeatureGrid& g : grids) dst = std::copy(g.values.begin(), g.values.end(), dst);
  return out;
}

FeatureGrid relu(FeatureGrid g) {
  for (double& v : g.values) v = std::max(v, 0.0);
  return g;
}

FeatureGrid leaky_relu(FeatureGrid g, double slope) {
  for (double& v : g.values) v = v >= 0.0 ? v : slope * v;
  return g;
}

namespace {

FeatureGrid project_1x1(const FeatureGrid& g, const std::vector<double>& weights, double bias) {
  if (weights.size() != static_cast<std::size_t>(g.channels))
    raise(ErrorCode::WeightShapeMismatch,
          "projection expects " + std::to_string(g.channels) + " weights, got " +
              std::to_string(weights.size()));
  FeatureGrid out(1, g.height, g.width);
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      double acc = bias;
      for (int c = 0; c < g.channels; ++c) acc += weights[c] * g.at(c, y, x);
      out.at(0, y, x) = acc;
    }
  }
  return out;
}

DensityMap to_density(const FeatureGrid& g) {
  DensityMap out(g.width, g.height);
  out.values = g.values;
  return out;
}

}  // namespace

DensityMap readout(const FeatureGrid& g, const ReadoutSpec& spec, const ReadoutWeights& weights) {
  if ((spec.n_layers == 0) != (spec.upsample_kind == UpsampleKind::none))
    raise(ErrorCode::InvalidSpec, "n_layers must be 0 exactly when upsample_kind is none");
  if (spec.n_layers < 0 || spec.n_layers > 3)
    raise(ErrorCode::InvalidSpec, "n_layers must be in 0..3");

  switch (spec.upsample_kind) {
    case UpsampleKind::none: {
      const FeatureGrid projected =
          leaky_relu(project_1x1(g, weights.proj_weights, weights.proj_bias), spec.leaky_slope);
      return to_density(projected);
    }
    case UpsampleKind::bilinear: {
      // projection first, then the upsampling layers
      if (!weights.upsample_convs.empty())
        raise(ErrorCode::WeightShapeMismatch, "bilinear readout takes no upsample kernels");
      FeatureGrid grid =
          leaky_relu(project_1x1(g, weights.proj_weights, weights.proj_bias), spec.leaky_slope);
      for (int layer = 0; layer < spec.n_layers; ++layer)
        grid = bilinear_resize(grid, grid.height * 2, grid.width * 2);
      return to_density(grid);
    }
    case UpsampleKind::deconv: {
      if (static_cast<int>(weights.upsample_convs.size()) != spec.n_layers)
        raise(ErrorCode::WeightShapeMismatch, "deconv readout needs one 4x4 kernel per layer");
      FeatureGrid grid = g;
      for (const ConvWeights& kernel : weights.upsample_convs) {
        if (kernel.kh != 4 || kernel.kw != 4)
          raise(ErrorCode::KernelShapeMismatch, "deconv readout kernels are 4x4");
        grid = relu(transposed_conv2d(grid, kernel, 2, 1));
      }
      return to_density(
          leaky_relu(project_1x1(grid, weights.proj_weights, weights.proj_bias), spec.leaky_slope));
    }
    case UpsampleKind::subpixel: {
      if (static_cast<int>(weights.upsample_convs.size()) != spec.n_layers)
        raise(ErrorCode::WeightShapeMismatch, "subpixel readout needs one 3x3 conv per layer");
      FeatureGrid grid = g;
      for (const ConvWeights& kernel : weights.upsample_convs) {
        if (kernel.kh != 3 || kernel.kw != 3)
          raise(ErrorCode::KernelShapeMismatch, "subpixel readout convs are 3x3");
        grid = relu(conv2d(subpixel_shuffle(grid, 2), kernel, 1));
      }
      return to_density(
          leaky_relu(project_1x1(grid, weights.proj_weights, weights.proj_bias), spec.leaky_slope));
    }
  }
  raise(ErrorCode::InvalidSpec, "unknown upsample kind");
}

}  // namespace saleval
