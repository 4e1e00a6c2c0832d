#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "saleval/resample.hpp"

namespace saleval {

/// Exact size fraction relative to the network input (e.g. 1/16).
struct Fraction {
  long long num = 1;
  long long den = 1;

  static Fraction of(long long num, long long den);
  Fraction times(long long num, long long den) const;
  double value() const { return static_cast<double>(num) / den; }
  std::string str() const;
  bool operator==(const Fraction&) const = default;
};

enum class BlockKind { standard, residual, dense, dual_path };

struct BlockSpec {
  BlockKind kind = BlockKind::standard;
  int layers = 1;          // L
  int growth = 0;          // K, dense/dual-path growth rate
  int residual_width = 0;  // R, dual-path residual width
  int out_channels = 0;    // standard/residual blocks
  int stride = 1;
  int dilation = 1;
};

struct StageSpec {
  enum class Kind { conv, pool, block, concat_multipath, readout };
  Kind kind = Kind::conv;
  int out_channels = 0;  // conv
  int kernel = 1;        // conv/pool, informational
  int stride = 1;        // conv/pool
  BlockSpec block;       // block
  int n_upsample = 0;    // readout
};

struct NetworkSpec {
  std::string name;
  std::vector<StageSpec> stages;
};

struct PlanRow {
  std::string stage;
  std::string detail;
  long long channels = 0;
  Fraction size;
};

struct LayerPlan {
  std::string model;
  std::vector<PlanRow> rows;
};

/// Output width of a dense block: H + K*L.
long long dense_block_channels(long long h_in, int layers, int growth);

/// Output width of a dual-path block: R + (L+2)*K. The densely connected
/// path is seeded at 2K and grows by K per layer.
long long dual_path_block_channels(int residual_width, int layers, int growth);

/// Computes the per-stage channel/size table for a network spec. Size
/// fractions are the running product of declared strides and must be
/// non-increasing until the readout stage.
LayerPlan plan_network(const NetworkSpec& spec);

/// Parses the declarative plan format: one directive per line
/// (model/conv/pool/dense_block/dual_block/block/concat_multipath/readout).
NetworkSpec parse_network_spec(std::string_view text);

struct ExpectEntry {
  std::string stage;
  long long channels = 0;
  Fraction size;
  bool suspect = false;  // known-disputed reference value: report, don't fail
};

/// Parses an expectation file: `<stage> <channels> <fraction> [suspect]`.
std::vector<ExpectEntry> parse_expect(std::string_view text);

struct ExpectRowResult {
  std::string stage;
  long long expected_channels = 0;
  long long computed_channels = 0;
  Fraction expected_size;
  Fraction computed_size;
  bool matches = false;
  bool suspect = false;
};

struct ExpectOutcome {
  std::vector<ExpectRowResult> rows;
  int mismatches = 0;          // on rows not marked suspect
  int flagged_mismatches = 0;  // on suspect rows
};

ExpectOutcome check_plan(const LayerPlan& plan, const std::vector<ExpectEntry>& expected);

std::string to_text_table(const LayerPlan& plan);

// ---- desk-scale forward semantics -----------------------------------------

/// Batch norm folded to a fixed per-channel affine map (inference mode).
struct AffineNorm {
  std::vector<double> scale;
  std::vector<double> shift;
};

FeatureGrid affine_norm(const FeatureGrid& g, const AffineNorm& norm);

/// Bottleneck residual mapping: 1x1 -> BN -> ReLU -> 3x3 -> BN -> ReLU ->
/// 1x1 -> BN, added to the identity path.
struct ResidualBottleneckWeights {
  ConvWeights reduce1x1;
  AffineNorm bn1;
  ConvWeights conv3x3;
  AffineNorm bn2;
  ConvWeights expand1x1;
  AffineNorm bn3;
};

FeatureGrid residual_forward(const FeatureGrid& x, const ResidualBottleneckWeights& w);

/// Basic two-layer variant: ReLU -> 3x3 -> BN -> ReLU -> 3x3 -> BN, plus
/// the identity path.
struct ResidualBasicWeights {
  ConvWeights conv3x3_a;
  AffineNorm bn1;
  ConvWeights conv3x3_b;
  AffineNorm bn2;
};

FeatureGrid residual_forward_basic(const FeatureGrid& x, const ResidualBasicWeights& w);

/// Dense layer: BN -> ReLU -> 1x1 (to 4K) -> BN -> ReLU -> 3x3 (to K),
/// applied to the channel concatenation of all previous outputs. Returns
/// the K new channels; the caller re-concatenates.
struct DenseLayerWeights {
  AffineNorm bn1;
  ConvWeights reduce1x1;  // out_channels must be 4 * conv3x3.out_channels
  AffineNorm bn2;
  ConvWeights conv3x3;
};

FeatureGrid dense_forward(const std::vector<FeatureGrid>& inputs, const DenseLayerWeights& w);

/// Routes a dual-path layer output: the first R channels are added to the
/// residual part, the remaining K channels extend the dense part.
std::pair<FeatureGrid, FeatureGrid> dual_path_forward(const FeatureGrid& res_part,
                                                      const FeatureGrid& dense_part,
                                                      const FeatureGrid& conv_out);

}  // namespace saleval
