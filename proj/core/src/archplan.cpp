#include "saleval/archplan.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

namespace saleval {

Fraction Fraction::of(long long num, long long den) {
  if (den == 0) raise(ErrorCode::InvalidSpec, "fraction with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  return {g ? num / g : num, g ? den / g : den};
}

Fraction Fraction::times(long long n, long long d) const { return Fraction::of(num * n, den * d); }

std::string Fraction::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

long long dense_block_channels(long long h_in, int layers, int growth) {
  if (h_in < 1 || layers < 0 || growth < 1)
    raise(ErrorCode::InvalidSpec, "dense block needs H >= 1, L >= 0, K >= 1");
  return h_in + static_cast<long long>(growth) * layers;
}

long long dual_path_block_channels(int residual_width, int layers, int growth) {
  if (residual_width < 1 || layers < 1 || growth < 1)
    raise(ErrorCode::InvalidSpec, "dual-path block needs R >= 1, L >= 1, K >= 1");
  // dense path starts at 2K and gains K per layer
  return residual_width + static_cast<long long>(layers + 2) * growth;
}

namespace {

void check_stride(int stride) {
  if (stride != 1 && stride != 2) raise(ErrorCode::InvalidSpec, "stride must be 1 or 2");
}

std::string block_detail(const BlockSpec& b) {
  std::ostringstream os;
  switch (b.kind) {
    case BlockKind::dense:
      os << "L=" << b.layers << " K=" << b.growth;
      break;
    case BlockKind::dual_path:
      os << "R=" << b.residual_width << " L=" << b.layers << " K=" << b.growth << " stride="
         << b.stride;
      if (b.dilation > 1) os << " dilation=" << b.dilation;
      break;
    case BlockKind::standard:
    case BlockKind::residual:
      os << "out=" << b.out_channels << " stride=" << b.stride;
      break;
  }
  return os.str();
}

}  // namespace

LayerPlan plan_network(const NetworkSpec& spec) {
  LayerPlan plan;
  plan.model = spec.name;
  long long channels = 0;
  Fraction size{1, 1};
  bool seen_readout = false;

  for (const StageSpec& stage : spec.stages) {
    if (seen_readout) raise(ErrorCode::InvalidSpec, "readout must be the last stage");
    PlanRow row;
    switch (stage.kind) {
      case StageSpec::Kind::conv: {
        check_stride(stage.stride);
        if (stage.out_channels < 1) raise(ErrorCode::InvalidSpec, "conv needs out channels");
        channels = stage.out_channels;
        size = size.times(1, stage.stride);
        row = {"conv",
               std::to_string(stage.kernel) + "x" + std::to_string(stage.kernel) +
                   " stride=" + std::to_string(stage.stride),
               channels, size};
        break;
      }
      case StageSpec::Kind::pool: {
        check_stride(stage.stride);
        if (channels < 1) raise(ErrorCode::InvalidSpec, "pool before any channel-producing stage");
        size = size.times(1, stage.stride);
        row = {"pool",
               std::to_string(stage.kernel) + "x" + std::to_string(stage.kernel) +
                   " stride=" + std::to_string(stage.stride),
               channels, size};
        break;
      }
      case StageSpec::Kind::block: {
        const BlockSpec& b = stage.block;
        check_stride(b.stride);
        switch (b.kind) {
          case BlockKind::dense:
            if (channels < 1) raise(ErrorCode::InvalidSpec, "dense block needs input channels");
            if (b.stride != 1) raise(ErrorCode::InvalidSpec, "dense blocks do not stride");
            channels = dense_block_channels(channels, b.layers, b.growth);
            row = {"dense_block", block_detail(b), channels, size};
            break;
          case BlockKind::dual_path:
            channels = dual_path_block_channels(b.residual_width, b.layers, b.growth);
            size = size.times(1, b.stride);
            row = {"dual_block", block_detail(b), channels, size};
            break;
          case BlockKind::standard:
          case BlockKind::residual:
            if (b.out_channels < 1) raise(ErrorCode::InvalidSpec, "block needs out channels");
            channels = b.out_channels;
            size = size.times(1, b.stride);
            row = {"block", block_detail(b), channels, size};
            break;
        }
        break;
      }
      case StageSpec::Kind::concat_multipath: {
        if (channels < 1) raise(ErrorCode::InvalidSpec, "concatenation before any stage");
        // the half-scale path is resized to the full path's grid, so the
        // size fraction stays put while channels double
        channels *= 2;
        row = {"concat", "x1.0 + x0.5 paths", channels, size};
        break;
      }
      case StageSpec::Kind::readout: {
        if (channels < 1) raise(ErrorCode::InvalidSpec, "readout before any stage");
        if (stage.n_upsample < 0 || stage.n_upsample > 3)
          raise(ErrorCode::InvalidSpec, "readout N must be in 0..3");
        channels = 1;
        size = size.times(1LL << stage.n_upsample, 1);
        row = {"readout", "N=" + std::to_string(stage.n_upsample), channels, size};
        seen_readout = true;
        break;
      }
    }
    if (!plan.rows.empty() && !seen_readout) {
      const Fraction& prev = plan.rows.back().size;
      if (size.value() > prev.value() + 1e-15)
        raise(ErrorCode::InvalidSpec, "size fraction increased before readout");
    }
    plan.rows.push_back(std::move(row));
  }
  return plan;
}

namespace {

[[noreturn]] void parse_fail(int line_no, const std::string& what) {
  raise(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + what);
}

long long parse_int(const std::string& token, int line_no) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    parse_fail(line_no, "expected integer, got '" + token + "'");
  return value;
}

// splits "key=value" tokens into a small lookup
struct KeyValues {
  std::vector<std::pair<std::string, std::string>> items;
  int line_no = 0;

  bool has(const std::string& key) const {
    return std::any_of(items.begin(), items.end(),
                       [&](const auto& kv) { return kv.first == key; });
  }
  std::string get(const std::string& key) const {
    for (const auto& [k, v] : items)
      if (k == key) return v;
    parse_fail(line_no, "missing " + key + "=");
  }
  long long get_int(const std::string& key) const { return parse_int(get(key), line_no); }
  long long get_int_or(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
  }
};

int parse_kernel(const std::string& token, int line_no) {
  const auto x = token.find('x');
  if (x == std::string::npos) parse_fail(line_no, "kernel must look like 3x3");
  const long long a = parse_int(token.substr(0, x), line_no);
  const long long b = parse_int(token.substr(x + 1), line_no);
  if (a != b) parse_fail(line_no, "only square kernels are supported");
  return static_cast<int>(a);
}

Fraction parse_fraction(const std::string& token, int line_no) {
  const auto slash = token.find('/');
  if (slash == std::string::npos) return Fraction::of(parse_int(token, line_no), 1);
  return Fraction::of(parse_int(token.substr(0, slash), line_no),
                      parse_int(token.substr(slash + 1), line_no));
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) {
    if (tok[0] == '#') break;
    tokens.push_back(tok);
  }
  return tokens;
}

}  // namespace

NetworkSpec parse_network_spec(std::string_view text) {
  NetworkSpec spec;
  std::istringstream stream{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const std::vector<std::string> tokens = tokenize(line);
    if (tokens.empty()) continue;
    const std::string& head = tokens[0];
    if (head == "model") {
      if (tokens.size() != 2) parse_fail(line_no, "model takes one name");
      spec.name = tokens[1];
      continue;
    }

    KeyValues kv;
    kv.line_no = line_no;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      const auto eq = tokens[i].find('=');
      if (eq == std::string::npos) parse_fail(line_no, "expected key=value, got '" + tokens[i] + "'");
      kv.items.emplace_back(tokens[i].substr(0, eq), tokens[i].substr(eq + 1));
    }

    StageSpec stage;
    if (head == "conv") {
      stage.kind = StageSpec::Kind::conv;
      stage.out_channels = static_cast<int>(kv.get_int("out"));
      stage.kernel = parse_kernel(kv.get("kernel"), line_no);
      stage.stride = static_cast<int>(kv.get_int_or("stride", 1));
    } else if (head == "pool") {
      stage.kind = StageSpec::Kind::pool;
      stage.kernel = parse_kernel(kv.get("kernel"), line_no);
      stage.stride = static_cast<int>(kv.get_int_or("stride", 1));
    } else if (head == "dense_block") {
      stage.kind = StageSpec::Kind::block;
      stage.block.kind = BlockKind::dense;
      stage.block.layers = static_cast<int>(kv.get_int("L"));
      stage.block.growth = static_cast<int>(kv.get_int("K"));
    } else if (head == "dual_block") {
      stage.kind = StageSpec::Kind::block;
      stage.block.kind = BlockKind::dual_path;
      stage.block.residual_width = static_cast<int>(kv.get_int("R"));
      stage.block.layers = static_cast<int>(kv.get_int("L"));
      stage.block.growth = static_cast<int>(kv.get_int("K"));
      stage.block.stride = static_cast<int>(kv.get_int_or("stride", 1));
      stage.block.dilation = static_cast<int>(kv.get_int_or("dilation", 1));
    } else if (head == "block") {
      stage.kind = StageSpec::Kind::block;
      const std::string kind = kv.get("kind");
      if (kind == "standard")
        stage.block.kind = BlockKind::standard;
      else if (kind == "residual")
        stage.block.kind = BlockKind::residual;
      else
        parse_fail(line_no, "block kind must be standard or residual");
      stage.block.out_channels = static_cast<int>(kv.get_int("out"));
      stage.block.stride = static_cast<int>(kv.get_int_or("stride", 1));
    } else if (head == "concat_multipath") {
      stage.kind = StageSpec::Kind::concat_multipath;
    } else if (head == "readout") {
      stage.kind = StageSpec::Kind::readout;
      stage.n_upsample = static_cast<int>(kv.get_int_or("N", 0));
    } else {
      parse_fail(line_no, "unknown directive '" + head + "'");
    }
    spec.stages.push_back(stage);
  }
  if (spec.stages.empty()) raise(ErrorCode::InvalidSpec, "plan file declares no stages");
  return spec;
}

std::vector<ExpectEntry> parse_expect(std::string_view text) {
  std::vector<ExpectEntry> entries;
  std::istringstream stream{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const std::vector<std::string> tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() < 3 || tokens.size() > 4)
      parse_fail(line_no, "expected '<stage> <channels> <fraction> [suspect]'");
    ExpectEntry entry;
    entry.stage = tokens[0];
    entry.channels = parse_int(tokens[1], line_no);
    entry.size = parse_fraction(tokens[2], line_no);
    if (tokens.size() == 4) {
      if (tokens[3] != "suspect") parse_fail(line_no, "unknown marker '" + tokens[3] + "'");
      entry.suspect = true;
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

ExpectOutcome check_plan(const LayerPlan& plan, const std::vector<ExpectEntry>& expected) {
  if (plan.rows.size() != expected.size())
    raise(ErrorCode::InvalidSpec, "expectation has " + std::to_string(expected.size()) +
                                      " rows but plan has " + std::to_string(plan.rows.size()));
  ExpectOutcome outcome;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const PlanRow& row = plan.rows[i];
    const ExpectEntry& want = expected[i];
    ExpectRowResult result;
    result.stage = row.stage;
    result.expected_channels = want.channels;
    result.computed_channels = row.channels;
    result.expected_size = want.size;
    result.computed_size = row.size;
    result.suspect = want.suspect;
    result.matches =
        row.stage == want.stage && row.channels == want.channels && row.size == want.size;
    if (!result.matches) {
      if (want.suspect)
        ++outcome.flagged_mismatches;
      else
        ++outcome.mismatches;
    }
    outcome.rows.push_back(std::move(result));
  }
  return outcome;
}

std::string to_text_table(const LayerPlan& plan) {
  std::ostringstream os;
  os << "model: " << (plan.model.empty() ? "(unnamed)" : plan.model) << "\n";
  std::size_t stage_w = 5, detail_w = 0;
  for (const PlanRow& row : plan.rows) {
    stage_w = std::max(stage_w, row.stage.size());
    detail_w = std::max(detail_w, row.detail.size());
  }
  for (const PlanRow& row : plan.rows) {
    os << "  " << row.stage << std::string(stage_w - row.stage.size() + 2, ' ') << row.detail
       << std::string(detail_w - row.detail.size() + 2, ' ') << row.channels << "\t" << row.size.str()
       << "\n";
  }
  return os.str();
}

// ---- forward semantics -----------------------------------------------------

namespace {

void check_norm(const AffineNorm& norm, int channels, const char* where) {
  if (norm.scale.size() != static_cast<std::size_t>(channels) ||
      norm.shift.size() != static_cast<std::size_t>(channels))
    raise(ErrorCode::WeightShapeMismatch, std::string(where) + ": affine norm channel mismatch");
}

}  // namespace

FeatureGrid affine_norm(const FeatureGrid& g, const AffineNorm& norm) {
  check_norm(norm, g.channels, "affine_norm");
  FeatureGrid out = g;
  const std::size_t plane = static_cast<std::size_t>(g.height) * g.width;
  for (int c = 0; c < g.channels; ++c) {
    const double s = norm.scale[c];
    const double b = norm.shift[c];
    for (std::size_t i = 0; i < plane; ++i) out.values[c * plane + i] = s * g.values[c * plane + i] + b;
  }
  return out;
}

FeatureGrid residual_forward(const FeatureGrid& x, const ResidualBottleneckWeights& w) {
  FeatureGrid t = conv2d(x, w.reduce1x1, 0);
  t = relu(affine_norm(t, w.bn1));
  t = conv2d(t, w.conv3x3, 1);
  t = relu(affine_norm(t, w.bn2));
  t = conv2d(t, w.expand1x1, 0);
  t = affine_norm(t, w.bn3);
  if (t.channels != x.channels || t.height != x.height || t.width != x.width)
    raise(ErrorCode::ShapeMismatch, "residual mapping must preserve the input shape");
  FeatureGrid out = t;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += x.values[i];
  return out;
}

FeatureGrid residual_forward_basic(const FeatureGrid& x, const ResidualBasicWeights& w) {
  FeatureGrid t = relu(x);
  t = conv2d(t, w.conv3x3_a, 1);
  t = relu(affine_norm(t, w.bn1));
  t = conv2d(t, w.conv3x3_b, 1);
  t = affine_norm(t, w.bn2);
  if (t.channels != x.channels || t.height != x.height || t.width != x.width)
    raise(ErrorCode::ShapeMismatch, "residual mapping must preserve the input shape");
  FeatureGrid out = t;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += x.values[i];
  return out;
}

FeatureGrid dense_forward(const std::vector<FeatureGrid>& inputs, const DenseLayerWeights& w) {
  const FeatureGrid concat = concat_channels(inputs);
  if (w.reduce1x1.out_channels != 4 * w.conv3x3.out_channels)
    raise(ErrorCode::WeightShapeMismatch, "dense layer reduces to 4K channels before the 3x3");
  FeatureGrid t = relu(affine_norm(concat, w.bn1));
  t = conv2d(t, w.reduce1x1, 0);
  t = relu(affine_norm(t, w.bn2));
  t = conv2d(t, w.conv3x3, 1);
  return t;
}

std::pair<FeatureGrid, FeatureGrid> dual_path_forward(const FeatureGrid& res_part,
                                                      const FeatureGrid& dense_part,
                                                      const FeatureGrid& conv_out) {
  if (conv_out.height != res_part.height || conv_out.width != res_part.width ||
      dense_part.height != res_part.height || dense_part.width != res_part.width)
    raise(ErrorCode::SplitMismatch, "dual-path parts disagree on spatial size");
  const int r = res_part.channels;
  const int k = conv_out.channels - r;
  if (k < 1)
    raise(ErrorCode::SplitMismatch, "conv output must split into R residual plus K dense channels");

  const std::size_t plane = static_cast<std::size_t>(res_part.height) * res_part.width;
  FeatureGrid res_out = res_part;
  for (std::size_t i = 0; i < static_cast<std::size_t>(r) * plane; ++i)
    res_out.values[i] += conv_out.values[i];

  FeatureGrid growth(k, conv_out.height, conv_out.width);
  std::copy(conv_out.values.begin() + static_cast<std::ptrdiff_t>(r * plane),
            conv_out.values.end(), growth.values.begin());
  return {std::move(res_out), concat_channels({dense_part, growth})};
}

}  // namespace saleval
