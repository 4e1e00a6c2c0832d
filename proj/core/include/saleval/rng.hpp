#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace saleval {

/// Deterministic, platform-independent random stream (xoshiro256++ seeded
/// via splitmix64). Identical seeds produce bit-identical draw sequences on
/// every platform, which is what makes AUC-Borji/sAUC scores reproducible.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Unbiased integer in [0, bound) via rejection sampling. bound >= 1.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform_unit();

 private:
  std::array<std::uint64_t, 4> state_;
};

std::uint64_t fnv1a64(std::string_view data);

/// Master seed from which per-image, per-purpose substreams are derived.
/// Substreams for distinct (image_id, purpose) pairs are independent, so
/// images can be evaluated in any order or in parallel without changing
/// any score.
struct SeededRng {
  std::uint64_t master_seed = 0;

  RngStream stream(std::string_view image_id, std::string_view purpose) const;
};

}  // namespace saleval
