#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "saleval/error.hpp"

namespace saleval {

/// Row-major 2-D grid of non-negative density values. Serves both for
/// predicted saliency maps and for fixation-derived ground-truth maps.
/// Construction only checks size consistency; value-level invariants are
/// checked explicitly by validate_map().
struct DensityMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // values[y * width + x]
  bool normalized = false;     // set when the map sums to 1 within 1e-9

  DensityMap() = default;
  DensityMap(int w, int h);
  DensityMap(int w, int h, std::vector<double> v);

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
  std::size_t size() const { return values.size(); }
  double total() const;
};

struct Fixation {
  int x = 0;  // column, zero-based, origin top-left
  int y = 0;  // row
  std::string observer;
};

struct FixationSet {
  std::vector<Fixation> points;
  int image_width = 0;
  int image_height = 0;
};

struct ManifestEntry {
  std::string image_id;
  int width = 0;
  int height = 0;
  double pixels_per_degree = 0.0;
  std::string fixation_path;
  // model name -> map path, kept sorted by model name
  std::vector<std::pair<std::string, std::string>> map_paths;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
};

struct ValidationResult {
  bool ok = true;
  ErrorCode code = ErrorCode::EmptyMap;  // meaningful only when !ok
  std::string message;
};

/// Accepts iff all DensityMap invariants hold; reports the first violation
/// (zero size, non-finite value, negative value) without throwing.
ValidationResult validate_map(const DensityMap& map);

/// Rescales the map so its values sum to 1. Throws ZeroMass when the input
/// has no mass.
DensityMap normalize_to_distribution(const DensityMap& map);

}  // namespace saleval
