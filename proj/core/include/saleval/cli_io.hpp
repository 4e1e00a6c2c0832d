#pragma once

#include <string>
#include <vector>

#include "saleval/analysis.hpp"
#include "saleval/core_types.hpp"
#include "saleval/emd.hpp"
#include "saleval/gtgen.hpp"

namespace saleval {

enum class MapFileFormat { binary, text };

/// Reads a saliency/density map. Binary files start with the magic "FBM1"
/// followed by little-endian u32 width, u32 height and width*height
/// little-endian doubles in row-major order; anything else is parsed as a
/// CSV grid of reals (one text row per image row).
DensityMap read_map_file(const std::string& path);

/// Binary round-trips are bit-exact.
void write_map_file(const std::string& path, const DensityMap& map, MapFileFormat format);

/// CSV with the exact header `x,y,observer`. Fractional coordinates are
/// rounded to the nearest pixel (ties round half up) and must land in
/// bounds.
FixationSet read_fixation_file(const std::string& path, int image_width, int image_height);

void write_fixation_file(const std::string& path, const FixationSet& fix);

/// JSON manifest: {"images": [{"image_id", "width", "height",
/// "pixels_per_degree", "fixation_path", "map_paths": {model: path}}]}.
/// Relative paths are resolved against the manifest's directory.
DatasetManifest load_manifest(const std::string& path);

struct EvalOptions {
  std::uint64_t seed = 0;
  int splits = 100;
  int emd_max_side = 32;
  bool emd_downsample = true;
  double sigma_degrees = 1.0;
  std::vector<std::string> metrics;  // empty = all eight
  std::vector<std::string> models;   // empty = every model in the manifest
  int jobs = 0;                      // 0 = hardware concurrency
};

/// Evaluates every requested (model, image, metric) triple. Ground truth is
/// built from the fixations per manifest entry. Per-image failures become
/// error-flagged rows instead of aborting the run; results are identical for
/// any job count.
EvalReport run_eval(const DatasetManifest& manifest, const EvalOptions& options);

/// Exact columns `model,image,metric,score,flags`, rows sorted by
/// (model, image, metric rank). Scores use shortest round-trip formatting,
/// so equal runs produce byte-identical files.
std::string report_to_csv(const EvalReport& report);
void write_report_csv(const std::string& path, const EvalReport& report);
EvalReport read_report_csv(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace saleval
