#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "saleval/core_types.hpp"

namespace saleval {

/// Canonical metric order used for report rows and table columns.
const std::vector<std::string>& all_metric_names();
bool is_lower_better(const std::string& metric);
std::string metric_display_name(const std::string& metric);

struct EvalRecord {
  std::string model;
  std::string image;
  std::string metric;
  double score = 0.0;
  std::string flags;  // "", "degenerate", or "error:<Code>"
};

struct ReportConfig {
  std::uint64_t seed = 0;
  int splits = 100;
  int emd_max_side = 32;
  double sigma_degrees = 1.0;
  std::vector<std::string> metrics;
};

struct EvalReport {
  ReportConfig config;
  std::vector<EvalRecord> records;  // (model, image, metric) keys are unique
};

struct AggregateRow {
  std::string model;
  std::string metric;
  double mean = 0.0;  // over images with a valid score
  int n_images = 0;   // images contributing to the mean
  int n_flagged = 0;  // degenerate or error rows
};

/// Unweighted arithmetic mean over images per (model, metric). Degenerate
/// rows keep their sentinel scores and are counted in n_flagged; error rows
/// are excluded from the mean but counted.
std::vector<AggregateRow> aggregate(const EvalReport& report);

struct CorrelationPoint {
  std::string model;
  double x = 0.0;
  double y = 0.0;
};

struct CorrelationStudy {
  std::vector<CorrelationPoint> points;
  std::string metric_name;
};

struct PearsonResult {
  double r = 0.0;
  double p = 1.0;  // two-sided, from the t distribution with n-2 dof
  int n = 0;
};

PearsonResult pearson(const std::vector<CorrelationPoint>& points);

struct ComparisonCell {
  double mean = 0.0;
  int n_images = 0;
  int n_flagged = 0;
  bool best = false;
  bool present = false;
};

struct ComparisonTable {
  std::vector<std::string> metrics;             // canonical order
  std::vector<std::string> models;              // baseline first when given
  std::string baseline;
  std::map<std::string, std::map<std::string, ComparisonCell>> cells;  // model -> metric -> cell
};

/// Merges reports, checks that models share image sets, and marks the best
/// model per metric (lower is better for kl and emd).
ComparisonTable compare_models(const std::vector<EvalReport>& reports,
                               const std::string& baseline_id = {});

std::string to_markdown(const ComparisonTable& table);
std::string aggregate_markdown(const EvalReport& report);

}  // namespace saleval
