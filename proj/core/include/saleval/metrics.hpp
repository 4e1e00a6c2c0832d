#pragma once

#include <vector>

#include "saleval/core_types.hpp"
#include "saleval/rng.hpp"

namespace saleval {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

/// TPR-against-FPR curve, sorted by fpr and augmented with (0,0) and (1,1).
struct RocCurve {
  std::vector<RocPoint> points;
  double area() const;  // trapezoidal integration
};

struct AucConfig {
  int n_splits = 100;
  RngStream stream{0};  // derive via SeededRng::stream(image_id, purpose)
};

/// Score plus a degenerate marker. Constant (zero-information) maps yield
/// sentinel scores (AUC 0.5, NSS 0, CC 0) with degenerate=true instead of
/// aborting a batch run.
struct MetricResult {
  double score = 0.0;
  bool degenerate = false;
};

// epsilon used by the KL metric, matching the common benchmark convention
inline constexpr double kKlEpsilon = 2.2204e-16;

/// ROC curve thresholded at the saliency values of fixated pixels only;
/// FPR counts non-fixated pixels above threshold.
RocCurve judd_roc(const DensityMap& sal, const FixationSet& fix);

MetricResult auc_judd(const DensityMap& sal, const FixationSet& fix);

/// AUC with negatives sampled uniformly with replacement over all pixels,
/// |fix| samples per split, averaged over cfg.n_splits splits.
MetricResult auc_borji(const DensityMap& sal, const FixationSet& fix, AucConfig cfg);

/// Shuffled AUC: negatives sampled from fixation locations of other images
/// (clamped into this image's bounds), which cancels the center bias.
MetricResult sauc(const DensityMap& sal, const FixationSet& fix,
                  const FixationSet& negative_pool, AucConfig cfg);

/// Mean of the z-scored saliency map at fixation pixels (population std).
MetricResult nss(const DensityMap& sal, const FixationSet& fix);

/// Pearson linear correlation over all pixels.
MetricResult cc(const DensityMap& sal, const DensityMap& gt);

/// Sum over pixels of min(sal, gt) after normalizing both to sum 1.
MetricResult sim(const DensityMap& sal, const DensityMap& gt);

/// KL(ground truth || prediction) after normalizing both to sum 1.
MetricResult kl(const DensityMap& gt, const DensityMap& sal);

}  // namespace saleval
