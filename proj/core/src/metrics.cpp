#include "saleval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace saleval {
namespace {

void check_shapes(const DensityMap& sal, const FixationSet& fix) {
  if (sal.width != fix.image_width || sal.height != fix.image_height)
    raise(ErrorCode::ShapeMismatch, "saliency map and fixation set disagree on image size");
  for (const Fixation& p : fix.points)
    if (p.x < 0 || p.x >= sal.width || p.y < 0 || p.y >= sal.height)
      raise(ErrorCode::OutOfBounds, "fixation outside the image");
}

void check_shapes(const DensityMap& a, const DensityMap& b) {
  if (a.width != b.width || a.height != b.height)
    raise(ErrorCode::ShapeMismatch, "maps have different dimensions");
}

bool is_constant(const DensityMap& m) {
  const auto [lo, hi] = std::minmax_element(m.values.begin(), m.values.end());
  return *lo == *hi;
}

std::vector<double> values_at_fixations(const DensityMap& sal, const FixationSet& fix) {
  std::vector<double> vals;
  vals.reserve(fix.points.size());
  for (const Fixation& p : fix.points) vals.push_back(sal.at(p.x, p.y));
  return vals;
}

double count_at_least(const std::vector<double>& sorted_asc, double threshold) {
  const auto it = std::lower_bound(sorted_asc.begin(), sorted_asc.end(), threshold);
  return static_cast<double>(sorted_asc.end() - it);
}

// Threshold sweep shared by all AUC variants. Thresholds must be distinct
// and sorted descending so the curve runs from (0,0) to (1,1).
RocCurve sweep_curve(const std::vector<double>& thresholds_desc,
                     const std::vector<double>& pos_sorted_asc,
                     const std::vector<double>& neg_sorted_asc) {
  RocCurve curve;
  curve.points.reserve(thresholds_desc.size() + 2);
  curve.points.push_back({0.0, 0.0});
  const double n_pos = static_cast<double>(pos_sorted_asc.size());
  const double n_neg = static_cast<double>(neg_sorted_asc.size());
  for (double t : thresholds_desc) {
    const double tpr = n_pos > 0 ? count_at_least(pos_sorted_asc, t) / n_pos : 0.0;
    const double fpr = n_neg > 0 ? count_at_least(neg_sorted_asc, t) / n_neg : 0.0;
    curve.points.push_back({fpr, tpr});
  }
  curve.points.push_back({1.0, 1.0});
  return curve;
}

std::vector<double> distinct_descending(std::vector<double> values) {
  std::sort(values.begin(), values.end(), std::greater<>());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

}  // namespace

double RocCurve::area() const {
  double area = 0.0;
  for (std::size_t k = 1; k < points.size(); ++k) {
    area += (points[k].fpr - points[k - 1].fpr) * (points[k].tpr + points[k - 1].tpr) * 0.5;
  }
  return area;
}

RocCurve judd_roc(const DensityMap& sal, const FixationSet& fix) {
  check_shapes(sal, fix);
  if (fix.points.empty()) raise(ErrorCode::EmptyFixations, "AUC-Judd needs fixations");

  std::vector<char> fixated(sal.values.size(), 0);
  for (const Fixation& p : fix.points)
    fixated[static_cast<std::size_t>(p.y) * sal.width + p.x] = 1;

  std::vector<double> positives = values_at_fixations(sal, fix);
  std::vector<double> negatives;
  negatives.reserve(sal.values.size());
  for (std::size_t i = 0; i < sal.values.size(); ++i)
    if (!fixated[i]) negatives.push_back(sal.values[i]);

  const std::vector<double> thresholds = distinct_descending(positives);
  std::sort(positives.begin(), positives.end());
  std::sort(negatives.begin(), negatives.end());
  return sweep_curve(thresholds, positives, negatives);
}

MetricResult auc_judd(const DensityMap& sal, const FixationSet& fix) {
  check_shapes(sal, fix);
  if (fix.points.empty()) raise(ErrorCode::EmptyFixations, "AUC-Judd needs fixations");
  if (is_constant(sal)) return {0.5, true};
  return {judd_roc(sal, fix).area(), false};
}

MetricResult auc_borji(const DensityMap& sal, const FixationSet& fix, AucConfig cfg) {
  check_shapes(sal, fix);
  if (fix.points.empty()) raise(ErrorCode::EmptyFixations, "AUC-Borji needs fixations");
  if (cfg.n_splits < 1) raise(ErrorCode::InvalidSpec, "n_splits must be >= 1");
  if (is_constant(sal)) return {0.5, true};

  std::vector<double> positives = values_at_fixations(sal, fix);
  std::vector<double> pos_sorted = positives;
  std::sort(pos_sorted.begin(), pos_sorted.end());

  const std::uint64_t n_pixels =
      static_cast<std::uint64_t>(sal.width) * static_cast<std::uint64_t>(sal.height);
  const std::size_t n_fix = fix.points.size();

  double area_sum = 0.0;
  std::vector<double> negatives(n_fix);
  for (int split = 0; split < cfg.n_splits; ++split) {
    for (std::size_t k = 0; k < n_fix; ++k)
      negatives[k] = sal.values[cfg.stream.uniform_below(n_pixels)];

    std::vector<double> all = positives;
    all.insert(all.end(), negatives.begin(), negatives.end());
    const std::vector<double> thresholds = distinct_descending(std::move(all));

    std::vector<double> neg_sorted = negatives;
    std::sort(neg_sorted.begin(), neg_sorted.end());
    area_sum += sweep_curve(thresholds, pos_sorted, neg_sorted).area();
  }
  return {area_sum / cfg.n_splits, false};
}

MetricResult sauc(const DensityMap& sal, const FixationSet& fix,
                  const FixationSet& negative_pool, AucConfig cfg) {
  check_shapes(sal, fix);
  if (fix.points.empty()) raise(ErrorCode::EmptyFixations, "sAUC needs fixations");
  if (negative_pool.points.empty())
    raise(ErrorCode::EmptyNegativePool, "sAUC needs fixations from other images");
  if (cfg.n_splits < 1) raise(ErrorCode::InvalidSpec, "n_splits must be >= 1");
  if (is_constant(sal)) return {0.5, true};

  std::vector<double> positives = values_at_fixations(sal, fix);
  std::vector<double> pos_sorted = positives;
  std::sort(pos_sorted.begin(), pos_sorted.end());

  // Pool locations clamped into this image's bounds.
  std::vector<double> pool_values;
  pool_values.reserve(negative_pool.points.size());
  for (const Fixation& p : negative_pool.points) {
    const int x = std::clamp(p.x, 0, sal.width - 1);
    const int y = std::clamp(p.y, 0, sal.height - 1);
    pool_values.push_back(sal.at(x, y));
  }

  const std::size_t n_fix = fix.points.size();
  double area_sum = 0.0;
  std::vector<double> negatives(n_fix);
  for (int split = 0; split < cfg.n_splits; ++split) {
    for (std::size_t k = 0; k < n_fix; ++k)
      negatives[k] = pool_values[cfg.stream.uniform_below(pool_values.size())];

    std::vector<double> all = positives;
    all.insert(all.end(), negatives.begin(), negatives.end());
    const std::vector<double> thresholds = distinct_descending(std::move(all));

    std::vector<double> neg_sorted = negatives;
    std::sort(neg_sorted.begin(), neg_sorted.end());
    area_sum += sweep_curve(thresholds, pos_sorted, neg_sorted).area();
  }
  return {area_sum / cfg.n_splits, false};
}

MetricResult nss(const DensityMap& sal, const FixationSet& fix) {
  check_shapes(sal, fix);
  if (fix.points.empty()) raise(ErrorCode::EmptyFixations, "NSS needs fixations");

  const double n = static_cast<double>(sal.values.size());
  double mean = 0.0;
  for (double v : sal.values) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : sal.values) var += (v - mean) * (v - mean);
  var /= n;  // population variance
  const double std_dev = std::sqrt(var);
  if (std_dev < 1e-12) return {0.0, true};

  double z_sum = 0.0;
  for (const Fixation& p : fix.points) z_sum += (sal.at(p.x, p.y) - mean) / std_dev;
  return {z_sum / static_cast<double>(fix.points.size()), false};
}

MetricResult cc(const DensityMap& sal, const DensityMap& gt) {
  check_shapes(sal, gt);
  const double n = static_cast<double>(sal.values.size());
  double mean_a = 0.0, mean_b = 0.0;
  for (double v : sal.values) mean_a += v;
  for (double v : gt.values) mean_b += v;
  mean_a /= n;
  mean_b /= n;

  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < sal.values.size(); ++i) {
    const double da = sal.values[i] - mean_a;
    const double db = gt.values[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  const double std_a = std::sqrt(var_a / n);
  const double std_b = std::sqrt(var_b / n);
  if (std_a < 1e-12 || std_b < 1e-12) return {0.0, true};

  const double r = cov / std::sqrt(var_a * var_b);
  return {std::clamp(r, -1.0, 1.0), false};
}

MetricResult sim(const DensityMap& sal, const DensityMap& gt) {
  check_shapes(sal, gt);
  const DensityMap p = normalize_to_distribution(sal);
  const DensityMap q = normalize_to_distribution(gt);
  double s = 0.0;
  for (std::size_t i = 0; i < p.values.size(); ++i) s += std::min(p.values[i], q.values[i]);
  return {s, false};
}

MetricResult kl(const DensityMap& gt, const DensityMap& sal) {
  check_shapes(gt, sal);
  const DensityMap q = normalize_to_distribution(gt);
  const DensityMap p = normalize_to_distribution(sal);
  double d = 0.0;
  for (std::size_t i = 0; i < q.values.size(); ++i) {
    const double g = q.values[i];
    if (g > 0.0) d += g * std::log(g / (p.values[i] + kKlEpsilon) + kKlEpsilon);
  }
  return {d, false};
}

}  // namespace saleval
