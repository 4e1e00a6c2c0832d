#include "saleval/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace saleval {

const std::vector<std::string>& all_metric_names() {
  static const std::vector<std::string> names = {"auc_judd", "auc_borji", "sauc", "nss",
                                                 "cc",       "sim",       "kl",   "emd"};
  return names;
}

bool is_lower_better(const std::string& metric) { return metric == "kl" || metric == "emd"; }

std::string metric_display_name(const std::string& metric) {
  if (metric == "auc_judd") return "AUC-Judd";
  if (metric == "auc_borji") return "AUC-Borji";
  if (metric == "sauc") return "sAUC";
  if (metric == "nss") return "NSS";
  if (metric == "cc") return "CC";
  if (metric == "sim") return "SIM";
  if (metric == "kl") return "KL";
  if (metric == "emd") return "EMD";
  return metric;
}

namespace {

int metric_rank(const std::string& metric) {
  const auto& names = all_metric_names();
  const auto it = std::find(names.begin(), names.end(), metric);
  return it == names.end() ? static_cast<int>(names.size()) : static_cast<int>(it - names.begin());
}

bool is_error_row(const EvalRecord& r) { return r.flags.rfind("error", 0) == 0; }

// Regularized incomplete beta function I_x(a, b) by continued fraction.
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  raise(ErrorCode::NumericalFailure, "incomplete beta continued fraction did not converge");
}

double incbeta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

// Two-sided p-value for t with nu degrees of freedom.
double t_two_sided_p(double t, double nu) {
  if (!std::isfinite(t)) return 0.0;
  return incbeta(nu / 2.0, 0.5, nu / (nu + t * t));
}

std::string format_score(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

}  // namespace

std::vector<AggregateRow> aggregate(const EvalReport& report) {
  if (report.records.empty()) raise(ErrorCode::EmptyReport, "no records to aggregate");

  struct Acc {
    double sum = 0.0;
    int n = 0;
    int flagged = 0;
  };
  std::map<std::pair<std::string, std::string>, Acc> acc;
  for (const EvalRecord& rec : report.records) {
    Acc& a = acc[{rec.model, rec.metric}];
    if (!rec.flags.empty()) ++a.flagged;
    if (is_error_row(rec)) continue;
    a.sum += rec.score;
    ++a.n;
  }

  std::vector<AggregateRow> rows;
  rows.reserve(acc.size());
  for (const auto& [key, a] : acc)
    rows.push_back({key.first, key.second, a.n > 0 ? a.sum / a.n : 0.0, a.n, a.flagged});
  std::sort(rows.begin(), rows.end(), [](const AggregateRow& a, const AggregateRow& b) {
    if (a.model != b.model) return a.model < b.model;
    return metric_rank(a.metric) < metric_rank(b.metric);
  });
  return rows;
}

PearsonResult pearson(const std::vector<CorrelationPoint>& points) {
  const int n = static_cast<int>(points.size());
  if (n < 3) raise(ErrorCode::DegenerateInput, "need at least 3 points");

  double mean_x = 0.0, mean_y = 0.0;
  for (const CorrelationPoint& p : points) {
    mean_x += p.x;
    mean_y += p.y;
  }
  mean_x /= n;
  mean_y /= n;

  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const CorrelationPoint& p : points) {
    const double dx = p.x - mean_x;
    const double dy = p.y - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0))
    raise(ErrorCode::DegenerateInput, "constant series has no correlation");

  double r = sxy / std::sqrt(sxx * syy);
  r = std::clamp(r, -1.0, 1.0);

  const double nu = n - 2;
  double p;
  if (std::abs(r) >= 1.0) {
    p = 0.0;
  } else {
    const double t = r * std::sqrt(nu / (1.0 - r * r));
    p = t_two_sided_p(t, nu);
  }
  return {r, p, n};
}

ComparisonTable compare_models(const std::vector<EvalReport>& reports,
                               const std::string& baseline_id) {
  ComparisonTable table;
  table.baseline = baseline_id;

  // model -> image set, for the shared-images precondition
  std::map<std::string, std::set<std::string>> images_by_model;
  std::set<std::string> metric_set;
  std::map<std::string, std::map<std::string, ComparisonCell>> cells;

  bool any_records = false;
  for (const EvalReport& report : reports) {
    if (report.records.empty()) continue;
    any_records = true;
    for (const EvalRecord& rec : report.records) images_by_model[rec.model].insert(rec.image);
    for (const AggregateRow& row : aggregate(report)) {
      metric_set.insert(row.metric);
      ComparisonCell& cell = cells[row.model][row.metric];
      if (cell.present)
        raise(ErrorCode::DuplicateImageId,
              "model " + row.model + " metric " + row.metric + " appears in several reports");
      cell = {row.mean, row.n_images, row.n_flagged, false, true};
    }
  }
  if (!any_records) raise(ErrorCode::EmptyReport, "no records to compare");

  const std::set<std::string>& reference = images_by_model.begin()->second;
  for (const auto& [model, images] : images_by_model)
    if (images != reference)
      raise(ErrorCode::MismatchedImageSets, "model " + model + " covers a different image set");

  for (const std::string& metric : all_metric_names())
    if (metric_set.count(metric)) table.metrics.push_back(metric);
  for (const std::string& metric : metric_set)
    if (std::find(table.metrics.begin(), table.metrics.end(), metric) == table.metrics.end())
      table.metrics.push_back(metric);

  for (const auto& [model, _] : cells) table.models.push_back(model);
  if (!baseline_id.empty()) {
    const auto it = std::find(table.models.begin(), table.models.end(), baseline_id);
    if (it == table.models.end())
      raise(ErrorCode::MissingField, "baseline model " + baseline_id + " not in the reports");
    std::rotate(table.models.begin(), it, it + 1);
  }

  for (const std::string& metric : table.metrics) {
    const bool lower = is_lower_better(metric);
    double best = lower ? std::numeric_limits<double>::infinity()
                        : -std::numeric_limits<double>::infinity();
    for (const auto& [model, by_metric] : cells) {
      const auto it = by_metric.find(metric);
      if (it == by_metric.end() || !it->second.present) continue;
      if (lower ? it->second.mean < best : it->second.mean > best) best = it->second.mean;
    }
    for (auto& [model, by_metric] : cells) {
      const auto it = by_metric.find(metric);
      if (it != by_metric.end() && it->second.present && it->second.mean == best)
        it->second.best = true;
    }
  }

  table.cells = std::move(cells);
  return table;
}

std::string to_markdown(const ComparisonTable& table) {
  std::ostringstream os;
  os << "| Model |";
  for (const std::string& metric : table.metrics)
    os << " " << metric_display_name(metric) << " " << (is_lower_better(metric) ? "\u2193" : "\u2191")
       << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < table.metrics.size(); ++i) os << "---|";
  os << "\n";
  for (const std::string& model : table.models) {
    os << "| " << model;
    if (model == table.baseline && !table.baseline.empty()) os << " (baseline)";
    os << " |";
    const auto& by_metric = table.cells.at(model);
    for (const std::string& metric : table.metrics) {
      const auto it = by_metric.find(metric);
      if (it == by_metric.end() || !it->second.present) {
        os << " - |";
        continue;
      }
      const std::string value = format_score(it->second.mean);
      os << " " << (it->second.best ? "**" + value + "**" : value) << " |";
    }
    os << "\n";
  }
  return os.str();
}

std::string aggregate_markdown(const EvalReport& report) {
  const std::vector<AggregateRow> rows = aggregate(report);

  std::vector<std::string> metrics;
  for (const std::string& metric : all_metric_names())
    if (std::any_of(rows.begin(), rows.end(),
                    [&](const AggregateRow& r) { return r.metric == metric; }))
      metrics.push_back(metric);

  std::vector<std::string> models;
  for (const AggregateRow& row : rows)
    if (std::find(models.begin(), models.end(), row.model) == models.end())
      models.push_back(row.model);

  std::ostringstream os;
  os << "## Aggregate (mean over images)\n\n";
  os << "config: seed=" << report.config.seed << " splits=" << report.config.splits
     << " emd_max_side=" << report.config.emd_max_side
     << " sigma_degrees=" << report.config.sigma_degrees << "\n\n";
  os << "| Model |";
  for (const std::string& metric : metrics)
    os << " " << metric_display_name(metric) << " " << (is_lower_better(metric) ? "\u2193" : "\u2191")
       << " |";
  os << " images | flagged |\n|---|";
  for (std::size_t i = 0; i < metrics.size() + 2; ++i) os << "---|";
  os << "\n";
  for (const std::string& model : models) {
    int images = 0, flagged = 0;
    os << "| " << model << " |";
    for (const std::string& metric : metrics) {
      const auto it = std::find_if(rows.begin(), rows.end(), [&](const AggregateRow& r) {
        return r.model == model && r.metric == metric;
      });
      if (it == rows.end()) {
        os << " - |";
      } else {
        os << " " << format_score(it->mean) << " |";
        images = std::max(images, it->n_images);
        flagged += it->n_flagged;
      }
    }
    os << " " << images << " | " << flagged << " |\n";
  }
  return os.str();
}

}  // namespace saleval
