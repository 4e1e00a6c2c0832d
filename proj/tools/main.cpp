// saleval: batch CLI for saliency-map evaluation.
//
// Subcommands: gtgen (fixations -> ground-truth maps), eval (manifest ->
// score report), compare (reports -> comparison table), correlate
// (accuracy/score pairs -> Pearson r and p), archplan (network spec ->
// channel/size table).
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "saleval/analysis.hpp"
#include "saleval/archplan.hpp"
#include "saleval/cli_io.hpp"
#include "saleval/gtgen.hpp"

namespace fs = std::filesystem;
using namespace saleval;

namespace {

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(csv);
  while (std::getline(is, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int run_gtgen(const std::string& manifest_path, const std::string& out_dir,
              const std::string& format, double sigma_degrees) {
  const DatasetManifest manifest = load_manifest(manifest_path);
  fs::create_directories(out_dir);
  const bool binary = format != "csv";
  const BlurSpec blur{sigma_degrees, 4.0};

  int failures = 0;
  for (const ManifestEntry& entry : manifest.entries) {
    try {
      const FixationSet fix =
          read_fixation_file(entry.fixation_path, entry.width, entry.height);
      const DensityMap gt = make_ground_truth(fix, entry, blur);
      const std::string path =
          (fs::path(out_dir) / (entry.image_id + (binary ? ".fbm" : ".csv"))).string();
      write_map_file(path, gt, binary ? MapFileFormat::binary : MapFileFormat::text);
      std::printf("%s: %zu fixations -> %s\n", entry.image_id.c_str(), fix.points.size(),
                  path.c_str());
    } catch (const Error& e) {
      std::fprintf(stderr, "%s: %s\n", entry.image_id.c_str(), e.what());
      ++failures;
    }
  }
  return failures == 0 ? 0 : 2;
}

int run_eval_cmd(const std::string& manifest_path, const std::string& out_csv,
                 const std::string& out_md, const EvalOptions& options) {
  const DatasetManifest manifest = load_manifest(manifest_path);
  const EvalReport report = run_eval(manifest, options);
  write_report_csv(out_csv, report);

  if (report.records.empty()) {
    std::fprintf(stderr, "warning: nothing evaluated (no models or images)\n");
    return 0;
  }
  const std::string aggregate_md = aggregate_markdown(report);
  if (out_md.empty())
    std::fputs(aggregate_md.c_str(), stdout);
  else
    write_text_file(out_md, aggregate_md);

  for (const EvalRecord& rec : report.records)
    if (rec.flags.rfind("error", 0) == 0) {
      std::fprintf(stderr, "warning: some rows are error-flagged (see %s)\n", out_csv.c_str());
      return 2;
    }
  return 0;
}

int run_compare(const std::vector<std::string>& report_paths, const std::string& baseline,
                const std::string& out_md) {
  std::vector<EvalReport> reports;
  for (const std::string& path : report_paths) reports.push_back(read_report_csv(path));
  const std::string md = to_markdown(compare_models(reports, baseline));
  if (out_md.empty())
    std::fputs(md.c_str(), stdout);
  else
    write_text_file(out_md, md);
  return 0;
}

int run_correlate(const std::string& points_path, const std::string& metric,
                  const std::string& scatter_path) {
  const std::string data = read_text_file(points_path);
  std::istringstream stream(data);
  std::string line;
  if (!std::getline(stream, line) || line.find("model,top1,score") != 0)
    raise(ErrorCode::ParseError, points_path + " line 1: expected header model,top1,score");

  CorrelationStudy study;
  study.metric_name = metric;
  int line_no = 1;
  while (std::getline(stream, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string model, top1, score;
    if (!std::getline(fields, model, ',') || !std::getline(fields, top1, ',') ||
        !std::getline(fields, score, ','))
      raise(ErrorCode::ParseError,
            points_path + " line " + std::to_string(line_no) + ": need model,top1,score");
    const double x = std::strtod(top1.c_str(), nullptr);
    const double y = std::strtod(score.c_str(), nullptr);
    if (x < 0.0 || x > 100.0)
      raise(ErrorCode::OutOfBounds, points_path + " line " + std::to_string(line_no) +
                                        ": top-1 accuracy must be a percentage");
    study.points.push_back({model, x, y});
  }

  const PearsonResult result = pearson(study.points);
  std::printf("metric: %s\nn = %d\nr = %.6f\np = %.6g\n", study.metric_name.c_str(), result.n,
              result.r, result.p);

  if (!scatter_path.empty()) {
    std::ostringstream os;
    os << "model,top1,score\n";
    for (const CorrelationPoint& p : study.points)
      os << p.model << ',' << p.x << ',' << p.y << '\n';
    write_text_file(scatter_path, os.str());
  }
  return 0;
}

int run_archplan(const std::string& plan_path, const std::string& expect_path,
                 const std::string& out_md) {
  const LayerPlan plan = plan_network(parse_network_spec(read_text_file(plan_path)));
  const std::string table = to_text_table(plan);
  if (out_md.empty())
    std::fputs(table.c_str(), stdout);
  else
    write_text_file(out_md, table);

  if (expect_path.empty()) return 0;

  const ExpectOutcome outcome = check_plan(plan, parse_expect(read_text_file(expect_path)));
  for (const ExpectRowResult& row : outcome.rows) {
    if (row.matches) {
      std::printf("[ ok ] %s: channels %lld, size %s\n", row.stage.c_str(),
                  row.computed_channels, row.computed_size.str().c_str());
    } else if (row.suspect) {
      std::printf("[flag] %s: computed %lld @ %s vs reference %lld @ %s"
                  " (reference marked suspect; reported, not failed)\n",
                  row.stage.c_str(), row.computed_channels, row.computed_size.str().c_str(),
                  row.expected_channels, row.expected_size.str().c_str());
    } else {
      std::printf("[FAIL] %s: computed %lld @ %s vs reference %lld @ %s\n", row.stage.c_str(),
                  row.computed_channels, row.computed_size.str().c_str(), row.expected_channels,
                  row.expected_size.str().c_str());
    }
  }
  std::printf("%zu rows: %zu match, %d flagged mismatch, %d failures\n", outcome.rows.size(),
              outcome.rows.size() - outcome.mismatches - outcome.flagged_mismatches,
              outcome.flagged_mismatches, outcome.mismatches);
  return outcome.mismatches == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"saliency-map evaluation toolkit"};
  app.require_subcommand(1);

  // gtgen
  std::string gt_manifest, gt_out_dir, gt_format = "fbm";
  double gt_sigma = 1.0;
  CLI::App* gtgen = app.add_subcommand("gtgen", "build ground-truth maps from fixations");
  gtgen->add_option("manifest", gt_manifest, "dataset manifest (JSON)")->required();
  gtgen->add_option("--out-dir", gt_out_dir, "output directory")->required();
  gtgen->add_option("--format", gt_format, "fbm (binary) or csv")
      ->check(CLI::IsMember({"fbm", "csv"}));
  gtgen->add_option("--sigma-degrees", gt_sigma, "blur sigma in visual degrees (default 1)");

  // eval
  std::string ev_manifest, ev_out = "report.csv", ev_md, ev_metrics, ev_models;
  EvalOptions ev_options;
  CLI::App* eval_cmd = app.add_subcommand("eval", "score model maps against ground truth");
  eval_cmd->add_option("manifest", ev_manifest, "dataset manifest (JSON)")->required();
  eval_cmd->add_option("--out", ev_out, "report CSV path (default report.csv)");
  eval_cmd->add_option("--md", ev_md, "write the aggregate Markdown here instead of stdout");
  eval_cmd->add_option("--seed", ev_options.seed, "master seed (default 0)");
  eval_cmd->add_option("--splits", ev_options.splits, "AUC-Borji/sAUC splits (default 100)");
  eval_cmd->add_option("--emd-max-side", ev_options.emd_max_side,
                       "EMD downsampling cap in pixels (default 32)");
  eval_cmd->add_option("--metrics", ev_metrics, "comma list (default all eight)");
  eval_cmd->add_option("--models", ev_models, "comma list (default every model in the manifest)");
  eval_cmd->add_option("--jobs", ev_options.jobs, "worker threads (default all cores)");
  eval_cmd->add_option("--sigma-degrees", ev_options.sigma_degrees,
                       "ground-truth blur sigma in visual degrees (default 1)");

  // compare
  std::vector<std::string> cmp_reports;
  std::string cmp_baseline, cmp_out;
  CLI::App* compare_cmd = app.add_subcommand("compare", "merge reports into a comparison table");
  compare_cmd->add_option("reports", cmp_reports, "report CSV files")->required()->expected(-1);
  compare_cmd->add_option("--baseline", cmp_baseline, "model listed first in the table");
  compare_cmd->add_option("--out", cmp_out, "write Markdown here instead of stdout");

  // correlate
  std::string cor_points, cor_metric = "kl", cor_scatter;
  CLI::App* correlate_cmd =
      app.add_subcommand("correlate", "Pearson r/p between accuracy and a metric");
  correlate_cmd->add_option("points", cor_points, "CSV with header model,top1,score")->required();
  correlate_cmd->add_option("--metric", cor_metric, "metric label for the output");
  correlate_cmd->add_option("--scatter", cor_scatter, "write the cleaned points CSV here");

  // archplan
  std::string ap_plan, ap_expect, ap_out;
  CLI::App* archplan_cmd = app.add_subcommand("archplan", "channel/size table for a network spec");
  archplan_cmd->add_option("plan", ap_plan, "network spec file")->required();
  archplan_cmd->add_option("--expect", ap_expect, "check the plan against a reference table");
  archplan_cmd->add_option("--md", ap_out, "write the table here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gtgen->parsed()) return run_gtgen(gt_manifest, gt_out_dir, gt_format, gt_sigma);
    if (eval_cmd->parsed()) {
      ev_options.metrics = split_list(ev_metrics);
      ev_options.models = split_list(ev_models);
      return run_eval_cmd(ev_manifest, ev_out, ev_md, ev_options);
    }
    if (compare_cmd->parsed()) return run_compare(cmp_reports, cmp_baseline, cmp_out);
    if (correlate_cmd->parsed()) return run_correlate(cor_points, cor_metric, cor_scatter);
    if (archplan_cmd->parsed()) return run_archplan(ap_plan, ap_expect, ap_out);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
