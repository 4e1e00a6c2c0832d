// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Criteria 4, 7 and 8 drive the
// installed CLI binary end-to-end; the rest exercise the library against the
// independent oracles.
//
// Usage: acceptance_suite --cli <path-to-saleval> --data <path-to-data-dir>
//        [criterion numbers...]
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/oracles.hpp"
#include "saleval/analysis.hpp"
#include "saleval/archplan.hpp"
#include "saleval/cli_io.hpp"
#include "saleval/emd.hpp"
#include "saleval/gtgen.hpp"
#include "saleval/metrics.hpp"

namespace fs = std::filesystem;
using namespace saleval;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_cli;
std::string g_data;

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_command(const std::string& command) {
  CommandResult result;
  FILE* pipe = popen((command + " 2>&1").c_str(), "r");
  if (!pipe) return result;
  char buffer[4096];
  while (std::size_t n = std::fread(buffer, 1, sizeof(buffer), pipe))
    result.output.append(buffer, n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Check {
  bool ok = true;
  std::ostringstream why;

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      if (!ok) why << "; ";
      ok = false;
      why << what;
    }
  }
};

FixationSet random_fixations(RngStream& rng, int w, int h, int max_points) {
  return oracle::random_fixations(rng, w, h, max_points);
}

// ---- criterion 1: metric oracle equivalence --------------------------------

bool criterion_metric_oracles(std::string& detail) {
  const auto start = Clock::now();
  Check check;
  RngStream gen(1001);
  const SeededRng rng{424242};
  for (int round = 0; round < 200 && check.ok; ++round) {
    const DensityMap sal = oracle::random_map(gen, 8, 8);
    const DensityMap gt = oracle::random_map(gen, 8, 8, false);
    const FixationSet fix = random_fixations(gen, 8, 8, 10);
    const FixationSet pool = random_fixations(gen, 8, 8, 12);
    std::vector<std::pair<int, int>> pool_locations;
    for (const Fixation& p : pool.points) pool_locations.emplace_back(p.x, p.y);
    const std::string id = "acc1_" + std::to_string(round);

    check.expect(auc_judd(sal, fix).score == oracle::roc_auc_judd(sal, fix),
                 "auc_judd mismatch at case " + std::to_string(round));
    check.expect(
        auc_borji(sal, fix, {100, rng.stream(id, "auc_borji")}).score ==
            oracle::roc_auc_borji(sal, fix, 100, rng.stream(id, "auc_borji")),
        "auc_borji mismatch at case " + std::to_string(round));
    check.expect(sauc(sal, fix, pool, {100, rng.stream(id, "sauc")}).score ==
                     oracle::roc_sauc(sal, fix, pool_locations, 100, rng.stream(id, "sauc")),
                 "sauc mismatch at case " + std::to_string(round));
    check.expect(std::abs(nss(sal, fix).score - oracle::nss_score(sal, fix)) < 1e-12,
                 "nss beyond 1e-12 at case " + std::to_string(round));
    check.expect(std::abs(cc(sal, gt).score - oracle::cc_score(sal, gt)) < 1e-12,
                 "cc beyond 1e-12 at case " + std::to_string(round));
    check.expect(std::abs(sim(sal, gt).score - oracle::sim_score(sal, gt)) < 1e-12,
                 "sim beyond 1e-12 at case " + std::to_string(round));
    check.expect(std::abs(kl(gt, sal).score - oracle::kl_score(gt, sal)) < 1e-12,
                 "kl beyond 1e-12 at case " + std::to_string(round));
  }
  const double elapsed = seconds_since(start);
  check.expect(elapsed < 5.0, "runtime " + std::to_string(elapsed) + "s exceeds 5s");
  std::ostringstream os;
  os << "200 random 8x8 cases, 100 splits, " << elapsed << "s";
  if (!check.ok) os << " -- " << check.why.str();
  detail = os.str();
  return check.ok;
}

// ---- criterion 2: EMD exactness ---------------------------------------------

bool criterion_emd(std::string& detail) {
  const auto start = Clock::now();
  Check check;
  RngStream gen(2002);

  auto random_sparse = [&](int w, int h) {
    DensityMap map(w, h);
    bool any = false;
    for (double& v : map.values)
      if (gen.uniform_unit() < 0.4) {
        v = 0.1 + gen.uniform_unit();
        any = true;
      }
    if (!any) map.values[0] = 1.0;
    return map;
  };

  for (int round = 0; round < 100 && check.ok; ++round) {
    const DensityMap a = normalize_to_distribution(random_sparse(4, 4));
    const DensityMap b = normalize_to_distribution(random_sparse(4, 4));
    TransportProblem problem;
    problem.grid_width = 4;
    std::vector<std::pair<int, double>> supplies, demands;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      if (a.values[i] > 0.0) {
        problem.supplies.push_back({static_cast<int>(i), a.values[i]});
        supplies.emplace_back(static_cast<int>(i), a.values[i]);
      }
      if (b.values[i] > 0.0) {
        problem.demands.push_back({static_cast<int>(i), b.values[i]});
        demands.emplace_back(static_cast<int>(i), b.values[i]);
      }
    }
    const TransportSolution mine = solve_transport(problem);
    const double ref = oracle::transport_cost_lp(supplies, demands, 4);
    check.expect(std::abs(mine.cost - ref) < 1e-9,
                 "transport cost off at case " + std::to_string(round) + " (" +
                     std::to_string(mine.cost) + " vs " + std::to_string(ref) + ")");

    // feasibility of the returned flow
    std::vector<double> out_mass(16, 0.0), in_mass(16, 0.0);
    for (const TransportFlow& f : mine.flows) {
      out_mass[f.from_cell] += f.mass;
      in_mass[f.to_cell] += f.mass;
    }
    for (const MassPoint& s : problem.supplies)
      check.expect(std::abs(out_mass[s.cell] - s.mass) < 1e-9, "supply not exactly shipped");
    for (const MassPoint& d : problem.demands)
      check.expect(std::abs(in_mass[d.cell] - d.mass) < 1e-9, "demand not exactly met");
  }

  for (int round = 0; round < 50 && check.ok; ++round) {
    const DensityMap a = random_sparse(8, 8);
    const DensityMap b = random_sparse(8, 8);
    const DensityMap c = random_sparse(8, 8);
    const double ab = emd_metric(a, b);
    const double ba = emd_metric(b, a);
    const double ac = emd_metric(a, c);
    const double bc = emd_metric(b, c);
    check.expect(std::abs(ab - ba) < 1e-9, "symmetry violated at triple " + std::to_string(round));
    check.expect(emd_metric(a, a) == 0.0, "identity violated");
    check.expect(ac <= ab + bc + 1e-9, "triangle inequality violated at triple " +
                                           std::to_string(round));
  }

  const double elapsed = seconds_since(start);
  check.expect(elapsed < 30.0, "runtime " + std::to_string(elapsed) + "s exceeds 30s");
  std::ostringstream os;
  os << "100 LP-checked 4x4 instances, 50 metric triples, " << elapsed << "s";
  if (!check.ok) os << " -- " << check.why.str();
  detail = os.str();
  return check.ok;
}

// ---- criterion 3: self-evaluation fixture -----------------------------------

bool criterion_self_eval(std::string& detail) {
  Check check;
  ManifestEntry entry{"self", 80, 60, 4.0, "", {}};
  FixationSet fix;
  fix.image_width = 80;
  fix.image_height = 60;
  RngStream gen(3003);
  for (int i = 0; i < 18; ++i)
    fix.points.push_back({4 + static_cast<int>(gen.uniform_below(72)),
                          4 + static_cast<int>(gen.uniform_below(52)), "o"});
  const DensityMap gt = make_ground_truth(fix, entry);

  const double sim_self = sim(gt, gt).score;
  const double cc_self = cc(gt, gt).score;
  const double kl_self = kl(gt, gt).score;
  const double emd_self = emd_metric(gt, gt);
  const double nss_self = nss(gt, fix).score;

  check.expect(std::abs(sim_self - 1.0) < 1e-9, "SIM(gt,gt) != 1");
  check.expect(std::abs(cc_self - 1.0) < 1e-9, "CC(gt,gt) != 1");
  check.expect(std::abs(kl_self) < 1e-9, "KL(gt,gt) != 0");
  check.expect(std::abs(emd_self) < 1e-9, "EMD(gt,gt) != 0");
  check.expect(nss_self > 1.0, "NSS(gt at own fixations) <= 1");

  std::ostringstream os;
  os << "SIM=" << sim_self << " CC=" << cc_self << " KL=" << kl_self << " EMD=" << emd_self
     << " NSS=" << nss_self;
  if (!check.ok) os << " -- " << check.why.str();
  detail = os.str();
  return check.ok;
}

// ---- criterion 4: architecture arithmetic -----------------------------------

bool criterion_archplan(std::string& detail) {
  Check check;

  const CommandResult dense = run_command('"' + g_cli + "\" archplan \"" + g_data +
                                          "/plans/densesal.plan\" --expect \"" + g_data +
                                          "/expect/densesal.expect\"");
  check.expect(dense.exit_code == 0, "densesal --expect exited " +
                                         std::to_string(dense.exit_code));
  check.expect(dense.output.find("[flag] concat: computed 4416") != std::string::npos,
               "concat discrepancy not reported as flagged");
  check.expect(dense.output.find("13 match, 1 flagged mismatch, 0 failures") != std::string::npos,
               "densesal match summary wrong");

  const CommandResult dpn = run_command('"' + g_cli + "\" archplan \"" + g_data +
                                        "/plans/dpnsal.plan\" --expect \"" + g_data +
                                        "/expect/dpnsal.expect\"");
  check.expect(dpn.exit_code == 0, "dpnsal --expect exited " + std::to_string(dpn.exit_code));
  check.expect(dpn.output.find("8 match, 0 flagged mismatch, 0 failures") != std::string::npos,
               "dpnsal match summary wrong");

  // originals end at 1/32
  for (const char* name : {"densenet161_original", "dpn131_original"}) {
    const LayerPlan plan = plan_network(
        parse_network_spec(read_text_file(g_data + std::string("/plans/") + name + ".plan")));
    check.expect(plan.rows.back().size == Fraction::of(1, 32),
                 std::string(name) + " does not end at 1/32");
    const ExpectOutcome outcome =
        check_plan(plan, parse_expect(read_text_file(g_data + std::string("/expect/") + name +
                                                     ".expect")));
    check.expect(outcome.mismatches == 0 && outcome.flagged_mismatches == 0,
                 std::string(name) + " expectation mismatch");
  }

  std::ostringstream os;
  os << "channel tables exact; concat width reported as flagged mismatch; originals at 1/32";
  if (!check.ok) os << " -- " << check.why.str();
  detail = os.str();
  return check.ok;
}

// ---- criterion 5: resampling operators --------------------------------------

bool criterion_resample(std::string& detail) {
  Check check;
  RngStream gen(5005);

  auto random_grid = [&](int c, int h, int w) {
    FeatureGrid g(c, h, w);
    for (double& v : g.values) v = gen.uniform_unit() * 2.0 - 1.0;
    return g;
  };
  auto random_kernel = [&](int in_c, int out_c, int k) {
    ConvWeights kernel(in_c, out_c, k, k);
    for (double& v : kernel.w) v = gen.uniform_unit() - 0.5;
    return kernel;
  };

  for (int round = 0; round < 50 && check.ok; ++round) {
    const int in_c = 1 + static_cast<int>(gen.uniform_below(3));
    const int out_c = 1 + static_cast<int>(gen.uniform_below(3));
    const int h = 2 + static_cast<int>(gen.uniform_below(5));
    const int w = 2 + static_cast<int>(gen.uniform_below(5));
    const FeatureGrid g = random_grid(in_c, h, w);
    const ConvWeights kernel = random_kernel(in_c, out_c, 4);
    const FeatureGrid mine = transposed_conv2d(g, kernel, 2, 1);
    const FeatureGrid ref = oracle::transposed_conv_zero_stuffing(g, kernel, 2, 1);
    check.expect(mine.height == 2 * h && mine.width == 2 * w, "transposed conv size contract");
    for (std::size_t i = 0; i < mine.values.size(); ++i)
      if (std::abs(mine.values[i] - ref.values[i]) > 1e-9) {
        check.expect(false, "zero-stuffing oracle mismatch at case " + std::to_string(round));
        break;
      }
  }

  {
    const FeatureGrid g = random_grid(8, 4, 6);
    const FeatureGrid out = subpixel_shuffle(g, 2);
    std::vector<double> a = g.values, b = out.values;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    check.expect(a == b, "shuffle is not value-preserving");
    FeatureGrid back(g.channels, g.height, g.width);
    for (int c = 0; c < out.channels; ++c)
      for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x)
          for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx)
              back.at(c * 4 + dy * 2 + dx, y, x) = out.at(c, 2 * y + dy, 2 * x + dx);
    check.expect(back.values == g.values, "shuffle inverse is not the identity");
  }

  for (int n = 0; n <= 3 && check.ok; ++n) {
    const int factor = 1 << n;
    {
      const FeatureGrid g = random_grid(4, 3, 5);
      ReadoutWeights w;
      w.proj_weights = {0.25, -0.5, 0.125, 1.0};
      const ReadoutSpec spec{n == 0 ? UpsampleKind::none : UpsampleKind::bilinear, n, 0.01};
      const DensityMap out = readout(g, spec, w);
      check.expect(out.height == 3 * factor && out.width == 5 * factor,
                   "bilinear readout size contract at N=" + std::to_string(n));
    }
    if (n == 0) continue;
    {
      const FeatureGrid g = random_grid(8, 3, 5);
      ReadoutWeights w;
      int channels = 8;
      for (int layer = 0; layer < n; ++layer) {
        w.upsample_convs.push_back(random_kernel(channels, channels / 2, 4));
        channels /= 2;
      }
      w.proj_weights.assign(static_cast<std::size_t>(channels), 0.5);
      const DensityMap out = readout(g, {UpsampleKind::deconv, n, 0.01}, w);
      check.expect(out.height == 3 * factor && out.width == 5 * factor,
                   "deconv readout size contract at N=" + std::to_string(n));
    }
    {
      const int c0 = 4 << (2 * (n - 1));
      const FeatureGrid g = random_grid(c0, 3, 5);
      ReadoutWeights w;
      int channels = c0;
      for (int layer = 0; layer < n; ++layer) {
        channels /= 4;
        w.upsample_convs.push_back(random_kernel(channels, channels, 3));
      }
      w.proj_weights.assign(static_cast<std::size_t>(channels), 0.5);
      const DensityMap out = readout(g, {UpsampleKind::subpixel, n, 0.01}, w);
      check.expect(out.height == 3 * factor && out.width == 5 * factor,
                   "subpixel readout size contract at N=" + std::to_string(n));
    }
  }

  std::ostringstream os;
  os << "50 zero-stuffing cases, shuffle permutation/inverse, size contracts N=0..3";
  if (!check.ok) os << " -- " << check.why.str();
  detail = os.str();
  return check.ok;
}

// ---- criterion 6: correlation ------------------------------------------------

bool criterion_correlation(std::string& detail) {
  Check check;
  RngStream gen(6006);

  auto direct_r = [](const std::vector<CorrelationPoint>& pts) {
    const double n = static_cast<double>(pts.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (const auto& p : pts) {
      sx += p.x;
      sy += p.y;
      sxx += p.x * p.x;
      syy += p.y * p.y;
      sxy += p.x * p.y;
    }
    return (n * sxy - sx * sy) /
           (std::sqrt(n * sxx - sx * sx) * std::sqrt(n * syy - sy * sy));
  };

  for (int round = 0; round < 100 && check.ok; ++round) {
    std::vector<CorrelationPoint> pts;
    for (int i = 0; i < 15; ++i) {
      const double x = 50.0 + 50.0 * gen.uniform_unit();
      const double y = 2.5 - 0.02 * x + 0.3 * (gen.uniform_unit() - 0.5);
      pts.push_back({"m", x, y});
    }
    const PearsonResult mine = pearson(pts);
    check.expect(std::abs(mine.r - direct_r(pts)) < 1e-12,
                 "r beyond 1e-12 at case " + std::to_string(round));
    check.expect(std::abs(mine.p - oracle::pearson_p_by_integration(mine.r, 15)) < 1e-10,
                 "p beyond 1e-10 at case " + std::to_string(round));
  }

  // synthetic 15-point series pinned to r = -0.927
  const double target = -0.927;
  std::vector<double> xs, noise;
  for (int i = 0; i < 15; ++i) {
    xs.push_back(56.0 + 1.7 * i + gen.uniform_unit());
    noise.push_back(gen.uniform_unit());
  }
  double mx = 0;
  for (double v : xs) mx += v;
  mx /= xs.size();
  std::vector<double> u;
  double nu = 0;
  for (double v : xs) nu += (v - mx) * (v - mx);
  for (double v : xs) u.push_back((v - mx) / std::sqrt(nu));
  double mn = 0;
  for (double v : noise) mn += v;
  mn /= noise.size();
  double dot = 0;
  for (std::size_t i = 0; i < noise.size(); ++i) dot += (noise[i] - mn) * u[i];
  std::vector<double> e;
  double ne = 0;
  for (std::size_t i = 0; i < noise.size(); ++i) {
    e.push_back(noise[i] - mn - dot * u[i]);
    ne += e.back() * e.back();
  }
  for (double& v : e) v /= std::sqrt(ne);
  std::vector<CorrelationPoint> pts;
  for (std::size_t i = 0; i < xs.size(); ++i)
    pts.push_back({"m" + std::to_string(i), xs[i],
                   target * u[i] + std::sqrt(1.0 - target * target) * e[i]});
  const PearsonResult pinned = pearson(pts);
  check.expect(std::abs(pinned.r - target) < 1e-3, "synthetic series misses r = -0.927");
  check.expect(pinned.p < 0.05, "synthetic series not significant at 0.05");

  std::ostringstream os;
  os << "100 oracle-checked series; pinned series r=" << pinned.r << ", p=" << pinned.p;
  if (!check.ok) os << " -- " << check.why.str();
  detail = os.str();
  return check.ok;
}

// ---- criterion 7: determinism and performance --------------------------------

bool criterion_determinism(std::string& detail) {
  Check check;
  const fs::path dir =
      fs::temp_directory_path() / ("saleval_acc7_" + std::to_string(::getpid()));
  fs::create_directories(dir / "maps");
  RngStream gen(7007);

  const int W = 640, H = 480, kImages = 20;
  std::ostringstream manifest;
  manifest << "{\n  \"images\": [\n";
  for (int img = 0; img < kImages; ++img) {
    const std::string id = "synth_" + std::to_string(img);

    DensityMap sal(W, H);
    for (int b = 0; b < 5; ++b) {
      const double cx = gen.uniform_unit() * W, cy = gen.uniform_unit() * H;
      const double sx = 20 + 60 * gen.uniform_unit(), sy = 20 + 60 * gen.uniform_unit();
      const double amp = 0.3 + gen.uniform_unit();
      const double inv_x = 1.0 / (2 * sx * sx), inv_y = 1.0 / (2 * sy * sy);
      for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x)
          sal.at(x, y) +=
              amp * std::exp(-((x - cx) * (x - cx) * inv_x + (y - cy) * (y - cy) * inv_y));
    }
    write_map_file((dir / "maps" / (id + ".fbm")).string(), sal, MapFileFormat::binary);

    FixationSet fix;
    fix.image_width = W;
    fix.image_height = H;
    for (int i = 0; i < 40; ++i)
      fix.points.push_back({static_cast<int>(gen.uniform_below(W)),
                            static_cast<int>(gen.uniform_below(H)),
                            "o" + std::to_string(i % 8)});
    write_fixation_file((dir / (id + ".csv")).string(), fix);

    manifest << "    {\"image_id\": \"" << id << "\", \"width\": " << W << ", \"height\": " << H
             << ", \"pixels_per_degree\": 24.0, \"fixation_path\": \"" << id << ".csv\","
             << " \"map_paths\": {\"synth\": \"maps/" << id << ".fbm\"}}"
             << (img + 1 < kImages ? ",\n" : "\n");
  }
  manifest << "  ]\n}\n";
  write_text_file((dir / "manifest.json").string(), manifest.str());

  const std::string base = '"' + g_cli + "\" eval \"" + (dir / "manifest.json").string() +
                           "\" --seed 5 --splits 100 --md \"" + (dir / "agg.md").string() + '"';

  const auto t1 = Clock::now();
  const CommandResult run1 =
      run_command(base + " --jobs 8 --out \"" + (dir / "r1.csv").string() + '"');
  const double elapsed1 = seconds_since(t1);

  const auto t2 = Clock::now();
  const CommandResult run2 =
      run_command(base + " --jobs 3 --out \"" + (dir / "r2.csv").string() + '"');
  const double elapsed2 = seconds_since(t2);

  check.expect(run1.exit_code == 0, "first eval exited " + std::to_string(run1.exit_code));
  check.expect(run2.exit_code == 0, "second eval exited " + std::to_string(run2.exit_code));
  check.expect(elapsed1 < 60.0 && elapsed2 < 60.0,
               "eval runtime " + std::to_string(std::max(elapsed1, elapsed2)) + "s exceeds 60s");
  if (run1.exit_code == 0 && run2.exit_code == 0) {
    const std::string csv1 = read_text_file((dir / "r1.csv").string());
    const std::string csv2 = read_text_file((dir / "r2.csv").string());
    check.expect(!csv1.empty() && csv1 == csv2, "CSVs differ across --jobs 8 vs --jobs 3");
  }

  std::error_code ec;
  fs::remove_all(dir, ec);

  std::ostringstream os;
  os << kImages << " synthetic 640x480 images, 100 splits: " << elapsed1 << "s and " << elapsed2
     << "s, byte-identical CSVs";
  if (!check.ok) os << " -- " << check.why.str();
  detail = os.str();
  return check.ok;
}

// ---- criterion 8: comparison formatter ---------------------------------------

bool criterion_formatter(std::string& detail) {
  Check check;
  const fs::path dir =
      fs::temp_directory_path() / ("saleval_acc8_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  // synthetic report: strong wins every higher-better metric, weak wins the
  // lower-better ones (kl, emd)
  EvalReport report;
  RngStream gen(8008);
  for (const std::string image : {"i1", "i2", "i3"}) {
    for (const std::string& metric : all_metric_names()) {
      const double base = 0.2 + 0.5 * gen.uniform_unit();
      report.records.push_back({"strong", image, metric, base + 0.3, ""});
      report.records.push_back({"weak", image, metric, base, ""});
    }
  }
  write_report_csv((dir / "report.csv").string(), report);

  const CommandResult cmp = run_command('"' + g_cli + "\" compare \"" +
                                        (dir / "report.csv").string() +
                                        "\" --baseline weak --out \"" +
                                        (dir / "table.md").string() + '"');
  check.expect(cmp.exit_code == 0, "compare exited " + std::to_string(cmp.exit_code));

  const std::string md = read_text_file((dir / "table.md").string());
  check.expect(md.find("AUC-Judd ↑") != std::string::npos, "missing up arrow on AUC-Judd");
  check.expect(md.find("KL ↓") != std::string::npos, "missing down arrow on KL");
  check.expect(md.find("EMD ↓") != std::string::npos, "missing down arrow on EMD");
  check.expect(md.find("weak (baseline)") != std::string::npos, "baseline row not marked");

  // polarity: the smaller mean must be bold in the KL column, the larger in CC
  const ComparisonTable table = compare_models({read_report_csv((dir / "report.csv").string())},
                                               "weak");
  check.expect(table.cells.at("weak").at("kl").best && !table.cells.at("strong").at("kl").best,
               "lower-better polarity wrong for kl");
  check.expect(table.cells.at("weak").at("emd").best && !table.cells.at("strong").at("emd").best,
               "lower-better polarity wrong for emd");
  for (const std::string metric : {"auc_judd", "auc_borji", "sauc", "nss", "cc", "sim"})
    check.expect(table.cells.at("strong").at(metric).best &&
                     !table.cells.at("weak").at(metric).best,
                 "higher-better polarity wrong for " + metric);

  std::error_code ec;
  fs::remove_all(dir, ec);

  std::ostringstream os;
  os << "round-tripped synthetic report; polarity and best markers verified";
  if (!check.ok) os << " -- " << check.why.str();
  detail = os.str();
  return check.ok;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc)
      g_cli = argv[++i];
    else if (arg == "--data" && i + 1 < argc)
      g_data = argv[++i];
    else
      selected.insert(std::atoi(arg.c_str()));
  }
  if (g_cli.empty() || g_data.empty()) {
    std::fprintf(stderr, "usage: acceptance_suite --cli <saleval> --data <data dir> [numbers]\n");
    return 2;
  }

  struct Criterion {
    int id;
    const char* title;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "metric oracle equivalence", criterion_metric_oracles},
      {2, "EMD exactness and metric properties", criterion_emd},
      {3, "self-evaluation fixture", criterion_self_eval},
      {4, "architecture arithmetic", criterion_archplan},
      {5, "resampling operators", criterion_resample},
      {6, "correlation analysis", criterion_correlation},
      {7, "determinism and performance", criterion_determinism},
      {8, "comparison table formatting", criterion_formatter},
  };

  int failures = 0;
  int ran = 0;
  for (const Criterion& criterion : criteria) {
    if (!selected.empty() && !selected.count(criterion.id)) continue;
    ++ran;
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %d: %s  %s (%s)\n", criterion.id, ok ? "PASS" : "FAIL",
                criterion.title, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  std::printf("acceptance: %d/%d passed\n", ran - failures, ran);
  return failures == 0 ? 0 : 1;
}
