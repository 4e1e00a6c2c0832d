#include "saleval/cli_io.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "saleval/metrics.hpp"
#include "saleval/rng.hpp"

namespace fs = std::filesystem;

namespace saleval {
namespace {

constexpr char kMapMagic[4] = {'F', 'B', 'M', '1'};

void put_u32_le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_f64_le(std::string& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

double get_f64_le(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

std::string format_double(double v) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double parse_double(const std::string& token, const std::string& context, int line_no) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    raise(ErrorCode::ParseError,
          context + " line " + std::to_string(line_no) + ": bad number '" + token + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  return fields;
}

std::string strip_cr(std::string line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
    line.pop_back();
  return line;
}

int line_number_at_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

int metric_rank(const std::string& metric) {
  const auto& names = all_metric_names();
  const auto it = std::find(names.begin(), names.end(), metric);
  return it == names.end() ? static_cast<int>(names.size()) : static_cast<int>(it - names.begin());
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::ParseError, "cannot open " + path + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) raise(ErrorCode::ParseError, "short write to " + path);
}

DensityMap read_map_file(const std::string& path) {
  const std::string data = read_text_file(path);
  if (data.size() >= 4 && std::memcmp(data.data(), kMapMagic, 4) == 0) {
    if (data.size() < 12) raise(ErrorCode::ParseError, path + ": truncated map header");
    const auto* bytes = reinterpret_cast<const unsigned char*>(data.data());
    const std::uint32_t width = get_u32_le(bytes + 4);
    const std::uint32_t height = get_u32_le(bytes + 8);
    const std::size_t expected = 12 + static_cast<std::size_t>(width) * height * 8;
    if (width < 1 || height < 1) raise(ErrorCode::EmptyMap, path + ": zero-size map");
    if (data.size() != expected)
      raise(ErrorCode::ParseError, path + ": payload does not match declared " +
                                       std::to_string(width) + "x" + std::to_string(height));
    DensityMap map(static_cast<int>(width), static_cast<int>(height));
    for (std::size_t i = 0; i < map.values.size(); ++i)
      map.values[i] = get_f64_le(bytes + 12 + i * 8);
    for (double v : map.values)
      if (!std::isfinite(v)) raise(ErrorCode::NonFinite, path + ": non-finite map value");
    return map;
  }

  // text grid: one CSV row per image row
  std::istringstream stream(data);
  std::string line;
  std::vector<double> values;
  int width = -1;
  int height = 0;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (width < 0)
      width = static_cast<int>(fields.size());
    else if (static_cast<int>(fields.size()) != width)
      raise(ErrorCode::ParseError,
            path + " line " + std::to_string(line_no) + ": ragged row width");
    for (const std::string& f : fields) values.push_back(parse_double(f, path, line_no));
    ++height;
  }
  if (width < 1 || height < 1) raise(ErrorCode::EmptyMap, path + ": empty map file");
  DensityMap map(width, height, std::move(values));
  for (double v : map.values)
    if (!std::isfinite(v)) raise(ErrorCode::NonFinite, path + ": non-finite map value");
  return map;
}

void write_map_file(const std::string& path, const DensityMap& map, MapFileFormat format) {
  std::string out;
  if (format == MapFileFormat::binary) {
    out.reserve(12 + map.values.size() * 8);
    out.append(kMapMagic, 4);
    put_u32_le(out, static_cast<std::uint32_t>(map.width));
    put_u32_le(out, static_cast<std::uint32_t>(map.height));
    for (double v : map.values) put_f64_le(out, v);
  } else {
    std::ostringstream os;
    for (int y = 0; y < map.height; ++y) {
      for (int x = 0; x < map.width; ++x) {
        if (x) os << ',';
        os << format_double(map.at(x, y));
      }
      os << '\n';
    }
    out = os.str();
  }
  write_text_file(path, out);
}

FixationSet read_fixation_file(const std::string& path, int image_width, int image_height) {
  const std::string data = read_text_file(path);
  std::istringstream stream(data);
  std::string line;
  if (!std::getline(stream, line) || strip_cr(line) != "x,y,observer")
    raise(ErrorCode::ParseError, path + " line 1: header must be exactly 'x,y,observer'");

  FixationSet fix;
  fix.image_width = image_width;
  fix.image_height = image_height;
  int line_no = 1;
  while (std::getline(stream, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 3)
      raise(ErrorCode::ParseError, path + " line " + std::to_string(line_no) + ": need x,y,observer");
    // fractional coordinates round to nearest, ties half up
    const int x = static_cast<int>(std::floor(parse_double(fields[0], path, line_no) + 0.5));
    const int y = static_cast<int>(std::floor(parse_double(fields[1], path, line_no) + 0.5));
    if (x < 0 || x >= image_width || y < 0 || y >= image_height)
      raise(ErrorCode::OutOfBounds, path + " line " + std::to_string(line_no) + ": fixation (" +
                                        std::to_string(x) + "," + std::to_string(y) +
                                        ") outside " + std::to_string(image_width) + "x" +
                                        std::to_string(image_height));
    fix.points.push_back({x, y, fields[2]});
  }
  return fix;
}

void write_fixation_file(const std::string& path, const FixationSet& fix) {
  std::ostringstream os;
  os << "x,y,observer\n";
  for (const Fixation& p : fix.points)
    os << p.x << ',' << p.y << ',' << p.observer << '\n';
  write_text_file(path, os.str());
}

DatasetManifest load_manifest(const std::string& path) {
  const std::string data = read_text_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(data);
  } catch (const nlohmann::json::parse_error& e) {
    raise(ErrorCode::ParseError,
          path + " line " + std::to_string(line_number_at_byte(data, e.byte)) + ": " + e.what());
  }

  const fs::path base = fs::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    const fs::path candidate(p);
    return candidate.is_absolute() ? candidate.string() : (base / candidate).lexically_normal().string();
  };

  if (!doc.is_object() || !doc.contains("images") || !doc["images"].is_array())
    raise(ErrorCode::MissingField, path + ": manifest needs an \"images\" array");

  DatasetManifest manifest;
  std::set<std::string> seen_ids;
  int index = 0;
  for (const auto& item : doc["images"]) {
    const std::string where = path + " images[" + std::to_string(index) + "]";
    auto need = [&](const char* field) -> const nlohmann::json& {
      if (!item.is_object() || !item.contains(field))
        raise(ErrorCode::MissingField, where + ": missing \"" + field + "\"");
      return item[field];
    };

    ManifestEntry entry;
    entry.image_id = need("image_id").get<std::string>();
    entry.width = need("width").get<int>();
    entry.height = need("height").get<int>();
    entry.pixels_per_degree = need("pixels_per_degree").get<double>();
    entry.fixation_path = resolve(need("fixation_path").get<std::string>());
    if (entry.width < 1 || entry.height < 1)
      raise(ErrorCode::InvalidSpec, where + ": image size must be >= 1");
    if (!(entry.pixels_per_degree > 0.0))
      raise(ErrorCode::InvalidSpec, where + ": pixels_per_degree must be > 0");
    if (!seen_ids.insert(entry.image_id).second)
      raise(ErrorCode::DuplicateImageId, where + ": duplicate image_id " + entry.image_id);

    if (item.contains("map_paths")) {
      if (!item["map_paths"].is_object())
        raise(ErrorCode::ParseError, where + ": map_paths must be an object");
      for (const auto& [model, map_path] : item["map_paths"].items())
        entry.map_paths.emplace_back(model, resolve(map_path.get<std::string>()));
      std::sort(entry.map_paths.begin(), entry.map_paths.end());
    }
    manifest.entries.push_back(std::move(entry));
    ++index;
  }
  return manifest;
}

namespace {

struct ImageInputs {
  bool fixations_ok = false;
  std::string fixation_error;
  FixationSet fixations;
};

EvalRecord error_record(const std::string& model, const std::string& image,
                        const std::string& metric, const Error& e) {
  return {model, image, metric, std::numeric_limits<double>::quiet_NaN(),
          std::string("error:") + to_string(e.code())};
}

}  // namespace

EvalReport run_eval(const DatasetManifest& manifest, const EvalOptions& options) {
  std::vector<std::string> metrics =
      options.metrics.empty() ? all_metric_names() : options.metrics;
  for (const std::string& metric : metrics)
    if (std::find(all_metric_names().begin(), all_metric_names().end(), metric) ==
        all_metric_names().end())
      raise(ErrorCode::InvalidSpec, "unknown metric '" + metric + "'");

  std::vector<std::string> models = options.models;
  if (models.empty()) {
    std::set<std::string> found;
    for (const ManifestEntry& entry : manifest.entries)
      for (const auto& [model, _] : entry.map_paths) found.insert(model);
    models.assign(found.begin(), found.end());
  }

  EvalReport report;
  report.config = {options.seed, options.splits, options.emd_max_side, options.sigma_degrees,
                   metrics};

  const std::size_t n_images = manifest.entries.size();
  if (n_images == 0 || models.empty()) return report;

  // Fixations are loaded up front: they are small and the sAUC negative pool
  // needs every other image's points.
  std::vector<ImageInputs> inputs(n_images);
  for (std::size_t i = 0; i < n_images; ++i) {
    const ManifestEntry& entry = manifest.entries[i];
    try {
      inputs[i].fixations =
          read_fixation_file(entry.fixation_path, entry.width, entry.height);
      inputs[i].fixations_ok = true;
    } catch (const Error& e) {
      inputs[i].fixation_error = e.what();
    }
  }

  const bool wants_sauc = std::find(metrics.begin(), metrics.end(), "sauc") != metrics.end();
  const SeededRng rng{options.seed};
  const BlurSpec blur{options.sigma_degrees, 4.0};
  const EmdConfig emd_cfg{options.emd_max_side, options.emd_downsample};

  std::vector<std::vector<EvalRecord>> per_image(n_images);
  std::atomic<std::size_t> next{0};

  auto evaluate_image = [&](std::size_t index) {
    const ManifestEntry& entry = manifest.entries[index];
    std::vector<EvalRecord>& rows = per_image[index];
    auto fail_all = [&](const Error& e) {
      for (const std::string& model : models)
        for (const std::string& metric : metrics)
          rows.push_back(error_record(model, entry.image_id, metric, e));
    };

    if (!inputs[index].fixations_ok) {
      fail_all(Error(ErrorCode::ParseError, inputs[index].fixation_error));
      return;
    }
    const FixationSet& fix = inputs[index].fixations;

    DensityMap gt;
    try {
      gt = make_ground_truth(fix, entry, blur);
    } catch (const Error& e) {
      fail_all(e);
      return;
    }

    FixationSet pool;
    if (wants_sauc) {
      pool.image_width = entry.width;
      pool.image_height = entry.height;
      for (std::size_t j = 0; j < n_images; ++j) {
        if (j == index || !inputs[j].fixations_ok) continue;
        for (const Fixation& p : inputs[j].fixations.points) pool.points.push_back(p);
      }
    }

    for (const std::string& model : models) {
      const auto it =
          std::find_if(entry.map_paths.begin(), entry.map_paths.end(),
                       [&](const auto& kv) { return kv.first == model; });
      if (it == entry.map_paths.end()) {
        const Error e(ErrorCode::MissingField,
                      "no map for model " + model + " on image " + entry.image_id);
        for (const std::string& metric : metrics)
          rows.push_back(error_record(model, entry.image_id, metric, e));
        continue;
      }

      DensityMap sal;
      try {
        sal = read_map_file(it->second);
        if (sal.width != entry.width || sal.height != entry.height)
          raise(ErrorCode::ShapeMismatch, it->second + ": map size disagrees with manifest");
      } catch (const Error& e) {
        for (const std::string& metric : metrics)
          rows.push_back(error_record(model, entry.image_id, metric, e));
        continue;
      }

      for (const std::string& metric : metrics) {
        try {
          MetricResult result;
          if (metric == "auc_judd") {
            result = auc_judd(sal, fix);
          } else if (metric == "auc_borji") {
            result = auc_borji(sal, fix,
                               {options.splits, rng.stream(entry.image_id, "auc_borji")});
          } else if (metric == "sauc") {
            result = sauc(sal, fix, pool, {options.splits, rng.stream(entry.image_id, "sauc")});
          } else if (metric == "nss") {
            result = nss(sal, fix);
          } else if (metric == "cc") {
            result = cc(sal, gt);
          } else if (metric == "sim") {
            result = sim(sal, gt);
          } else if (metric == "kl") {
            result = kl(gt, sal);
          } else {  // emd
            result = {emd_metric(sal, gt, emd_cfg), false};
          }
          rows.push_back({model, entry.image_id, metric, result.score,
                          result.degenerate ? "degenerate" : ""});
        } catch (const Error& e) {
          rows.push_back(error_record(model, entry.image_id, metric, e));
        }
      }
    }
  };

  int jobs = options.jobs > 0 ? options.jobs
                              : static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  jobs = std::min<int>(jobs, static_cast<int>(n_images));

  if (jobs == 1) {
    for (std::size_t i = 0; i < n_images; ++i) evaluate_image(i);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (int t = 0; t < jobs; ++t)
      workers.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= n_images) return;
          evaluate_image(i);
        }
      });
    for (std::thread& w : workers) w.join();
  }

  for (std::vector<EvalRecord>& rows : per_image)
    report.records.insert(report.records.end(), std::make_move_iterator(rows.begin()),
                          std::make_move_iterator(rows.end()));
  std::sort(report.records.begin(), report.records.end(),
            [](const EvalRecord& a, const EvalRecord& b) {
              if (a.model != b.model) return a.model < b.model;
              if (a.image != b.image) return a.image < b.image;
              return metric_rank(a.metric) < metric_rank(b.metric);
            });
  return report;
}

std::string report_to_csv(const EvalReport& report) {
  std::ostringstream os;
  os << "model,image,metric,score,flags\n";
  for (const EvalRecord& rec : report.records)
    os << rec.model << ',' << rec.image << ',' << rec.metric << ','
       << format_double(rec.score) << ',' << rec.flags << '\n';
  return os.str();
}

void write_report_csv(const std::string& path, const EvalReport& report) {
  write_text_file(path, report_to_csv(report));
}

EvalReport read_report_csv(const std::string& path) {
  const std::string data = read_text_file(path);
  std::istringstream stream(data);
  std::string line;
  if (!std::getline(stream, line) || strip_cr(line) != "model,image,metric,score,flags")
    raise(ErrorCode::ParseError, path + " line 1: expected header model,image,metric,score,flags");

  EvalReport report;
  int line_no = 1;
  while (std::getline(stream, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 5)
      raise(ErrorCode::ParseError, path + " line " + std::to_string(line_no) + ": need 5 fields");
    report.records.push_back({fields[0], fields[1], fields[2],
                              parse_double(fields[3], path, line_no), fields[4]});
  }
  return report;
}

}  // namespace saleval
