#include "sheartext/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "sheartext/frame_io.hpp"
#include "sheartext/textmap.hpp"

namespace sheartext {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + value + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  int v = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("config: '" + key + "' expects an integer, got '" + value + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("config: '" + key + "' expects a boolean, got '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) out.push_back(parse_double(key, trim(item)));
  return out;
}

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

}  // namespace

void validate(const PipelineConfig& cfg) {
  try {
    validate(cfg.separation);
    validate(cfg.refine);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.separation.subband_weights.size() != static_cast<std::size_t>(kShearletScales)) {
    throw ConfigError("config: weights must list exactly 4 values");
  }
  if (cfg.kmeans_max_sweeps < 1) throw ConfigError("config: kmeans_max_sweeps must be >= 1");
  if (cfg.threads < 0) throw ConfigError("config: threads must be >= 0");
}

void apply_config_text(const std::string& text, PipelineConfig& cfg) {
  std::istringstream lines(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(lines, raw)) {
    ++lineno;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    SeparationConfig& sep = cfg.separation;
    RefineConfig& ref = cfg.refine;
    if (key == "iterations") {
      sep.iterations = parse_int(key, value);
    } else if (key == "weights") {
      sep.subband_weights = parse_list(key, value);
      if (sep.subband_weights.size() != static_cast<std::size_t>(kShearletScales)) {
        throw ConfigError("config: weights must list exactly 4 values");
      }
    } else if (key == "lambda_max") {
      if (value == "auto") {
        sep.lambda_max.reset();
      } else {
        sep.lambda_max = parse_double(key, value);
      }
    } else if (key == "lambda_max_fraction") {
      sep.lambda_max_fraction = parse_double(key, value);
    } else if (key == "lambda_min") {
      sep.lambda_min = parse_double(key, value);
    } else if (key == "damped_step") {
      sep.damped_step = parse_bool(key, value);
    } else if (key == "parallel_dictionaries") {
      sep.parallel_dictionaries = parse_bool(key, value);
    } else if (key == "tpr_window") {
      ref.window = parse_int(key, value);
    } else if (key == "tpr_threshold") {
      ref.tpr_threshold = parse_double(key, value);
    } else if (key == "min_box") {
      ref.min_box = parse_int(key, value);
    } else if (key == "merge_overlap") {
      ref.merge_min_overlap = parse_double(key, value);
    } else if (key == "merge_gap") {
      ref.merge_gap_factor = parse_double(key, value);
    } else if (key == "kmeans_max_sweeps") {
      cfg.kmeans_max_sweeps = parse_int(key, value);
    } else if (key == "threads") {
      cfg.threads = parse_int(key, value);
    } else if (key == "out") {
      cfg.out_dir = value;
    } else if (key == "annotate") {
      cfg.annotate = parse_bool(key, value);
    } else if (key == "dump_cluster") {
      cfg.dump_cluster = parse_bool(key, value);
    } else if (key == "dump_refined") {
      cfg.dump_refined = parse_bool(key, value);
    } else {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" +
                        key + "'");
    }
  }
}

void apply_config_file(const std::filesystem::path& path, PipelineConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(buf.str(), cfg);
}

std::string describe_config(const PipelineConfig& cfg) {
  const SeparationConfig& sep = cfg.separation;
  const RefineConfig& ref = cfg.refine;
  std::ostringstream out;
  out << "iterations = " << sep.iterations << '\n' << "weights = ";
  for (std::size_t i = 0; i < sep.subband_weights.size(); ++i) {
    out << (i ? ", " : "") << sep.subband_weights[i];
  }
  out << '\n'
      << "lambda_max = ";
  if (sep.lambda_max) {
    out << *sep.lambda_max;
  } else {
    out << "auto";
  }
  out << '\n'
      << "lambda_max_fraction = " << sep.lambda_max_fraction << '\n'
      << "lambda_min = " << sep.lambda_min << '\n'
      << "damped_step = " << (sep.damped_step ? "true" : "false") << '\n'
      << "tpr_window = " << ref.window << '\n'
      << "tpr_threshold = " << ref.tpr_threshold << '\n'
      << "min_box = " << ref.min_box << '\n'
      << "merge_overlap = " << ref.merge_min_overlap << '\n'
      << "merge_gap = " << ref.merge_gap_factor << '\n'
      << "kmeans_max_sweeps = " << cfg.kmeans_max_sweeps << '\n';
  return out.str();
}

FrameDetection detect_frame(const ColorImage& frame, const ShearletSystem& sys,
                            const PipelineConfig& cfg) {
  FrameDetection det;
  auto t = Clock::now();

  const GrayImage work = resize_to_working(to_grayscale(frame));
  det.timings[kStagePreprocess] = elapsed_ms(t);

  t = Clock::now();
  const SeparationResult sep = separate(work, sys, cfg.separation);
  det.timings[kStageSeparate] = elapsed_ms(t);

  t = Clock::now();
  const FeatureMap features = make_features(combined_map(sep));
  det.timings[kStageFeatures] = elapsed_ms(t);

  t = Clock::now();
  const KMeansResult km = kmeans2(features, cfg.kmeans_max_sweeps);
  det.cluster = select_text_cluster(km.labels, features.combined);
  det.timings[kStageCluster] = elapsed_ms(t);

  t = Clock::now();
  det.refined = close_3x3(tpr_filter(det.cluster, cfg.refine));
  det.timings[kStageRefine] = elapsed_ms(t);

  t = Clock::now();
  det.boxes = to_boxes(extract_components(det.refined), cfg.refine, frame.width(),
                       frame.height(), work.width(), work.height());
  det.timings[kStageBoxes] = elapsed_ms(t);
  return det;
}

int effective_threads(int requested, std::size_t jobs) {
  int n = requested > 0 ? requested
                        : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* cap = std::getenv("SHEARTEXT_THREADS")) {
    int c = 0;
    const std::string_view s(cap);
    if (std::from_chars(s.data(), s.data() + s.size(), c).ec == std::errc() && c > 0) {
      n = std::min(n, c);
    }
  }
  n = std::min<long long>(n, static_cast<long long>(std::max<std::size_t>(jobs, 1)));
  return std::max(n, 1);
}

}  // namespace sheartext
