#include "sheartext/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "sheartext/frame_io.hpp"
#include "sheartext/haar.hpp"

namespace sheartext {
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

bool is_raster(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".bmp" || ext == ".jpg" || ext == ".jpeg";
}

std::string stem_of(const fs::path& p) { return p.stem().string(); }

GrayImage magnitude(const GrayImage& img) {
  GrayImage out = img;
  for (double& v : out.values()) v = std::abs(v);
  return out;
}

struct FrameJob {
  ManifestEntry entry;
  std::vector<Rect> boxes;
};

FrameJob process_one(const fs::path& input, const ShearletSystem& sys,
                     const PipelineConfig& cfg, bool write_outputs) {
  FrameJob job;
  job.entry.input = input;
  try {
    const auto t = Clock::now();
    const ColorImage frame = load_frame(input);
    const double load_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - t).count();

    FrameDetection det = detect_frame(frame, sys, cfg);
    det.timings[kStageLoad] = load_ms;
    job.entry.timings = det.timings;
    job.entry.boxes = det.boxes.size();

    if (write_outputs) {
      const std::string stem = stem_of(input);
      const fs::path rects = cfg.out_dir / (stem + ".txt");
      write_rects(det.boxes, rects);
      job.entry.outputs.push_back(rects);
      if (cfg.annotate) {
        const fs::path p = cfg.out_dir / (stem + "_boxes.png");
        write_annotated(frame, det.boxes, p);
        job.entry.outputs.push_back(p);
      }
      if (cfg.dump_cluster) {
        const fs::path p = cfg.out_dir / (stem + "_cluster.png");
        write_png(render_mask(det.cluster), p);
        job.entry.outputs.push_back(p);
      }
      if (cfg.dump_refined) {
        const fs::path p = cfg.out_dir / (stem + "_refined.png");
        write_png(render_mask(det.refined), p);
        job.entry.outputs.push_back(p);
      }
    }
    job.boxes = std::move(det.boxes);
    job.entry.ok = true;
  } catch (const std::exception& e) {
    job.entry.ok = false;
    job.entry.error = e.what();
  }
  return job;
}

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return v[lo] + (v[hi] - v[lo]) * (pos - static_cast<double>(lo));
}

std::vector<fs::path> list_rect_files(const fs::path& dir) {
  std::vector<fs::path> files;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw FrameError(FrameErrorKind::kWriteError, "cannot write " + path.string());
}

}  // namespace

double ManifestEntry::total_ms() const {
  double s = 0.0;
  for (double t : timings) s += t;
  return s;
}

std::string manifest_json(const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["version"] = manifest.version;
  j["config"] = manifest.config;
  j["frames"] = nlohmann::ordered_json::array();
  for (const ManifestEntry& e : manifest.frames) {
    nlohmann::ordered_json f;
    f["input"] = e.input.string();
    f["ok"] = e.ok;
    if (!e.ok) f["error"] = e.error;
    std::vector<std::string> outputs;
    for (const auto& p : e.outputs) outputs.push_back(p.string());
    f["outputs"] = outputs;
    f["boxes"] = e.boxes;
    nlohmann::ordered_json t;
    for (std::size_t s = 0; s < kStageCount; ++s) t[std::string(kStageNames[s])] = e.timings[s];
    f["timings_ms"] = t;
    f["total_ms"] = e.total_ms();
    j["frames"].push_back(f);
  }
  return j.dump(2) + "\n";
}

std::vector<fs::path> expand_inputs(const std::vector<fs::path>& inputs) {
  std::vector<fs::path> out;
  for (const fs::path& in : inputs) {
    std::error_code ec;
    if (fs::is_directory(in, ec)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.is_regular_file() && is_raster(e.path())) found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(in);
    }
  }
  return out;
}

DetectRun run_detect(const std::vector<fs::path>& inputs, const PipelineConfig& cfg,
                     bool write_outputs, std::ostream& log) {
  validate(cfg);
  const std::vector<fs::path> files = expand_inputs(inputs);
  if (write_outputs) fs::create_directories(cfg.out_dir);

  const ShearletSystem sys = build_shearlet_system(kWorkingSize, kShearletScales);
  std::vector<FrameJob> jobs(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      jobs[i] = process_one(files[i], sys, cfg, write_outputs);
    }
  };
  const int nthreads = effective_threads(cfg.threads, files.size());
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
  }

  DetectRun run;
  run.manifest.config = describe_config(cfg);
  for (FrameJob& job : jobs) {
    if (job.entry.ok) {
      log << "ok   " << job.entry.input.string() << ": " << job.entry.boxes << " boxes\n";
    } else {
      log << "FAIL " << job.entry.input.string() << ": " << job.entry.error << '\n';
      run.exit_code = kExitPartialFailure;
    }
    run.boxes.push_back(std::move(job.boxes));
    run.manifest.frames.push_back(std::move(job.entry));
  }
  if (write_outputs) write_text(cfg.out_dir / "manifest.json", manifest_json(run.manifest));
  return run;
}

int cmd_detect(const std::vector<fs::path>& inputs, const PipelineConfig& cfg,
               std::ostream& log) {
  return run_detect(inputs, cfg, true, log).exit_code;
}

int cmd_separate(const fs::path& input, const PipelineConfig& cfg, bool dump_coeffs,
                 std::ostream& log) {
  validate(cfg);
  try {
    const GrayImage work = resize_to_working(to_grayscale(load_frame(input)));
    const ShearletSystem sys = build_shearlet_system(kWorkingSize, kShearletScales);
    const SeparationResult res = separate(work, sys, cfg.separation);

    fs::create_directories(cfg.out_dir);
    const std::string stem = stem_of(input);
    write_png(pseudo_color(magnitude(res.point_part)), cfg.out_dir / (stem + "_point.png"));
    write_png(pseudo_color(magnitude(res.curve_part)), cfg.out_dir / (stem + "_curve.png"));
    write_png(pseudo_color(combined_map(res)), cfg.out_dir / (stem + "_combined.png"));
    write_png(pseudo_color(res.residual), cfg.out_dir / (stem + "_residual.png"));

    if (dump_coeffs) {
      const fs::path dir = cfg.out_dir / (stem + "_coeffs");
      fs::create_directories(dir);
      const WaveletPyramid pyr = dwt2_haar(work, kHaarLevels);
      write_png(pseudo_color(pyr.approx), dir / "wave_approx.png");
      for (int l = 0; l < pyr.levels(); ++l) {
        const std::string base = "wave_l" + std::to_string(l) + "_";
        write_png(pseudo_color(pyr.details[l].horizontal), dir / (base + "H.png"));
        write_png(pseudo_color(pyr.details[l].vertical), dir / (base + "V.png"));
        write_png(pseudo_color(pyr.details[l].diagonal), dir / (base + "D.png"));
      }
      const ShearletCoefficients coeffs = shearlet_analyze(work, sys);
      for (std::size_t i = 0; i < coeffs.planes.size(); ++i) {
        const ShearletFilter& f = sys.filters()[i];
        const std::string name =
            f.lowpass ? "shear_lowpass.png"
                      : "shear_j" + std::to_string(f.scale) + "_c" +
                            std::to_string(static_cast<int>(f.cone)) + "_k" +
                            std::to_string(f.shear) + ".png";
        write_png(pseudo_color(coeffs.planes[i]), dir / name);
      }
    }
    log << "ok   " << input.string() << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    log << "FAIL " << input.string() << ": " << e.what() << '\n';
    return kExitPartialFailure;
  }
}

EvalRun run_eval(const fs::path& truth_dir, const fs::path& est_dir,
                 const EvalOptions& opts, std::ostream& log) {
  EvalRun run;
  std::map<std::string, fs::path> estimates;
  for (const fs::path& p : list_rect_files(est_dir)) estimates[stem_of(p)] = p;

  std::vector<EvalPair> pairs;
  for (const fs::path& truth : list_rect_files(truth_dir)) {
    const std::string stem = stem_of(truth);
    EvalPair pair;
    pair.frame = stem;
    try {
      pair.targets = read_rects(truth);
      if (auto it = estimates.find(stem); it != estimates.end()) {
        pair.estimates = read_rects(it->second);
        estimates.erase(it);
      } else {
        log << "unpaired truth file " << truth.string() << " (no estimate)\n";
        run.unpaired.push_back(truth.string());
      }
    } catch (const std::exception& e) {
      log << "FAIL " << truth.string() << ": " << e.what() << '\n';
      run.exit_code = kExitPartialFailure;
      continue;
    }
    if (pair.targets.empty()) log << "warning: " << stem << " has empty ground truth, excluded\n";
    pairs.push_back(std::move(pair));
  }
  for (const auto& [stem, path] : estimates) {
    log << "unpaired estimate file " << path.string() << " (no truth)\n";
    run.unpaired.push_back(path.string());
  }
  if (!run.unpaired.empty()) run.exit_code = kExitPartialFailure;

  run.report = evaluate(pairs, opts);
  return run;
}

int cmd_eval(const fs::path& truth_dir, const fs::path& est_dir, const fs::path& report_path,
             const EvalOptions& opts, std::ostream& out, std::ostream& log) {
  std::error_code ec;
  if (!fs::is_directory(truth_dir, ec)) {
    log << "truth directory not found: " << truth_dir.string() << '\n';
    return kExitBadInvocation;
  }
  EvalRun run = run_eval(truth_dir, est_dir, opts, log);
  try {
    if (report_path.has_parent_path()) fs::create_directories(report_path.parent_path());
    write_text(report_path, report_json(run.report));
    fs::path csv = report_path;
    csv.replace_extension(".csv");
    write_text(csv, report_csv(run.report));
  } catch (const std::exception& e) {
    log << "FAIL writing report: " << e.what() << '\n';
    return kExitPartialFailure;
  }
  char line[160];
  std::snprintf(line, sizeof line, "R=%.4f P=%.4f f=%.4f DR=%.4f FPR=%.4f MDR=%.4f\n",
                run.report.recall, run.report.precision, run.report.fmeasure,
                run.report.blocks.dr, run.report.blocks.fpr, run.report.blocks.mdr);
  out << line;
  return run.exit_code;
}

std::string bench_table(const RunManifest& manifest) {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof line, "%-12s %10s %10s %10s\n", "stage", "median_ms", "p90_ms",
                "max_ms");
  out << line;
  std::vector<double> totals;
  for (const ManifestEntry& e : manifest.frames) {
    if (e.ok) totals.push_back(e.total_ms());
  }
  for (std::size_t s = 0; s <= kStageCount; ++s) {
    std::vector<double> v;
    if (s == kStageCount) {
      v = totals;
    } else {
      for (const ManifestEntry& e : manifest.frames) {
        if (e.ok) v.push_back(e.timings[s]);
      }
    }
    const std::string name = s == kStageCount ? "total" : std::string(kStageNames[s]);
    std::snprintf(line, sizeof line, "%-12s %10.2f %10.2f %10.2f\n", name.c_str(),
                  percentile(v, 0.5), percentile(v, 0.9),
                  v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()));
    out << line;
  }
  return out.str();
}

int cmd_bench(const std::vector<fs::path>& inputs, const PipelineConfig& cfg,
              std::ostream& out, std::ostream& log) {
  PipelineConfig bench_cfg = cfg;
  bench_cfg.threads = 1;  // uncontended per-stage timings
  const DetectRun run = run_detect(inputs, bench_cfg, false, log);
  out << "frames: " << run.manifest.frames.size() << '\n' << bench_table(run.manifest);
  return run.exit_code;
}

namespace {

// Tuning flags shared by detect, separate and bench. Values given on the
// command line override the config file.
struct PipelineFlags {
  std::string config;
  std::string out;
  int threads = 0;
  int iterations = 0;
  std::vector<double> weights;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  int tpr_window = 0;
  double tpr_threshold = 0.0;
  int min_box = 0;

  std::map<std::string, CLI::Option*> opts;

  void add(CLI::App* app, bool with_out) {
    opts["config"] = app->add_option("--config", config, "key = value config file");
    if (with_out) opts["out"] = app->add_option("--out", out, "output directory");
    opts["threads"] = app->add_option("--threads", threads, "frame-level workers (0 = auto)");
    opts["iterations"] = app->add_option("--iterations", iterations, "separation iterations");
    opts["weights"] = app->add_option("--weights", weights, "4 sub-band weights, low to high")
                          ->expected(4)
                          ->delimiter(',');
    opts["lambda_min"] = app->add_option("--lambda-min", lambda_min, "final threshold");
    opts["lambda_max"] = app->add_option("--lambda-max", lambda_max, "initial threshold");
    opts["tpr_window"] = app->add_option("--tpr-window", tpr_window, "TPR window side N");
    opts["tpr_threshold"] = app->add_option("--tpr-threshold", tpr_threshold, "TPR threshold T");
    opts["min_box"] = app->add_option("--min-box", min_box, "minimum box side (working grid)");
  }

  bool given(const std::string& name) const {
    auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }

  PipelineConfig resolve() const {
    PipelineConfig cfg;
    if (!config.empty()) apply_config_file(config, cfg);
    if (given("out")) cfg.out_dir = out;
    if (given("threads")) cfg.threads = threads;
    if (given("iterations")) cfg.separation.iterations = iterations;
    if (given("weights")) cfg.separation.subband_weights = weights;
    if (given("lambda_min")) cfg.separation.lambda_min = lambda_min;
    if (given("lambda_max")) cfg.separation.lambda_max = lambda_max;
    if (given("tpr_window")) cfg.refine.window = tpr_window;
    if (given("tpr_threshold")) cfg.refine.tpr_threshold = tpr_threshold;
    if (given("min_box")) cfg.refine.min_box = min_box;
    validate(cfg);
    return cfg;
  }
};

std::vector<fs::path> to_paths(const std::vector<std::string>& v) {
  return {v.begin(), v.end()};
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Video frame text localization with wavelet and shearlet features"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  PipelineFlags detect_flags;
  std::vector<std::string> detect_inputs;
  bool annotate = false, dump_cluster = false, dump_refined = false;
  auto* detect = app.add_subcommand("detect", "detect text boxes in frames");
  detect_flags.add(detect, true);
  auto* annotate_opt = detect->add_flag("--annotate", annotate, "write <stem>_boxes.png");
  auto* cluster_opt = detect->add_flag("--dump-cluster", dump_cluster, "write the K-means mask");
  auto* refined_opt = detect->add_flag("--dump-refined", dump_refined, "write the refined mask");
  detect->add_option("inputs", detect_inputs, "frames or directories")->required();

  PipelineFlags sep_flags;
  std::string sep_input;
  bool dump_coeffs = false;
  auto* sep = app.add_subcommand("separate", "dump point/curve/combined/residual images");
  sep_flags.add(sep, true);
  sep->add_flag("--dump-coeffs", dump_coeffs, "also dump every sub-band and filter plane");
  sep->add_option("input", sep_input, "frame")->required();

  std::string truth, est, report = "report.json";
  EvalOptions eval_opts;
  auto* ev = app.add_subcommand("eval", "score estimates against ground truth");
  ev->add_option("--truth", truth, "ground-truth rect directory")->required();
  ev->add_option("--est", est, "estimate rect directory")->required();
  ev->add_option("--out", report, "JSON report path (CSV written alongside)");
  ev->add_option("--alpha", eval_opts.alpha, "f-measure precision weight");
  ev->add_option("--tau-detect", eval_opts.tau_detect, "match above which a block is detected");
  ev->add_option("--tau-full", eval_opts.tau_full, "target coverage below which a hit is MDB");

  PipelineFlags bench_flags;
  std::vector<std::string> bench_inputs;
  auto* bench = app.add_subcommand("bench", "per-stage timings");
  bench_flags.add(bench, false);
  bench->add_option("inputs", bench_inputs, "frames or directories")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadInvocation;
  }

  try {
    if (detect->parsed()) {
      PipelineConfig cfg = detect_flags.resolve();
      if (annotate_opt->count()) cfg.annotate = true;
      if (cluster_opt->count()) cfg.dump_cluster = true;
      if (refined_opt->count()) cfg.dump_refined = true;
      return cmd_detect(to_paths(detect_inputs), cfg, std::cerr);
    }
    if (sep->parsed()) {
      return cmd_separate(sep_input, sep_flags.resolve(), dump_coeffs, std::cerr);
    }
    if (ev->parsed()) {
      if (!(eval_opts.alpha >= 0.0 && eval_opts.alpha <= 1.0) ||
          !(eval_opts.tau_detect >= 0.0 && eval_opts.tau_detect <= eval_opts.tau_full &&
            eval_opts.tau_full <= 1.0)) {
        std::cerr << "eval: need 0 <= alpha <= 1 and 0 <= tau-detect <= tau-full <= 1\n";
        return kExitBadInvocation;
      }
      return cmd_eval(truth, est, report, eval_opts, std::cout, std::cerr);
    }
    if (bench->parsed()) {
      return cmd_bench(to_paths(bench_inputs), bench_flags.resolve(), std::cout, std::cerr);
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitBadInvocation;
  }
  return kExitBadInvocation;
}

}  // namespace sheartext
