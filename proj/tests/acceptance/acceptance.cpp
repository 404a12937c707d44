// Acceptance gate: one line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "sheartext/cli.hpp"
#include "sheartext/evaluate.hpp"
#include "sheartext/frame_io.hpp"
#include "sheartext/haar.hpp"
#include "sheartext/separation.hpp"
#include "sheartext/shearlet.hpp"
#include "sheartext/textmap.hpp"
#include "synthetic.hpp"
#include "tempdir.hpp"

using namespace sheartext;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& check) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("[%s] AC%d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(),
              o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double energy(const GrayImage& img) {
  double s = 0.0;
  for (double v : img.values()) s += v * v;
  return s;
}

double energy(const WaveletPyramid& p) {
  double s = energy(p.approx);
  for (const HaarDetail& d : p.details) s += energy(d.horizontal) + energy(d.vertical) + energy(d.diagonal);
  return s;
}

const ShearletSystem& system256() {
  static const ShearletSystem sys = build_shearlet_system(256, kShearletScales);
  return sys;
}

Outcome table1() {
  struct Row {
    double p, r, f;
  };
  double worst = 0.0;
  for (const Row& row : {Row{80.35, 76.94, 78.61}, Row{73.26, 52.58, 61.22},
                         Row{86.95, 84.38, 85.66}, Row{85.64, 87.23, 86.43}}) {
    worst = std::max(worst, std::abs(100.0 * fmeasure(row.p / 100, row.r / 100, 0.5) - row.f));
  }
  return {worst <= 0.02, fmt("max |f - reported| = %.4f points (tol 0.02)", worst)};
}

Outcome haar() {
  std::mt19937_64 rng(2001);
  double worst_rec = 0.0, worst_parseval = 0.0;
  for (int i = 0; i < 100; ++i) {
    const GrayImage img = testing::random_image(256, 256, rng);
    const WaveletPyramid pyr = dwt2_haar(img, kHaarLevels);
    const GrayImage back = idwt2_haar(pyr);
    for (std::size_t k = 0; k < img.size(); ++k) worst_rec = std::max(worst_rec, std::abs(img[k] - back[k]));
    const double e = energy(img);
    worst_parseval = std::max(worst_parseval, std::abs(energy(pyr) - e) / e);
  }
  return {worst_rec < 1e-10 && worst_parseval < 1e-10,
          fmt("max reconstruction error %.3g (tol 1e-10), max relative Parseval gap %.3g (tol 1e-10)",
              worst_rec, worst_parseval)};
}

Outcome tight_frame() {
  const ShearletSystem& sys = system256();
  double worst_frame = 0.0;
  for (std::size_t i = 0; i < 256u * 256u; ++i) {
    double s = 0.0;
    for (const ShearletFilter& f : sys.filters()) s += f.response[i] * f.response[i];
    worst_frame = std::max(worst_frame, std::abs(s - 1.0));
  }
  std::mt19937_64 rng(2002);
  double worst_rmse = 0.0;
  for (int i = 0; i < 20; ++i) {
    const GrayImage img = testing::random_image(256, 256, rng);
    const GrayImage back = shearlet_synthesize(shearlet_analyze(img, sys), sys);
    double s = 0.0;
    for (std::size_t k = 0; k < img.size(); ++k) s += (img[k] - back[k]) * (img[k] - back[k]);
    worst_rmse = std::max(worst_rmse, std::sqrt(s / static_cast<double>(img.size())));
  }
  return {worst_frame <= 1e-6 && worst_rmse < 1e-8,
          fmt("%zu filters, max |sum|psi|^2 - 1| = %.3g (tol 1e-6), max round-trip RMSE %.3g (tol 1e-8)",
              sys.filters().size(), worst_frame, worst_rmse)};
}

Outcome sd_oracle() {
  std::mt19937_64 rng(2003);
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const GrayImage img = testing::random_image(256, 256, rng);
    const GrayImage fast = sd_map(img);
    for (int y = 0; y < 256; ++y) {
      for (int x = 0; x < 256; ++x) {
        double vals[9];
        int n = 0;
        for (int j = -1; j <= 1; ++j) {
          for (int i = -1; i <= 1; ++i) {
            vals[n++] = img.at(std::clamp(x + i, 0, 255), std::clamp(y + j, 0, 255));
          }
        }
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= 9.0;
        double ss = 0.0;
        for (double v : vals) ss += (v - mean) * (v - mean);
        worst = std::max(worst, std::abs(fast.at(x, y) - std::sqrt(ss / 9.0)));
      }
    }
  }
  return {worst <= 1e-12, fmt("max deviation from nested-loop oracle %.3g (tol 1e-12)", worst)};
}

Outcome separation() {
  const ShearletSystem& sys = system256();
  std::vector<GrayImage> images{testing::dots_image(256), testing::curve_image(256)};
  std::mt19937_64 rng(2004);
  for (int i = 0; i < 3; ++i) images.push_back(testing::random_image(256, 256, rng));
  for (std::uint64_t seed = 3000; seed < 3005; ++seed) {
    images.push_back(resize_to_working(to_grayscale(testing::make_text_frame(seed).image)));
  }
  double worst = 0.0;
  double fraction[2] = {0, 0};
  for (std::size_t n = 0; n < images.size(); ++n) {
    const SeparationResult r = separate(images[n], sys);
    for (std::size_t k = 0; k < images[n].size(); ++k) {
      worst = std::max(worst, std::abs(r.point_part[k] + r.curve_part[k] + r.residual[k] - images[n][k]));
    }
    if (n < 2) {
      const double w = energy(r.point_part), s = energy(r.curve_part);
      fraction[n] = w / (w + s);
    }
  }
  return {worst < 1e-9 && fraction[0] > fraction[1],
          fmt("max |W+S+r-f| = %.3g over %zu images (tol 1e-9); wavelet energy fraction dots %.4f > curve %.4f",
              worst, images.size(), fraction[0], fraction[1])};
}

Outcome match_metric() {
  std::mt19937_64 rng(2005);
  std::uniform_int_distribution<int> pos(0, 60);
  std::uniform_int_distribution<int> dim(1, 30);
  bool ok = true;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Rect a{pos(rng), pos(rng), dim(rng), dim(rng)};
    const Rect b{pos(rng), pos(rng), dim(rng), dim(rng)};
    const double m = match_score(a, b);
    ok = ok && m == match_score(b, a) && m >= 0.0 && m <= 1.0;
    ok = ok && match_score(a, a) == 1.0;
    const Rect far{a.right() + 1, a.bottom() + 1, dim(rng), dim(rng)};
    ok = ok && match_score(a, far) == 0.0;

    const int x0 = std::min(a.x, b.x), y0 = std::min(a.y, b.y);
    const int x1 = std::max(a.right(), b.right()), y1 = std::max(a.bottom(), b.bottom());
    long long inter = 0;
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) {
        inter += x >= a.x && x < a.right() && y >= a.y && y < a.bottom() && x >= b.x &&
                 x < b.right() && y >= b.y && y < b.bottom();
      }
    }
    worst = std::max(worst, std::abs(m - static_cast<double>(inter) / ((x1 - x0) * double(y1 - y0))));
  }
  return {ok && worst <= 1e-12,
          fmt("symmetry/range/identity/disjoint %s; max deviation from pixel-count oracle %.3g (tol 1e-12)",
              ok ? "hold" : "VIOLATED", worst)};
}

struct Corpus {
  testing::TempDir dir{"acceptance"};
  std::vector<fs::path> frames;
};

Corpus& corpus() {
  static Corpus c;
  static const bool ready = [] {
    fs::create_directories(c.dir / "frames");
    fs::create_directories(c.dir / "truth");
    for (std::uint64_t seed = 1000; seed < 1020; ++seed) {
      const testing::TextFrame f = testing::make_text_frame(seed);
      const std::string stem = "frame" + std::to_string(seed);
      c.frames.push_back(c.dir / "frames" / (stem + ".png"));
      write_png(f.image, c.frames.back());
      write_rects(f.truth, c.dir / "truth" / (stem + ".txt"));
    }
    return true;
  }();
  (void)ready;
  return c;
}

DetectRun detect_into(const std::string& out, int threads, double* wall_seconds) {
  PipelineConfig cfg;
  cfg.out_dir = corpus().dir / out;
  cfg.threads = threads;
  std::ostringstream log;
  const auto start = std::chrono::steady_clock::now();
  DetectRun run = run_detect(corpus().frames, cfg, true, log);
  if (wall_seconds) {
    *wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return run;
}

Outcome end_to_end() {
  double wall = 0.0;
  const DetectRun run = detect_into("run1", 1, &wall);
  std::ostringstream log;
  const EvalRun ev = run_eval(corpus().dir / "truth", corpus().dir / "run1", {}, log);
  const double r = ev.report.recall, p = ev.report.precision;
  return {run.exit_code == kExitOk && r >= 0.80 && p >= 0.70,
          fmt("20 frames: R=%.4f (floor 0.80) P=%.4f (floor 0.70) f=%.4f",
              r, p, ev.report.fmeasure)};
}

Outcome runtime() {
  double wall = 0.0;
  const DetectRun run = detect_into("timing", 1, &wall);
  double worst = 0.0;
  std::vector<double> totals;
  for (const ManifestEntry& e : run.manifest.frames) totals.push_back(e.total_ms() / 1000.0);
  std::sort(totals.begin(), totals.end());
  worst = totals.empty() ? 0.0 : totals.back();
  const double per_frame = wall / static_cast<double>(run.manifest.frames.size());
  return {run.exit_code == kExitOk && worst <= 10.0 && per_frame <= 10.0,
          fmt("single worker: max %.3f s, median %.3f s, wall %.3f s per frame (budget 10 s)",
              worst, totals[totals.size() / 2], per_frame)};
}

Outcome determinism() {
  const DetectRun serial = detect_into("det_a", 1, nullptr);
  const DetectRun pooled = detect_into("det_b", 4, nullptr);
  int mismatched = 0;
  for (const fs::path& f : corpus().frames) {
    const std::string name = f.stem().string() + ".txt";
    if (slurp(corpus().dir / "det_a" / name) != slurp(corpus().dir / "det_b" / name)) ++mismatched;
  }
  std::ostringstream out, log;
  const fs::path ra = corpus().dir / "rep_a" / "report.json";
  const fs::path rb = corpus().dir / "rep_b" / "report.json";
  cmd_eval(corpus().dir / "truth", corpus().dir / "det_a", ra, {}, out, log);
  cmd_eval(corpus().dir / "truth", corpus().dir / "det_b", rb, {}, out, log);
  const bool reports_equal =
      slurp(ra) == slurp(rb) && slurp(fs::path(ra).replace_extension(".csv")) ==
                                    slurp(fs::path(rb).replace_extension(".csv"));
  const bool ok = serial.exit_code == kExitOk && pooled.exit_code == kExitOk && mismatched == 0 &&
                  reports_equal && serial.boxes == pooled.boxes;
  return {ok, fmt("1 vs 4 workers: %d of %zu rect lists differ; reports %s", mismatched,
                  corpus().frames.size(), reports_equal ? "byte-identical" : "DIFFER")};
}

}  // namespace

int main() {
  ::unsetenv("SHEARTEXT_THREADS");
  report(1, "Table 1 f-measure identity", table1);
  report(2, "Haar perfect reconstruction", haar);
  report(3, "Shearlet tight frame", tight_frame);
  report(4, "SD map oracle equivalence", sd_oracle);
  report(5, "Separation exactness and direction", separation);
  report(6, "Match score metric properties", match_metric);
  report(7, "Synthetic end-to-end", end_to_end);
  report(8, "Runtime envelope", runtime);
  report(9, "Determinism", determinism);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
