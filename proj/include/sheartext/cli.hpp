#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sheartext/evaluate.hpp"
#include "sheartext/pipeline.hpp"

namespace sheartext {

enum ExitCode : int {
  kExitOk = 0,
  kExitPartialFailure = 1,
  kExitBadInvocation = 2,
};

struct ManifestEntry {
  std::filesystem::path input;
  bool ok = false;
  std::string error;
  std::vector<std::filesystem::path> outputs;
  StageTimings timings{};
  std::size_t boxes = 0;

  double total_ms() const;
};

struct RunManifest {
  std::vector<ManifestEntry> frames;
  std::string config;  // describe_config() snapshot
  std::string version{kVersion};
};

std::string manifest_json(const RunManifest& manifest);

/// Files are taken as given; directories contribute their PNG/BMP/JPEG
/// files in sorted order.
std::vector<std::filesystem::path> expand_inputs(
    const std::vector<std::filesystem::path>& inputs);

struct DetectRun {
  RunManifest manifest;
  std::vector<std::vector<Rect>> boxes;  // per input, empty for failures
  int exit_code = kExitOk;
};

/// Detection over all inputs with a frame-level worker pool. Outputs are
/// written per frame into cfg.out_dir as <stem>.txt (plus optional PNGs);
/// manifest.json is written alongside when `write_outputs` is set.
DetectRun run_detect(const std::vector<std::filesystem::path>& inputs,
                     const PipelineConfig& cfg, bool write_outputs,
                     std::ostream& log);

int cmd_detect(const std::vector<std::filesystem::path>& inputs,
               const PipelineConfig& cfg, std::ostream& log);

/// Writes <stem>_point.png, _curve.png, _combined.png, _residual.png and,
/// with `dump_coeffs`, one PNG per wavelet sub-band and shearlet filter.
int cmd_separate(const std::filesystem::path& input, const PipelineConfig& cfg,
                 bool dump_coeffs, std::ostream& log);

struct EvalRun {
  EvalReport report;
  std::vector<std::string> unpaired;
  int exit_code = kExitOk;
};

/// Pairs <stem>.txt files by stem. A truth file without an estimate is
/// scored against an empty estimate list; either kind of unpaired file makes
/// the run a partial failure.
EvalRun run_eval(const std::filesystem::path& truth_dir,
                 const std::filesystem::path& est_dir, const EvalOptions& opts,
                 std::ostream& log);

/// Writes the JSON summary to `report_path` and the CSV next to it
/// (same stem, .csv extension).
int cmd_eval(const std::filesystem::path& truth_dir,
             const std::filesystem::path& est_dir,
             const std::filesystem::path& report_path, const EvalOptions& opts,
             std::ostream& out, std::ostream& log);

int cmd_bench(const std::vector<std::filesystem::path>& inputs,
              const PipelineConfig& cfg, std::ostream& out, std::ostream& log);

/// Per-stage summary table (median, 90th percentile, max).
std::string bench_table(const RunManifest& manifest);

int run_cli(int argc, char** argv);

}  // namespace sheartext
