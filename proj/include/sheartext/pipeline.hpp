#pragma once

#include <array>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sheartext/image.hpp"
#include "sheartext/refine.hpp"
#include "sheartext/separation.hpp"
#include "sheartext/shearlet.hpp"

namespace sheartext {

inline constexpr std::string_view kVersion = "0.1.0";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  SeparationConfig separation;
  RefineConfig refine;
  int kmeans_max_sweeps = 100;

  std::filesystem::path out_dir = ".";
  bool annotate = false;
  bool dump_cluster = false;
  bool dump_refined = false;
  /// Frame-level workers; 0 picks the hardware concurrency. Capped by the
  /// SHEARTEXT_THREADS environment variable.
  int threads = 0;
};

void validate(const PipelineConfig& cfg);

/// Applies `key = value` lines ('#' starts a comment) on top of `cfg`.
/// Throws ConfigError on unknown keys or malformed values.
void apply_config_text(const std::string& text, PipelineConfig& cfg);
void apply_config_file(const std::filesystem::path& path, PipelineConfig& cfg);

/// Canonical `key = value` rendering of every setting.
std::string describe_config(const PipelineConfig& cfg);

enum Stage : std::size_t {
  kStageLoad,
  kStagePreprocess,
  kStageSeparate,
  kStageFeatures,
  kStageCluster,
  kStageRefine,
  kStageBoxes,
  kStageCount,
};

inline constexpr std::array<std::string_view, kStageCount> kStageNames = {
    "load", "preprocess", "separate", "features", "cluster", "refine", "boxes"};

using StageTimings = std::array<double, kStageCount>;  // milliseconds

struct FrameDetection {
  std::vector<Rect> boxes;  // original frame coordinates
  TextMask cluster;         // K-means text cluster on the working grid
  TextMask refined;         // after TPR filtering and closing
  StageTimings timings{};
};

/// Runs grayscale -> resize -> separate -> SD features -> K-means -> text
/// cluster -> TPR -> closing -> components -> boxes on one decoded frame.
FrameDetection detect_frame(const ColorImage& frame, const ShearletSystem& sys,
                            const PipelineConfig& cfg);

/// Worker count after applying the environment cap.
int effective_threads(int requested, std::size_t jobs);

}  // namespace sheartext
