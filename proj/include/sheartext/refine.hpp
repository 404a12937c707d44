#pragma once

#include <vector>

#include "sheartext/image.hpp"

namespace sheartext {

struct RefineConfig {
  int window = 7;              // TPR window side, odd
  double tpr_threshold = 0.5;  // keep a pixel when TPR >= threshold
  int min_box = 8;             // drop components narrower or shorter than this
  /// Two boxes join a line when their vertical overlap is at least this
  /// fraction of the shorter height...
  double merge_min_overlap = 0.5;
  /// ...and their horizontal gap is at most this multiple of the taller height.
  double merge_gap_factor = 1.0;
};

void validate(const RefineConfig& cfg);

struct Region {
  std::vector<int> pixels;  // raster indices into the mask
  Rect bounds;
};

/// Text presence ratio filter over a centered window (out-of-frame cells
/// count as non-text).
TextMask tpr_filter(const TextMask& mask, const RefineConfig& cfg);

/// Text presence ratio at one pixel; exposed for inspection and tests.
double text_presence_ratio(const TextMask& mask, int x, int y, int window);

/// 3x3 dilation followed by 3x3 erosion, out-of-frame treated as non-text.
TextMask close_3x3(const TextMask& mask);

/// Maximal 8-connected text components, ordered by their first pixel in
/// raster order.
std::vector<Region> extract_components(const TextMask& mask);

bool should_merge(const Rect& a, const Rect& b, const RefineConfig& cfg);

/// Drops small components, merges boxes into lines until no pair qualifies,
/// then maps grid coordinates (grid_width x grid_height) back to the
/// original frame size. Output is sorted.
std::vector<Rect> to_boxes(const std::vector<Region>& regions,
                           const RefineConfig& cfg, int original_width,
                           int original_height, int grid_width,
                           int grid_height);

/// Only the filtering and merging steps, in grid coordinates.
std::vector<Rect> merge_boxes(std::vector<Rect> boxes, const RefineConfig& cfg);

/// Maps a rect from a grid of one size onto another, rounding outward and
/// clamping to the target bounds.
Rect rescale_rect(const Rect& r, int from_w, int from_h, int to_w, int to_h);

}  // namespace sheartext
