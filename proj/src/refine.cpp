#include "sheartext/refine.hpp"

#include <algorithm>
#include <stdexcept>

namespace sheartext {
namespace {

// Summed-area table with a zero first row and column.
std::vector<int> integral(const TextMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<int> sat(static_cast<std::size_t>(w + 1) * (h + 1), 0);
  for (int y = 0; y < h; ++y) {
    int row = 0;
    for (int x = 0; x < w; ++x) {
      row += mask.at(x, y) ? 1 : 0;
      sat[(y + 1) * (w + 1) + x + 1] = sat[y * (w + 1) + x + 1] + row;
    }
  }
  return sat;
}

int box_count(const std::vector<int>& sat, int w, int h, int x, int y,
              int radius) {
  const int x0 = std::max(x - radius, 0);
  const int y0 = std::max(y - radius, 0);
  const int x1 = std::min(x + radius + 1, w);
  const int y1 = std::min(y + radius + 1, h);
  const int stride = w + 1;
  return sat[y1 * stride + x1] - sat[y0 * stride + x1] - sat[y1 * stride + x0] +
         sat[y0 * stride + x0];
}

TextMask dilate_3x3(const TextMask& m) {
  TextMask out(m.width(), m.height());
  const auto sat = integral(m);
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      out.at(x, y) = box_count(sat, m.width(), m.height(), x, y, 1) > 0;
    }
  }
  return out;
}

TextMask erode_3x3(const TextMask& m) {
  TextMask out(m.width(), m.height());
  const auto sat = integral(m);
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      // Out-of-frame neighbours are non-text, so the full window must lie
      // inside the frame.
      out.at(x, y) = box_count(sat, m.width(), m.height(), x, y, 1) == 9;
    }
  }
  return out;
}

Rect unite(const Rect& a, const Rect& b) {
  const int x0 = std::min(a.x, b.x);
  const int y0 = std::min(a.y, b.y);
  const int x1 = std::max(a.right(), b.right());
  const int y1 = std::max(a.bottom(), b.bottom());
  return Rect{x0, y0, x1 - x0, y1 - y0};
}

}  // namespace

void validate(const RefineConfig& cfg) {
  if (cfg.window < 3 || cfg.window % 2 == 0) {
    throw std::invalid_argument("refine: window must be odd and >= 3");
  }
  if (!(cfg.tpr_threshold >= 0.0 && cfg.tpr_threshold <= 1.0)) {
    throw std::invalid_argument("refine: tpr_threshold must be in [0, 1]");
  }
  if (cfg.min_box < 1) {
    throw std::invalid_argument("refine: min_box must be >= 1");
  }
  if (!(cfg.merge_min_overlap >= 0.0 && cfg.merge_min_overlap <= 1.0) ||
      !(cfg.merge_gap_factor >= 0.0)) {
    throw std::invalid_argument("refine: invalid merge parameters");
  }
}

double text_presence_ratio(const TextMask& mask, int x, int y, int window) {
  const int radius = window / 2;
  int count = 0;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      const int xx = x + dx;
      const int yy = y + dy;
      if (xx >= 0 && yy >= 0 && xx < mask.width() && yy < mask.height() &&
          mask.at(xx, yy)) {
        ++count;
      }
    }
  }
  return static_cast<double>(count) / (window * window);
}

TextMask tpr_filter(const TextMask& mask, const RefineConfig& cfg) {
  validate(cfg);
  const int radius = cfg.window / 2;
  const double area = static_cast<double>(cfg.window) * cfg.window;
  const auto sat = integral(mask);
  TextMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      const int count = box_count(sat, mask.width(), mask.height(), x, y, radius);
      out.at(x, y) = count / area >= cfg.tpr_threshold;
    }
  }
  return out;
}

TextMask close_3x3(const TextMask& mask) { return erode_3x3(dilate_3x3(mask)); }

std::vector<Region> extract_components(const TextMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<char> seen(mask.size(), 0);
  std::vector<Region> regions;
  std::vector<int> stack;

  for (int start = 0; start < static_cast<int>(mask.size()); ++start) {
    if (!mask[start] || seen[start]) continue;
    Region region;
    int x0 = w, y0 = h, x1 = -1, y1 = -1;
    stack.push_back(start);
    seen[start] = 1;
    while (!stack.empty()) {
      const int p = stack.back();
      stack.pop_back();
      region.pixels.push_back(p);
      const int px = p % w;
      const int py = p / w;
      x0 = std::min(x0, px);
      x1 = std::max(x1, px);
      y0 = std::min(y0, py);
      y1 = std::max(y1, py);
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = px + dx;
          const int ny = py + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const int q = ny * w + nx;
          if (mask[q] && !seen[q]) {
            seen[q] = 1;
            stack.push_back(q);
          }
        }
      }
    }
    std::sort(region.pixels.begin(), region.pixels.end());
    region.bounds = Rect{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
    regions.push_back(std::move(region));
  }
  return regions;
}

bool should_merge(const Rect& a, const Rect& b, const RefineConfig& cfg) {
  const int overlap = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (overlap < cfg.merge_min_overlap * std::min(a.h, b.h)) return false;
  const int gap = std::max(b.x - a.right(), a.x - b.right());
  return gap <= cfg.merge_gap_factor * std::max(a.h, b.h);
}

std::vector<Rect> merge_boxes(std::vector<Rect> boxes, const RefineConfig& cfg) {
  std::erase_if(boxes, [&](const Rect& r) {
    return r.w < cfg.min_box || r.h < cfg.min_box;
  });
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < boxes.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < boxes.size(); ++j) {
        if (should_merge(boxes[i], boxes[j], cfg)) {
          boxes[i] = unite(boxes[i], boxes[j]);
          boxes.erase(boxes.begin() + static_cast<std::ptrdiff_t>(j));
          merged = true;
          break;
        }
      }
    }
  }
  std::sort(boxes.begin(), boxes.end());
  return boxes;
}

Rect rescale_rect(const Rect& r, int from_w, int from_h, int to_w, int to_h) {
  auto lo = [](long long v, int from, int to) {
    return static_cast<int>(v * to / from);
  };
  auto hi = [](long long v, int from, int to) {
    return static_cast<int>((v * to + from - 1) / from);
  };
  const int x0 = std::clamp(lo(r.x, from_w, to_w), 0, to_w - 1);
  const int y0 = std::clamp(lo(r.y, from_h, to_h), 0, to_h - 1);
  const int x1 = std::clamp(hi(r.right(), from_w, to_w), x0 + 1, to_w);
  const int y1 = std::clamp(hi(r.bottom(), from_h, to_h), y0 + 1, to_h);
  return Rect{x0, y0, x1 - x0, y1 - y0};
}

std::vector<Rect> to_boxes(const std::vector<Region>& regions,
                           const RefineConfig& cfg, int original_width,
                           int original_height, int grid_width,
                           int grid_height) {
  validate(cfg);
  std::vector<Rect> boxes;
  boxes.reserve(regions.size());
  for (const Region& r : regions) boxes.push_back(r.bounds);
  boxes = merge_boxes(std::move(boxes), cfg);
  for (Rect& b : boxes) {
    b = rescale_rect(b, grid_width, grid_height, original_width, original_height);
  }
  std::sort(boxes.begin(), boxes.end());
  return boxes;
}

}  // namespace sheartext
