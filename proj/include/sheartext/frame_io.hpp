#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "sheartext/image.hpp"

namespace sheartext {

enum class FrameErrorKind {
  kMissingFile,
  kDecodeError,
  kUnsupportedFormat,
  kWriteError,
  kParseError,
};

class FrameError : public std::runtime_error {
 public:
  FrameError(FrameErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  FrameErrorKind kind() const { return kind_; }

 private:
  FrameErrorKind kind_;
};

inline constexpr int kWorkingSize = 256;

/// Decodes a PNG, BMP or JPEG file. The format is identified from the
/// file's magic bytes, not its extension.
ColorImage load_frame(const std::filesystem::path& path);

/// BT.601 luminance, kept as real values in [0, 255].
GrayImage to_grayscale(const ColorImage& img);

/// Bilinear resample to kWorkingSize x kWorkingSize (pixel-center aligned).
/// A working-size input is returned unchanged.
GrayImage resize_to_working(const GrayImage& img);

/// Bilinear resample to an arbitrary size, same sampling convention.
GrayImage resize_bilinear(const GrayImage& img, int width, int height);

/// Min-max quantization to 256 bins rendered blue (lowest) to red (highest).
/// A constant image maps entirely to bin 0.
ColorImage pseudo_color(const GrayImage& coeffs);

/// Quantization bin in [0, 255] used by pseudo_color for each pixel.
std::vector<int> pseudo_color_bins(const GrayImage& coeffs);

/// Text rendered black on white, background white.
ColorImage render_mask(const TextMask& mask);

ColorImage gray_to_color(const GrayImage& img);

/// Draws 2-pixel outlines (inside each rectangle) in list order, so later
/// boxes overwrite earlier ones where they overlap.
ColorImage draw_boxes(const ColorImage& img, const std::vector<Rect>& boxes,
                      Rgb color = Rgb{0, 255, 0});

void write_png(const ColorImage& img, const std::filesystem::path& path);

void write_annotated(const ColorImage& img, const std::vector<Rect>& boxes,
                     const std::filesystem::path& path);

/// Rect list text format: one "x y w h" per line, '#' comment lines ignored.
std::vector<Rect> parse_rects(const std::string& text);
std::vector<Rect> read_rects(const std::filesystem::path& path);
std::string format_rects(const std::vector<Rect>& rects);
void write_rects(const std::vector<Rect>& rects,
                 const std::filesystem::path& path);

}  // namespace sheartext
