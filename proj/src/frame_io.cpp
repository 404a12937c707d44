#include "sheartext/frame_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include <opencv2/core.hpp>
#include <opencv2/core/utils/logger.hpp>
#include <opencv2/imgcodecs.hpp>

namespace sheartext {
namespace fs = std::filesystem;

namespace {

enum class Format { kPng, kBmp, kJpeg };

std::vector<unsigned char> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FrameError(FrameErrorKind::kDecodeError,
                     "cannot open " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Format sniff(const std::vector<unsigned char>& bytes, const fs::path& path) {
  static constexpr std::array<unsigned char, 8> kPngMagic = {
      0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() < 4) {
    throw FrameError(FrameErrorKind::kDecodeError,
                     "file too short to decode: " + path.string());
  }
  if (bytes.size() >= kPngMagic.size() &&
      std::equal(kPngMagic.begin(), kPngMagic.end(), bytes.begin())) {
    return Format::kPng;
  }
  if (bytes[0] == 'B' && bytes[1] == 'M') return Format::kBmp;
  if (bytes[0] == 0xff && bytes[1] == 0xd8 && bytes[2] == 0xff) {
    return Format::kJpeg;
  }
  throw FrameError(FrameErrorKind::kUnsupportedFormat,
                   "unsupported raster format: " + path.string());
}

void silence_opencv() {
  static const bool once = [] {
    cv::utils::logging::setLogLevel(cv::utils::logging::LOG_LEVEL_SILENT);
    return true;
  }();
  (void)once;
}

}  // namespace

ColorImage load_frame(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw FrameError(FrameErrorKind::kMissingFile,
                     "no such file: " + path.string());
  }
  const auto bytes = read_bytes(path);
  sniff(bytes, path);
  silence_opencv();

  cv::Mat decoded;
  try {
    decoded = cv::imdecode(bytes, cv::IMREAD_COLOR);
  } catch (const cv::Exception&) {
    decoded.release();
  }
  if (decoded.empty() || decoded.type() != CV_8UC3) {
    throw FrameError(FrameErrorKind::kDecodeError,
                     "cannot decode " + path.string());
  }

  ColorImage out(decoded.cols, decoded.rows);
  for (int y = 0; y < decoded.rows; ++y) {
    const auto* row = decoded.ptr<cv::Vec3b>(y);
    for (int x = 0; x < decoded.cols; ++x) {
      // OpenCV decodes to BGR.
      out.at(x, y) = Rgb{row[x][2], row[x][1], row[x][0]};
    }
  }
  return out;
}

GrayImage to_grayscale(const ColorImage& img) {
  GrayImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    const Rgb p = img[i];
    if (p.r == p.g && p.g == p.b) {
      out[i] = p.r;
    } else {
      out[i] = 0.299 * p.r + 0.587 * p.g + 0.114 * p.b;
    }
  }
  return out;
}

GrayImage resize_bilinear(const GrayImage& img, int width, int height) {
  if (img.width() == width && img.height() == height) return img;

  GrayImage out(width, height);
  const double sx = static_cast<double>(img.width()) / width;
  const double sy = static_cast<double>(img.height()) / height;
  const int max_x = img.width() - 1;
  const int max_y = img.height() - 1;

  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, double(max_y));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, max_y);
    const double ty = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, double(max_x));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, max_x);
      const double tx = fx - x0;
      const double top = (1 - tx) * img.at(x0, y0) + tx * img.at(x1, y0);
      const double bot = (1 - tx) * img.at(x0, y1) + tx * img.at(x1, y1);
      out.at(x, y) = (1 - ty) * top + ty * bot;
    }
  }
  return out;
}

GrayImage resize_to_working(const GrayImage& img) {
  return resize_bilinear(img, kWorkingSize, kWorkingSize);
}

std::vector<int> pseudo_color_bins(const GrayImage& coeffs) {
  std::vector<int> bins(coeffs.size(), 0);
  if (coeffs.empty()) return bins;
  const auto [lo, hi] = std::minmax_element(coeffs.values().begin(),
                                            coeffs.values().end());
  const double range = *hi - *lo;
  if (!(range > 0)) return bins;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const double t = (coeffs[i] - *lo) / range;
    bins[i] = std::clamp(static_cast<int>(std::floor(t * 256.0)), 0, 255);
  }
  return bins;
}

ColorImage pseudo_color(const GrayImage& coeffs) {
  const auto bins = pseudo_color_bins(coeffs);
  ColorImage out(coeffs.width(), coeffs.height());
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const auto level = static_cast<std::uint8_t>(bins[i]);
    out[i] = Rgb{level, 0, static_cast<std::uint8_t>(255 - level)};
  }
  return out;
}

ColorImage render_mask(const TextMask& mask) {
  ColorImage out(mask.width(), mask.height(), Rgb{255, 255, 255});
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) out[i] = Rgb{0, 0, 0};
  }
  return out;
}

ColorImage gray_to_color(const GrayImage& img) {
  ColorImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    const auto v =
        static_cast<std::uint8_t>(std::clamp(std::lround(img[i]), 0L, 255L));
    out[i] = Rgb{v, v, v};
  }
  return out;
}

ColorImage draw_boxes(const ColorImage& img, const std::vector<Rect>& boxes,
                      Rgb color) {
  constexpr int kThickness = 2;
  ColorImage out = img;
  for (const Rect& r : boxes) {
    const int x0 = std::max(r.x, 0);
    const int y0 = std::max(r.y, 0);
    const int x1 = std::min(r.right(), img.width());
    const int y1 = std::min(r.bottom(), img.height());
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) {
        const bool edge = x - r.x < kThickness || r.right() - 1 - x < kThickness ||
                          y - r.y < kThickness || r.bottom() - 1 - y < kThickness;
        if (edge) out.at(x, y) = color;
      }
    }
  }
  return out;
}

void write_png(const ColorImage& img, const fs::path& path) {
  silence_opencv();
  cv::Mat mat(img.height(), img.width(), CV_8UC3);
  for (int y = 0; y < img.height(); ++y) {
    auto* row = mat.ptr<cv::Vec3b>(y);
    for (int x = 0; x < img.width(); ++x) {
      const Rgb p = img.at(x, y);
      row[x] = cv::Vec3b(p.b, p.g, p.r);
    }
  }
  std::vector<unsigned char> encoded;
  if (!cv::imencode(".png", mat, encoded)) {
    throw FrameError(FrameErrorKind::kWriteError, "PNG encoding failed");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(encoded.data()),
            static_cast<std::streamsize>(encoded.size()));
  if (!out) {
    throw FrameError(FrameErrorKind::kWriteError,
                     "cannot write " + path.string());
  }
}

void write_annotated(const ColorImage& img, const std::vector<Rect>& boxes,
                     const fs::path& path) {
  write_png(draw_boxes(img, boxes), path);
}

std::vector<Rect> parse_rects(const std::string& text) {
  std::vector<Rect> rects;
  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    long long v[4];
    std::string extra;
    if (!(fields >> v[0] >> v[1] >> v[2] >> v[3]) || (fields >> extra)) {
      throw FrameError(FrameErrorKind::kParseError,
                       "malformed rect on line " + std::to_string(lineno));
    }
    for (long long c : v) {
      if (c < 0 || c > 1'000'000'000) {
        throw FrameError(FrameErrorKind::kParseError,
                         "rect coordinate out of range on line " +
                             std::to_string(lineno));
      }
    }
    if (v[2] == 0 || v[3] == 0) {
      throw FrameError(FrameErrorKind::kParseError,
                       "empty rect on line " + std::to_string(lineno));
    }
    rects.push_back(Rect{int(v[0]), int(v[1]), int(v[2]), int(v[3])});
  }
  return rects;
}

std::vector<Rect> read_rects(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw FrameError(FrameErrorKind::kMissingFile,
                     "cannot read " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rects(buf.str());
}

std::string format_rects(const std::vector<Rect>& rects) {
  std::ostringstream out;
  out << "# x y w h\n";
  for (const Rect& r : rects) {
    out << r.x << ' ' << r.y << ' ' << r.w << ' ' << r.h << '\n';
  }
  return out.str();
}

void write_rects(const std::vector<Rect>& rects, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << format_rects(rects);
  if (!out) {
    throw FrameError(FrameErrorKind::kWriteError,
                     "cannot write " + path.string());
  }
}

}  // namespace sheartext
