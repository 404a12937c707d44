#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgproc.hpp>

namespace sheartext::testing {

GrayImage random_image(int width, int height, std::mt19937_64& rng, double lo,
                       double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  GrayImage img(width, height);
  for (double& v : img.values()) v = dist(rng);
  return img;
}

GrayImage dots_image(int size) {
  GrayImage img(size, size);
  for (int y = 8; y < size; y += 24) {
    for (int x = 8 + (y / 24 % 2) * 12; x < size; x += 24) img.at(x, y) = 255.0;
  }
  return img;
}

GrayImage curve_image(int size) {
  GrayImage img(size, size);
  const double cx = size / 2.0;
  const double cy = size / 2.0;
  const double radius = size * 0.35;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double d = std::hypot(x - cx, y - cy) - radius;
      // Anti-aliased ring about 1.5 px wide.
      img.at(x, y) = 255.0 * std::clamp(1.0 - std::abs(d) / 1.5, 0.0, 1.0);
    }
  }
  return img;
}

ColorImage to_color(const GrayImage& img) {
  ColorImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    const auto v = static_cast<std::uint8_t>(std::clamp(std::lround(img[i]), 0L, 255L));
    out[i] = Rgb{v, v, v};
  }
  return out;
}

namespace {

std::string random_line(std::mt19937_64& rng) {
  static const std::string kChars = "ABCDEFGHJKLMNPRSTUVWXYZ0123456789";
  std::uniform_int_distribution<int> words(2, 3);
  std::uniform_int_distribution<int> letters(3, 6);
  std::uniform_int_distribution<std::size_t> pick(0, kChars.size() - 1);
  std::string line;
  const int n = words(rng);
  for (int w = 0; w < n; ++w) {
    if (w) line += ' ';
    const int len = letters(rng);
    for (int i = 0; i < len; ++i) line += kChars[pick(rng)];
  }
  return line;
}

cv::Mat background(std::mt19937_64& rng, int width, int height) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  cv::Mat bg(height, width, CV_64FC3);
  const bool blobs = u(rng) < 0.5;
  const double angle = u(rng) * 2.0 * std::numbers::pi;
  const cv::Vec3d c0(40 + 80 * u(rng), 40 + 80 * u(rng), 40 + 80 * u(rng));
  const cv::Vec3d c1(40 + 80 * u(rng), 40 + 80 * u(rng), 40 + 80 * u(rng));

  struct Blob {
    double x, y, sigma;
    cv::Vec3d amp;
  };
  std::vector<Blob> spots;
  if (blobs) {
    for (int i = 0; i < 6; ++i) {
      spots.push_back({u(rng) * width, u(rng) * height, 20 + 40 * u(rng),
                       cv::Vec3d(60 * u(rng) - 30, 60 * u(rng) - 30, 60 * u(rng) - 30)});
    }
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double t = 0.5 + 0.5 * ((x - width / 2.0) * std::cos(angle) +
                                    (y - height / 2.0) * std::sin(angle)) /
                                   (0.75 * std::max(width, height));
      cv::Vec3d v = c0 * (1.0 - t) + c1 * t;
      for (const Blob& b : spots) {
        const double r2 = (x - b.x) * (x - b.x) + (y - b.y) * (y - b.y);
        v += b.amp * std::exp(-r2 / (2 * b.sigma * b.sigma));
      }
      bg.at<cv::Vec3d>(y, x) = v;
    }
  }
  return bg;
}

}  // namespace

TextFrame make_text_frame(std::uint64_t seed, int width, int height) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  cv::Mat bg = background(rng, width, height);
  cv::Mat canvas;
  bg.convertTo(canvas, CV_8UC3);

  TextFrame frame;
  const int lines = 1 + static_cast<int>(u(rng) * 3.0);
  const int band = height / lines;
  for (int l = 0; l < lines; ++l) {
    const double scale = 0.55 + 0.25 * u(rng);
    const int font = u(rng) < 0.5 ? cv::FONT_HERSHEY_SIMPLEX : cv::FONT_HERSHEY_DUPLEX;
    std::string text = random_line(rng);
    int baseline = 0;
    cv::Size size = cv::getTextSize(text, font, scale, 2, &baseline);
    while (size.width > width - 16 && text.size() > 4) {
      text.pop_back();
      size = cv::getTextSize(text, font, scale, 2, &baseline);
    }
    const int x = 8 + static_cast<int>(u(rng) * std::max(1, width - 16 - size.width));
    const int slack = std::max(1, band - size.height - 16);
    const int y = l * band + 8 + size.height + static_cast<int>(u(rng) * slack);

    cv::Mat mask = cv::Mat::zeros(height, width, CV_8UC1);
    cv::putText(mask, text, cv::Point(x, y), font, scale, cv::Scalar(255), 2, cv::LINE_8);
    const cv::Rect box = cv::boundingRect(mask);
    if (box.area() == 0) continue;

    const cv::Scalar mean = cv::mean(canvas(box));
    const double lum = 0.299 * mean[2] + 0.587 * mean[1] + 0.114 * mean[0];
    const cv::Vec3b ink = lum < 128 ? cv::Vec3b(245, 245, 245) : cv::Vec3b(10, 10, 10);
    canvas.setTo(ink, mask);
    frame.truth.push_back(Rect{box.x, box.y, box.width, box.height});
  }

  frame.image = ColorImage(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const cv::Vec3b p = canvas.at<cv::Vec3b>(y, x);
      frame.image.at(x, y) = Rgb{p[2], p[1], p[0]};
    }
  }
  return frame;
}

TextBlock make_text_block(std::uint64_t seed, int lines, int thickness) {
  std::mt19937_64 rng(seed);
  const int size = 256;
  cv::Mat canvas(size, size, CV_8UC3);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const auto v = static_cast<std::uint8_t>(20 + 40 * (x + y) / (2 * size));
      canvas.at<cv::Vec3b>(y, x) = cv::Vec3b(v, v, v);
    }
  }
  cv::Mat mask = cv::Mat::zeros(size, size, CV_8UC1);
  const int font = cv::FONT_HERSHEY_DUPLEX;
  const double scale = 0.7;
  int baseline = 0;
  const int pitch = cv::getTextSize("AG", font, scale, thickness, &baseline).height + 8;
  const int top = size / 2 - lines * pitch / 2;
  for (int l = 0; l < lines; ++l) {
    std::string text = random_line(rng);
    while (cv::getTextSize(text, font, scale, thickness, &baseline).width > size - 48) text.pop_back();
    cv::putText(mask, text, cv::Point(24, top + (l + 1) * pitch), font, scale, cv::Scalar(255),
                thickness, cv::LINE_8);
  }
  canvas.setTo(cv::Vec3b(240, 240, 240), mask);
  const cv::Rect box = cv::boundingRect(mask);

  TextBlock out{ColorImage(size, size), Rect{box.x, box.y, box.width, box.height},
                TextMask(size, size)};
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const cv::Vec3b p = canvas.at<cv::Vec3b>(y, x);
      out.image.at(x, y) = Rgb{p[2], p[1], p[0]};
      out.ink.at(x, y) = mask.at<std::uint8_t>(y, x) ? 1 : 0;
    }
  }
  return out;
}

}  // namespace sheartext::testing
