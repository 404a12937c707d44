#pragma once

#include <vector>

#include "sheartext/image.hpp"

namespace sheartext {

struct HaarDetail {
  GrayImage horizontal;  // high-pass along x
  GrayImage vertical;    // high-pass along y
  GrayImage diagonal;
};

/// Orthonormal 2D Haar decomposition. details[0] is the finest level.
struct WaveletPyramid {
  GrayImage approx;
  std::vector<HaarDetail> details;

  int levels() const { return static_cast<int>(details.size()); }
};

inline constexpr int kHaarLevels = 4;

WaveletPyramid dwt2_haar(const GrayImage& img, int levels);
GrayImage idwt2_haar(const WaveletPyramid& pyr);

}  // namespace sheartext
