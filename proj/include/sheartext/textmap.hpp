#pragma once

#include <cstdint>
#include <vector>

#include "sheartext/image.hpp"

namespace sheartext {

struct FeatureMap {
  GrayImage sigma;     // local 3x3 standard deviation of the combined map
  GrayImage combined;  // combined coefficient magnitudes |I|
};

/// Population standard deviation over the 3x3 neighbourhood, replicate
/// padding at the borders.
GrayImage sd_map(const GrayImage& combined);

FeatureMap make_features(const GrayImage& combined_magnitude);

struct KMeansResult {
  Plane<std::uint8_t> labels;      // cluster id in {0, 1} per pixel
  double centers[2][2] = {{0, 0}, {0, 0}};  // (sigma, |I|) per cluster
  int sweeps = 0;
  bool degenerate = false;        // all feature points identical
  std::vector<double> objective;  // within-cluster SS after each assignment
};

inline constexpr int kKMeansMaxSweeps = 100;

/// Two-cluster Lloyd iteration on the raw (sigma, |I|) points. Seeds are the
/// points of minimum and maximum |I| (ties by sigma, then raster order).
KMeansResult kmeans2(const FeatureMap& features,
                     int max_sweeps = kKMeansMaxSweeps);

/// Marks the cluster with the larger mean |I| as text; equal means go to
/// the smaller cluster. A single populated cluster yields an empty mask.
TextMask select_text_cluster(const Plane<std::uint8_t>& labels,
                             const GrayImage& combined);

}  // namespace sheartext
