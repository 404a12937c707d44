#include "sheartext/textmap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sheartext {

GrayImage sd_map(const GrayImage& combined) {
  const int w = combined.width();
  const int h = combined.height();
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      // Deviations from the centre pixel: the variance is unchanged and an
      // added constant cancels before any rounding happens.
      const double centre = combined.at(x, y);
      double window[9];
      int n = 0;
      double mean = 0.0;
      for (int dy = -1; dy <= 1; ++dy) {
        const int yy = std::clamp(y + dy, 0, h - 1);
        for (int dx = -1; dx <= 1; ++dx) {
          const int xx = std::clamp(x + dx, 0, w - 1);
          window[n] = combined.at(xx, yy) - centre;
          mean += window[n++];
        }
      }
      mean /= 9.0;
      double var = 0.0;
      for (double v : window) var += (v - mean) * (v - mean);
      out.at(x, y) = std::sqrt(var / 9.0);
    }
  }
  return out;
}

FeatureMap make_features(const GrayImage& combined_magnitude) {
  return FeatureMap{sd_map(combined_magnitude), combined_magnitude};
}

namespace {

struct Point {
  double sigma;
  double mag;
};

double dist_sq(const Point& p, const double c[2]) {
  const double a = p.sigma - c[0];
  const double b = p.mag - c[1];
  return a * a + b * b;
}

}  // namespace

KMeansResult kmeans2(const FeatureMap& features, int max_sweeps) {
  if (!features.sigma.same_shape(features.combined)) {
    throw std::invalid_argument("kmeans2: feature planes differ in shape");
  }
  const std::size_t n = features.sigma.size();
  std::vector<Point> pts(n);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i] = Point{features.sigma[i], features.combined[i]};
  }

  KMeansResult res;
  res.labels = Plane<std::uint8_t>(features.sigma.width(), features.sigma.height());

  // Seeds: min |I| (then min sigma) and max |I| (then max sigma); the first
  // in raster order wins remaining ties.
  std::size_t lo = 0;
  std::size_t hi = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const Point& p = pts[i];
    if (p.mag < pts[lo].mag || (p.mag == pts[lo].mag && p.sigma < pts[lo].sigma)) lo = i;
    if (p.mag > pts[hi].mag || (p.mag == pts[hi].mag && p.sigma > pts[hi].sigma)) hi = i;
  }
  if (pts[lo].mag == pts[hi].mag && pts[lo].sigma == pts[hi].sigma) {
    // Equal |I| everywhere; fall back to the point farthest from the seed.
    double c[2] = {pts[lo].sigma, pts[lo].mag};
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (const double d = dist_sq(pts[i], c); d > best) {
        best = d;
        hi = i;
      }
    }
    if (best == 0.0) {
      res.degenerate = true;
      res.centers[0][0] = res.centers[1][0] = pts[lo].sigma;
      res.centers[0][1] = res.centers[1][1] = pts[lo].mag;
      return res;
    }
  }

  double centers[2][2] = {{pts[lo].sigma, pts[lo].mag},
                          {pts[hi].sigma, pts[hi].mag}};
  auto& labels = res.labels;
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint8_t id =
          dist_sq(pts[i], centers[1]) < dist_sq(pts[i], centers[0]) ? 1 : 0;
      changed = changed || sweep == 1 || id != labels[i];
      labels[i] = id;
    }
    if (!changed) break;

    double sum[2][2] = {{0, 0}, {0, 0}};
    std::size_t count[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      sum[labels[i]][0] += pts[i].sigma;
      sum[labels[i]][1] += pts[i].mag;
      ++count[labels[i]];
    }
    for (int c = 0; c < 2; ++c) {
      if (count[c] == 0) continue;
      centers[c][0] = sum[c][0] / static_cast<double>(count[c]);
      centers[c][1] = sum[c][1] / static_cast<double>(count[c]);
    }
    double wcss = 0.0;
    for (std::size_t i = 0; i < n; ++i) wcss += dist_sq(pts[i], centers[labels[i]]);
    res.objective.push_back(wcss);
    res.sweeps = sweep;
  }

  for (int c = 0; c < 2; ++c) {
    res.centers[c][0] = centers[c][0];
    res.centers[c][1] = centers[c][1];
  }
  return res;
}

TextMask select_text_cluster(const Plane<std::uint8_t>& labels,
                             const GrayImage& combined) {
  if (labels.width() != combined.width() || labels.height() != combined.height()) {
    throw std::invalid_argument("select_text_cluster: shape mismatch");
  }
  double sum[2] = {0.0, 0.0};
  std::size_t count[2] = {0, 0};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int id = labels[i] ? 1 : 0;
    sum[id] += std::abs(combined[i]);
    ++count[id];
  }

  TextMask mask(labels.width(), labels.height());
  if (count[0] == 0 || count[1] == 0) return mask;

  const double mean0 = sum[0] / static_cast<double>(count[0]);
  const double mean1 = sum[1] / static_cast<double>(count[1]);
  int text = 0;
  if (mean1 > mean0) {
    text = 1;
  } else if (mean1 == mean0) {
    text = count[1] < count[0] ? 1 : 0;
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    mask[i] = (labels[i] ? 1 : 0) == text ? 1 : 0;
  }
  return mask;
}

}  // namespace sheartext
