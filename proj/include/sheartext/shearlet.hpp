#pragma once

#include <memory>
#include <vector>

#include "sheartext/image.hpp"

namespace sheartext {

enum class Cone { kHorizontal = 0, kVertical = 1 };

/// One frequency-domain window of the band-limited shearlet frame.
struct ShearletFilter {
  bool lowpass = false;
  int scale = -1;  // 0 is the coarsest directional scale; -1 for the low-pass
  Cone cone = Cone::kHorizontal;
  int shear = 0;
  /// size x size real response in FFT index order (row = vertical frequency).
  GrayImage response;
};

class FftPlan;

/// Cone-adapted band-limited shearlet frame on a square periodic grid.
///
/// Radial windows are Meyer-type and form a square (max-norm) Laplacian
/// pyramid: the low-pass window is flat up to size/2^(scales+1) and scale j
/// occupies the annulus between size/2^(scales-j+1) and size/2^(scales-j-1).
/// Each scale is split into two cones blended smoothly around the diagonals,
/// and each cone into 2*ceil(2^(j/2)) + 1 sheared angular windows. Every
/// response is divided by the square root of the summed squares so that
/// sum |filter|^2 == 1 at each grid frequency.
///
/// Immutable after construction; analyses may share one instance.
class ShearletSystem {
 public:
  ShearletSystem(int size, int scales);
  ~ShearletSystem();
  ShearletSystem(ShearletSystem&&) noexcept;
  ShearletSystem& operator=(ShearletSystem&&) noexcept;

  int size() const { return size_; }
  int scales() const { return scales_; }
  const std::vector<ShearletFilter>& filters() const { return filters_; }
  const FftPlan& plan() const { return *plan_; }

  /// ceil(2^(j/2)): the largest |shear| used at directional scale j.
  static int max_shear(int scale);

 private:
  int size_;
  int scales_;
  std::vector<ShearletFilter> filters_;
  std::unique_ptr<FftPlan> plan_;
};

inline constexpr int kShearletScales = 4;

ShearletSystem build_shearlet_system(int size, int scales);

/// Undecimated coefficients: one plane per filter, aligned with the image.
struct ShearletCoefficients {
  std::vector<GrayImage> planes;
};

ShearletCoefficients shearlet_analyze(const GrayImage& img,
                                      const ShearletSystem& sys);
GrayImage shearlet_synthesize(const ShearletCoefficients& coeffs,
                              const ShearletSystem& sys);

}  // namespace sheartext
