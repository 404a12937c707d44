#pragma once

#include <complex>
#include <vector>

#include "sheartext/image.hpp"

namespace sheartext {

using Spectrum = std::vector<std::complex<double>>;

/// Real 2D FFT pair on an n x n grid. The half spectrum has n rows of
/// n/2 + 1 columns. Plans are created once (FFTW_ESTIMATE, so results do
/// not depend on planner timing) and executed through the thread-safe
/// new-array interface.
class FftPlan {
 public:
  explicit FftPlan(int n);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  int n() const { return n_; }
  int half_cols() const { return n_ / 2 + 1; }
  std::size_t spectrum_size() const {
    return static_cast<std::size_t>(n_) * half_cols();
  }

  Spectrum forward(const GrayImage& img) const;
  /// Normalized inverse; consumes a copy because c2r overwrites its input.
  GrayImage inverse(Spectrum spec) const;

 private:
  int n_;
  void* r2c_ = nullptr;
  void* c2r_ = nullptr;
};

}  // namespace sheartext
