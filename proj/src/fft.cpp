#include "fft.hpp"

#include <mutex>

#include <fftw3.h>

namespace sheartext {
namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FftPlan::FftPlan(int n) : n_(n) {
  std::vector<double> real(static_cast<std::size_t>(n) * n);
  Spectrum spec(spectrum_size());
  auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

  std::lock_guard lock(planner_mutex());
  r2c_ = fftw_plan_dft_r2c_2d(n, n, real.data(), cplx, flags);
  c2r_ = fftw_plan_dft_c2r_2d(n, n, cplx, real.data(), flags);
}

FftPlan::~FftPlan() {
  std::lock_guard lock(planner_mutex());
  if (r2c_) fftw_destroy_plan(static_cast<fftw_plan>(r2c_));
  if (c2r_) fftw_destroy_plan(static_cast<fftw_plan>(c2r_));
}

Spectrum FftPlan::forward(const GrayImage& img) const {
  Spectrum spec(spectrum_size());
  // r2c does not modify its input for out-of-place transforms.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(r2c_),
                       const_cast<double*>(img.data()),
                       reinterpret_cast<fftw_complex*>(spec.data()));
  return spec;
}

GrayImage FftPlan::inverse(Spectrum spec) const {
  GrayImage out(n_, n_);
  fftw_execute_dft_c2r(static_cast<fftw_plan>(c2r_),
                       reinterpret_cast<fftw_complex*>(spec.data()),
                       out.data());
  const double scale = 1.0 / (static_cast<double>(n_) * n_);
  for (double& v : out.values()) v *= scale;
  return out;
}

}  // namespace sheartext
