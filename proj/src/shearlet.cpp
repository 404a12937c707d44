#include "sheartext/shearlet.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace sheartext {
namespace {

// Meyer auxiliary function: 0 below 0, 1 above 1, v(x) + v(1 - x) == 1.
double meyer_aux(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double x4 = x * x * x * x;
  return x4 * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x);
}

// Squared low-pass radial window: 1 for r <= edge, 0 for r >= 2 * edge.
double lowpass_sq(double r, double edge) {
  return 1.0 - meyer_aux((r - edge) / edge);
}

// Squared angular bump on [-1, 1]; integer translates sum to 1.
double angular_sq(double u) {
  return u <= 0.0 ? meyer_aux(1.0 + u) : meyer_aux(1.0 - u);
}

// Half-width of the smooth blend between the two cones around the diagonal.
constexpr double kConeBlend = std::numbers::pi / 36.0;

// Squared weight of the horizontal cone (|xi2| <= |xi1|) at angle
// theta = atan2(|xi2|, |xi1|); the vertical cone weight is the complement.
double horizontal_cone_sq(double theta) {
  const double t =
      (theta - std::numbers::pi / 4.0 + kConeBlend) / (2.0 * kConeBlend);
  return 1.0 - meyer_aux(t);
}

int signed_freq(int index, int n) { return index < n / 2 ? index : index - n; }

void check_plane_shape(const GrayImage& img, const ShearletSystem& sys,
                       const char* who) {
  if (img.width() != sys.size() || img.height() != sys.size()) {
    throw std::invalid_argument(std::string(who) +
                                ": plane dimensions do not match the system");
  }
}

}  // namespace

int ShearletSystem::max_shear(int scale) {
  if (scale % 2 == 0) return 1 << (scale / 2);
  return static_cast<int>(
      std::ceil(std::numbers::sqrt2 * static_cast<double>(1 << (scale / 2))));
}

ShearletSystem::ShearletSystem(int size, int scales)
    : size_(size), scales_(scales) {
  if (size < 4 || !std::has_single_bit(static_cast<unsigned>(size))) {
    throw std::invalid_argument("shearlet system: size must be a power of two "
                                ">= 4, got " + std::to_string(size));
  }
  if (scales < 1 || (size / 2) >> scales < 1) {
    throw std::invalid_argument("shearlet system: invalid scale count " +
                                std::to_string(scales) + " for size " +
                                std::to_string(size));
  }

  // Radial edges: edge[j] = (size/2) / 2^(scales - j).
  std::vector<double> edge(scales);
  for (int j = 0; j < scales; ++j) {
    edge[j] = static_cast<double>(size / 2) / static_cast<double>(1 << (scales - j));
  }

  ShearletFilter low;
  low.lowpass = true;
  low.response = GrayImage(size, size);
  filters_.push_back(std::move(low));
  for (int j = 0; j < scales; ++j) {
    const int kmax = max_shear(j);
    for (Cone cone : {Cone::kHorizontal, Cone::kVertical}) {
      for (int k = -kmax; k <= kmax; ++k) {
        ShearletFilter f;
        f.scale = j;
        f.cone = cone;
        f.shear = k;
        f.response = GrayImage(size, size);
        filters_.push_back(std::move(f));
      }
    }
  }

  // Squared windows at one frequency, in filter order.
  std::vector<double> raw(filters_.size());
  std::vector<double> mirrored(filters_.size());
  auto windows = [&](int xi1, int xi2, std::vector<double>& v) {
    const double r = std::max(std::abs(xi1), std::abs(xi2));
    const double theta = std::atan2(std::abs(xi2), std::abs(xi1));
    const double cone_sq[2] = {horizontal_cone_sq(theta),
                               1.0 - horizontal_cone_sq(theta)};
    std::size_t fi = 0;
    v[fi++] = lowpass_sq(r, edge[0]);
    for (int j = 0; j < scales; ++j) {
      const double outer = j + 1 < scales ? lowpass_sq(r, edge[j + 1]) : 1.0;
      const double band_sq = std::max(outer - lowpass_sq(r, edge[j]), 0.0);
      const int kmax = max_shear(j);
      for (int c = 0; c < 2; ++c) {
        const bool horizontal = c == 0;
        const int axis = horizontal ? xi1 : xi2;
        const int across = horizontal ? xi2 : xi1;
        const double slope = axis != 0 ? static_cast<double>(across) / axis : 0.0;
        for (int k = -kmax; k <= kmax; ++k) {
          v[fi++] = band_sq > 0.0 && cone_sq[c] > 0.0 && axis != 0
                        ? band_sq * cone_sq[c] * angular_sq(kmax * slope - k)
                        : 0.0;
        }
      }
    }
  };

  GrayImage total(size, size);
  for (int row = 0; row < size; ++row) {
    const int xi2 = signed_freq(row, size);
    const int mirror_xi2 = -signed_freq((size - row) % size, size);
    for (int col = 0; col < size; ++col) {
      const int xi1 = signed_freq(col, size);
      const int mirror_xi1 = -signed_freq((size - col) % size, size);
      windows(xi1, xi2, raw);
      // On the Nyquist row and column the grid point stands for both +xi
      // and -xi; averaging the two readings keeps every response even, so
      // filtered real images stay real.
      if (mirror_xi1 != xi1 || mirror_xi2 != xi2) {
        windows(mirror_xi1, mirror_xi2, mirrored);
        for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = 0.5 * (raw[i] + mirrored[i]);
      }
      double sum = 0.0;
      for (std::size_t i = 0; i < raw.size(); ++i) {
        filters_[i].response.at(col, row) = raw[i];
        sum += raw[i];
      }
      total.at(col, row) = sum;
    }
  }

  for (std::size_t i = 0; i < total.size(); ++i) {
    if (!(total[i] > 0.0)) {
      throw std::logic_error("shearlet system: frequency grid not covered");
    }
  }
  for (ShearletFilter& f : filters_) {
    for (std::size_t i = 0; i < total.size(); ++i) {
      f.response[i] = std::sqrt(f.response[i] / total[i]);
    }
  }

  plan_ = std::make_unique<FftPlan>(size);
}

ShearletSystem::~ShearletSystem() = default;
ShearletSystem::ShearletSystem(ShearletSystem&&) noexcept = default;
ShearletSystem& ShearletSystem::operator=(ShearletSystem&&) noexcept = default;

ShearletSystem build_shearlet_system(int size, int scales) {
  return ShearletSystem(size, scales);
}

namespace {

// Half spectrum times a full-grid real response.
void apply_filter(const Spectrum& in, const GrayImage& response, int n,
                  Spectrum& out) {
  const int cols = n / 2 + 1;
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < cols; ++col) {
      const std::size_t i = static_cast<std::size_t>(row) * cols + col;
      out[i] = in[i] * response.at(col, row);
    }
  }
}

void accumulate_filter(const Spectrum& in, const GrayImage& response, int n,
                       Spectrum& acc) {
  const int cols = n / 2 + 1;
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < cols; ++col) {
      const std::size_t i = static_cast<std::size_t>(row) * cols + col;
      acc[i] += in[i] * response.at(col, row);
    }
  }
}

}  // namespace

ShearletCoefficients shearlet_analyze(const GrayImage& img,
                                      const ShearletSystem& sys) {
  check_plane_shape(img, sys, "shearlet_analyze");
  const FftPlan& plan = sys.plan();
  const Spectrum spec = plan.forward(img);

  ShearletCoefficients out;
  out.planes.reserve(sys.filters().size());
  Spectrum filtered(plan.spectrum_size());
  for (const ShearletFilter& f : sys.filters()) {
    apply_filter(spec, f.response, sys.size(), filtered);
    out.planes.push_back(plan.inverse(filtered));
  }
  return out;
}

GrayImage shearlet_synthesize(const ShearletCoefficients& coeffs,
                              const ShearletSystem& sys) {
  if (coeffs.planes.size() != sys.filters().size()) {
    throw std::invalid_argument("shearlet_synthesize: expected " +
                                std::to_string(sys.filters().size()) +
                                " planes, got " +
                                std::to_string(coeffs.planes.size()));
  }
  const FftPlan& plan = sys.plan();
  Spectrum acc(plan.spectrum_size());
  for (std::size_t i = 0; i < coeffs.planes.size(); ++i) {
    check_plane_shape(coeffs.planes[i], sys, "shearlet_synthesize");
    accumulate_filter(plan.forward(coeffs.planes[i]),
                      sys.filters()[i].response, sys.size(), acc);
  }
  return plan.inverse(std::move(acc));
}

}  // namespace sheartext
