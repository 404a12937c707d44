#include "sheartext/haar.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace sheartext {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// One analysis level; the 2x2 block [[a,b],[c,d]] maps to
// (a+b+c+d)/2, (a-b+c-d)/2, (a+b-c-d)/2, (a-b-c+d)/2.
void analyze_level(const GrayImage& in, GrayImage& ll, HaarDetail& d) {
  const int hw = in.width() / 2;
  const int hh = in.height() / 2;
  ll = GrayImage(hw, hh);
  d.horizontal = GrayImage(hw, hh);
  d.vertical = GrayImage(hw, hh);
  d.diagonal = GrayImage(hw, hh);
  for (int y = 0; y < hh; ++y) {
    for (int x = 0; x < hw; ++x) {
      const double a = in.at(2 * x, 2 * y);
      const double b = in.at(2 * x + 1, 2 * y);
      const double c = in.at(2 * x, 2 * y + 1);
      const double e = in.at(2 * x + 1, 2 * y + 1);
      // Row pass then column pass, each with 1/sqrt(2) filters.
      const double lo_top = (a + b) * kInvSqrt2;
      const double hi_top = (a - b) * kInvSqrt2;
      const double lo_bot = (c + e) * kInvSqrt2;
      const double hi_bot = (c - e) * kInvSqrt2;
      ll.at(x, y) = (lo_top + lo_bot) * kInvSqrt2;
      d.horizontal.at(x, y) = (hi_top + hi_bot) * kInvSqrt2;
      d.vertical.at(x, y) = (lo_top - lo_bot) * kInvSqrt2;
      d.diagonal.at(x, y) = (hi_top - hi_bot) * kInvSqrt2;
    }
  }
}

GrayImage synthesize_level(const GrayImage& ll, const HaarDetail& d) {
  GrayImage out(ll.width() * 2, ll.height() * 2);
  for (int y = 0; y < ll.height(); ++y) {
    for (int x = 0; x < ll.width(); ++x) {
      const double s = ll.at(x, y);
      const double h = d.horizontal.at(x, y);
      const double v = d.vertical.at(x, y);
      const double g = d.diagonal.at(x, y);
      const double lo_top = (s + v) * kInvSqrt2;
      const double lo_bot = (s - v) * kInvSqrt2;
      const double hi_top = (h + g) * kInvSqrt2;
      const double hi_bot = (h - g) * kInvSqrt2;
      out.at(2 * x, 2 * y) = (lo_top + hi_top) * kInvSqrt2;
      out.at(2 * x + 1, 2 * y) = (lo_top - hi_top) * kInvSqrt2;
      out.at(2 * x, 2 * y + 1) = (lo_bot + hi_bot) * kInvSqrt2;
      out.at(2 * x + 1, 2 * y + 1) = (lo_bot - hi_bot) * kInvSqrt2;
    }
  }
  return out;
}

}  // namespace

WaveletPyramid dwt2_haar(const GrayImage& img, int levels) {
  if (img.width() != img.height() ||
      !std::has_single_bit(static_cast<unsigned>(img.width()))) {
    throw std::invalid_argument("dwt2_haar: image must be square with a "
                                "power-of-two side");
  }
  if (levels < 1 || levels > 8 || (img.width() >> levels) < 1) {
    throw std::invalid_argument("dwt2_haar: invalid level count " +
                                std::to_string(levels));
  }

  WaveletPyramid pyr;
  pyr.details.resize(levels);
  GrayImage current = img;
  for (int l = 0; l < levels; ++l) {
    GrayImage next;
    analyze_level(current, next, pyr.details[l]);
    current = std::move(next);
  }
  pyr.approx = std::move(current);
  return pyr;
}

GrayImage idwt2_haar(const WaveletPyramid& pyr) {
  if (pyr.details.empty() || pyr.approx.empty()) {
    throw std::invalid_argument("idwt2_haar: empty pyramid");
  }
  GrayImage current = pyr.approx;
  for (int l = pyr.levels() - 1; l >= 0; --l) {
    const HaarDetail& d = pyr.details[l];
    if (!d.horizontal.same_shape(current) || !d.vertical.same_shape(current) ||
        !d.diagonal.same_shape(current)) {
      throw std::invalid_argument("idwt2_haar: level " + std::to_string(l) +
                                  " sub-band dimensions are inconsistent");
    }
    current = synthesize_level(current, d);
  }
  return current;
}

}  // namespace sheartext
