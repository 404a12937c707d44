#include "sheartext/separation.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <string>

namespace sheartext {
namespace {

double sum_sq(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_abs_details(const WaveletPyramid& pyr) {
  double m = 0.0;
  for (const HaarDetail& d : pyr.details) {
    m = std::max({m, max_abs(d.horizontal.values()), max_abs(d.vertical.values()),
                  max_abs(d.diagonal.values())});
  }
  return m;
}

double max_abs_details(const ShearletCoefficients& coeffs,
                       const ShearletSystem& sys) {
  double m = 0.0;
  for (std::size_t i = 0; i < coeffs.planes.size(); ++i) {
    if (!sys.filters()[i].lowpass) m = std::max(m, max_abs(coeffs.planes[i].values()));
  }
  return m;
}

void scale_plane(GrayImage& p, double w) {
  for (double& v : p.values()) v *= w;
}

void add_scaled(GrayImage& acc, const GrayImage& p, double t) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += t * p[i];
}

GrayImage wavelet_pass(const GrayImage& residual, double lambda,
                       std::span<const double> weights) {
  WaveletPyramid pyr = dwt2_haar(residual, static_cast<int>(weights.size()));
  soft_threshold(pyr, lambda);
  weight_subbands(pyr, weights);
  return idwt2_haar(pyr);
}

GrayImage shearlet_pass(const GrayImage& residual, const ShearletSystem& sys,
                        double lambda, std::span<const double> weights) {
  ShearletCoefficients coeffs = shearlet_analyze(residual, sys);
  soft_threshold(coeffs, lambda);
  weight_subbands(coeffs, sys, weights);
  return shearlet_synthesize(coeffs, sys);
}

}  // namespace

void validate(const SeparationConfig& cfg) {
  if (cfg.iterations < 1) {
    throw std::invalid_argument("separation: iterations must be >= 1");
  }
  for (double w : cfg.subband_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("separation: weights must be finite and >= 0");
    }
  }
  if (!(cfg.lambda_min >= 0.0)) {
    throw std::invalid_argument("separation: lambda_min must be >= 0");
  }
  if (cfg.lambda_max && !(*cfg.lambda_max >= cfg.lambda_min)) {
    throw std::invalid_argument("separation: lambda_max must be >= lambda_min");
  }
  if (!(cfg.lambda_max_fraction >= 0.0)) {
    throw std::invalid_argument("separation: lambda_max_fraction must be >= 0");
  }
}

double soft_threshold(double x, double lambda) {
  const double mag = std::abs(x) - lambda;
  if (mag <= 0.0) return 0.0;
  return x < 0.0 ? -mag : mag;
}

void soft_threshold(std::span<double> coeffs, double lambda) {
  if (lambda == 0.0) return;
  for (double& c : coeffs) c = soft_threshold(c, lambda);
}

void soft_threshold(WaveletPyramid& pyr, double lambda) {
  soft_threshold(pyr.approx.values(), lambda);
  for (HaarDetail& d : pyr.details) {
    soft_threshold(d.horizontal.values(), lambda);
    soft_threshold(d.vertical.values(), lambda);
    soft_threshold(d.diagonal.values(), lambda);
  }
}

void soft_threshold(ShearletCoefficients& coeffs, double lambda) {
  for (GrayImage& p : coeffs.planes) soft_threshold(p.values(), lambda);
}

void weight_subbands(WaveletPyramid& pyr, std::span<const double> weights) {
  if (weights.size() != pyr.details.size()) {
    throw std::invalid_argument(
        "weight_subbands: " + std::to_string(weights.size()) +
        " weights for " + std::to_string(pyr.details.size()) + " wavelet levels");
  }
  scale_plane(pyr.approx, 0.0);
  // details[0] is the finest level, which takes the last weight.
  const std::size_t n = weights.size();
  for (std::size_t l = 0; l < n; ++l) {
    const double w = weights[n - 1 - l];
    scale_plane(pyr.details[l].horizontal, w);
    scale_plane(pyr.details[l].vertical, w);
    scale_plane(pyr.details[l].diagonal, w);
  }
}

void weight_subbands(ShearletCoefficients& coeffs, const ShearletSystem& sys,
                     std::span<const double> weights) {
  if (weights.size() != static_cast<std::size_t>(sys.scales())) {
    throw std::invalid_argument(
        "weight_subbands: " + std::to_string(weights.size()) +
        " weights for " + std::to_string(sys.scales()) + " shearlet scales");
  }
  if (coeffs.planes.size() != sys.filters().size()) {
    throw std::invalid_argument("weight_subbands: coefficient/system mismatch");
  }
  for (std::size_t i = 0; i < coeffs.planes.size(); ++i) {
    const ShearletFilter& f = sys.filters()[i];
    scale_plane(coeffs.planes[i], f.lowpass ? 0.0 : weights[f.scale]);
  }
}

SeparationResult separate(const GrayImage& img, const ShearletSystem& sys,
                          const SeparationConfig& cfg) {
  validate(cfg);
  if (img.width() != sys.size() || img.height() != sys.size()) {
    throw std::invalid_argument("separate: image must be " +
                                std::to_string(sys.size()) + "x" +
                                std::to_string(sys.size()));
  }
  const std::span<const double> weights = cfg.subband_weights;
  if (weights.size() != static_cast<std::size_t>(sys.scales())) {
    throw std::invalid_argument("separate: expected " +
                                std::to_string(sys.scales()) + " weights");
  }

  double lambda_max = 0.0;
  if (cfg.lambda_max) {
    lambda_max = *cfg.lambda_max;
  } else {
    const double peak = std::max(
        max_abs_details(dwt2_haar(img, static_cast<int>(weights.size()))),
        max_abs_details(shearlet_analyze(img, sys), sys));
    lambda_max = std::max(cfg.lambda_max_fraction * peak, cfg.lambda_min);
  }

  const int w = img.width();
  const int h = img.height();
  SeparationResult res{GrayImage(w, h), GrayImage(w, h), GrayImage(w, h), img,
                       {}, {}, {}};
  res.residual_norms.push_back(std::sqrt(sum_sq(img.values())));

  for (int k = 0; k < cfg.iterations; ++k) {
    const double lambda =
        cfg.iterations == 1
            ? lambda_max
            : lambda_max + (cfg.lambda_min - lambda_max) * k / (cfg.iterations - 1);

    GrayImage wave;
    GrayImage shear;
    if (cfg.parallel_dictionaries) {
      auto pending = std::async(std::launch::async, [&] {
        return shearlet_pass(res.residual, sys, lambda, weights);
      });
      wave = wavelet_pass(res.residual, lambda, weights);
      shear = pending.get();
    } else {
      wave = wavelet_pass(res.residual, lambda, weights);
      shear = shearlet_pass(res.residual, sys, lambda, weights);
    }

    GrayImage update = wave;
    add_scaled(update, shear, 1.0);
    double step = 1.0;
    if (cfg.damped_step) {
      // <r, update> >= 0 because every coefficient x is replaced by
      // w * soft(x) with the same sign.
      const double energy = sum_sq(update.values());
      step = energy > 0.0
                 ? std::min(1.0, dot(res.residual.values(), update.values()) / energy)
                 : 0.0;
    }

    add_scaled(res.point_part, wave, step);
    add_scaled(res.curve_part, shear, step);
    add_scaled(res.residual, update, -step);

    res.lambdas.push_back(lambda);
    res.steps.push_back(step);
    res.residual_norms.push_back(std::sqrt(sum_sq(res.residual.values())));
  }

  for (std::size_t i = 0; i < res.combined.size(); ++i) {
    res.combined[i] = res.point_part[i] + res.curve_part[i];
  }
  return res;
}

GrayImage combined_map(const SeparationResult& res) {
  GrayImage out = res.combined;
  for (double& v : out.values()) v = std::abs(v);
  return out;
}

}  // namespace sheartext
