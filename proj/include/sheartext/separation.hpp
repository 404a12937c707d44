#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sheartext/haar.hpp"
#include "sheartext/image.hpp"
#include "sheartext/shearlet.hpp"

namespace sheartext {

struct SeparationConfig {
  int iterations = 5;
  /// One weight per detail scale, lowest frequency first.
  std::vector<double> subband_weights{0.1, 0.1, 1.5, 1.5};
  /// Unset: lambda_max_fraction times the largest initial detail coefficient
  /// magnitude over both dictionaries.
  std::optional<double> lambda_max;
  double lambda_max_fraction = 0.9;
  double lambda_min = 0.0;
  /// Scale each iteration's update by the capped line-search step. When off,
  /// the full update is subtracted (step 1).
  bool damped_step = true;
  /// Run the wavelet and shearlet passes of each iteration on two threads.
  bool parallel_dictionaries = false;
};

/// Throws std::invalid_argument when an invariant of the config is violated.
void validate(const SeparationConfig& cfg);

struct SeparationResult {
  GrayImage point_part;  // accumulated wavelet reconstructions
  GrayImage curve_part;  // accumulated shearlet reconstructions
  GrayImage combined;    // point_part + curve_part
  GrayImage residual;

  std::vector<double> lambdas;         // threshold used at each iteration
  std::vector<double> steps;           // step applied at each iteration
  std::vector<double> residual_norms;  // ||r_k||_2 for k = 0..iterations
};

double soft_threshold(double x, double lambda);
void soft_threshold(std::span<double> coeffs, double lambda);
void soft_threshold(WaveletPyramid& pyr, double lambda);
void soft_threshold(ShearletCoefficients& coeffs, double lambda);

/// Multiplies each detail scale by its weight (lowest frequency first) and
/// zeroes the low-pass band. The weight count must equal the scale count.
void weight_subbands(WaveletPyramid& pyr, std::span<const double> weights);
void weight_subbands(ShearletCoefficients& coeffs, const ShearletSystem& sys,
                     std::span<const double> weights);

/// Block iterative shrinkage over the Haar and shearlet dictionaries.
///
/// Starting from r_0 = img, each iteration analyzes the residual with both
/// transforms, soft-thresholds at lambda_k (linear from lambda_max down to
/// lambda_min), weights the detail scales, and synthesizes the wavelet part
/// W_k and the shearlet part S_k. The residual is then updated as
/// r_k = r_{k-1} - t_k (W_k + S_k), where the step t_k <= 1 is the exact
/// line-search minimizer of ||r_k|| capped at 1, so the residual norm never
/// grows. The returned parts are the sums of t_k W_k and t_k S_k, which makes
/// point_part + curve_part + residual == img up to rounding.
SeparationResult separate(const GrayImage& img, const ShearletSystem& sys,
                          const SeparationConfig& cfg = {});

/// |combined| elementwise.
GrayImage combined_map(const SeparationResult& res);

}  // namespace sheartext
