#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sheartext/image.hpp"

namespace sheartext {

/// Intersection area over the area of the smallest box enclosing both.
double match_score(const Rect& a, const Rect& b);

/// Best match of `r` against `set`; 0 for an empty set.
double best_match(const Rect& r, std::span<const Rect> set);

struct EvalPair {
  std::string frame;
  std::vector<Rect> targets;    // ground truth
  std::vector<Rect> estimates;  // detections
};

class EmptyGroundTruth : public std::runtime_error {
 public:
  explicit EmptyGroundTruth(const std::string& frame)
      : std::runtime_error("frame '" + frame + "' has no ground-truth boxes") {}
};

/// Mean best match of each target against the estimates. Throws
/// EmptyGroundTruth when there are no targets.
double recall(const EvalPair& pair);

/// Mean best match of each estimate against the targets; 0 with no estimates.
double precision(const EvalPair& pair);

/// 1 / (alpha / p + (1 - alpha) / r); 0 when either p or r is 0.
double fmeasure(double p, double r, double alpha = 0.5);

struct BlockCounts {
  long long atb = 0;  // actual text blocks (targets)
  long long tdb = 0;  // estimates that hit a target
  long long fdb = 0;  // estimates that hit nothing
  long long mdb = 0;  // hits covering too little of their target

  BlockCounts& operator+=(const BlockCounts& o) {
    atb += o.atb;
    tdb += o.tdb;
    fdb += o.fdb;
    mdb += o.mdb;
    return *this;
  }
};

struct BlockRates {
  BlockCounts counts;
  double dr = 0.0;
  double fpr = 0.0;
  double mdr = 0.0;
  bool dr_undefined = false;   // ATB == 0
  bool fpr_undefined = false;  // TDB + FDB == 0
  bool mdr_undefined = false;  // TDB == 0
};

inline constexpr double kDefaultTauDetect = 0.0;
inline constexpr double kDefaultTauFull = 0.9;

BlockCounts block_counts(const EvalPair& pair,
                         double tau_detect = kDefaultTauDetect,
                         double tau_full = kDefaultTauFull);

/// DR = TDB/ATB, FPR = FDB/(TDB+FDB), MDR = MDB/TDB. Zero denominators give
/// a rate of 0 with the matching flag set.
BlockRates rates_from_counts(const BlockCounts& counts);

BlockRates block_rates(const EvalPair& pair,
                       double tau_detect = kDefaultTauDetect,
                       double tau_full = kDefaultTauFull);

struct EvalOptions {
  double alpha = 0.5;
  double tau_detect = kDefaultTauDetect;
  double tau_full = kDefaultTauFull;
};

struct FrameScore {
  std::string frame;
  double recall = 0.0;
  double precision = 0.0;
  double fmeasure = 0.0;
  BlockCounts counts;
};

struct EvalReport {
  std::vector<FrameScore> frames;
  std::vector<std::string> excluded;  // frames with empty ground truth
  double recall = 0.0;                // micro-averaged over all targets
  double precision = 0.0;             // micro-averaged over all estimates
  double fmeasure = 0.0;
  BlockRates blocks;
  EvalOptions options;
};

/// Scores every pair; frames without targets are listed in `excluded` and
/// left out of all aggregates.
EvalReport evaluate(std::span<const EvalPair> pairs, const EvalOptions& opts = {});

std::string report_csv(const EvalReport& report);
std::string report_json(const EvalReport& report);

}  // namespace sheartext
