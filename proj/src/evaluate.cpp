#include "sheartext/evaluate.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace sheartext {
namespace {

long long intersection_area(const Rect& a, const Rect& b) {
  const long long w = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const long long h = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  return w > 0 && h > 0 ? w * h : 0;
}

// Index of the best-matching rect in `set` (first on ties), or -1.
int best_index(const Rect& r, std::span<const Rect> set) {
  int best = -1;
  double score = -1.0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (const double m = match_score(r, set[i]); m > score) {
      score = m;
      best = static_cast<int>(i);
    }
  }
  return best;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

double match_score(const Rect& a, const Rect& b) {
  const long long inter = intersection_area(a, b);
  if (inter == 0) return 0.0;
  const long long ew = std::max(a.right(), b.right()) - std::min(a.x, b.x);
  const long long eh = std::max(a.bottom(), b.bottom()) - std::min(a.y, b.y);
  return static_cast<double>(inter) / static_cast<double>(ew * eh);
}

double best_match(const Rect& r, std::span<const Rect> set) {
  double best = 0.0;
  for (const Rect& s : set) best = std::max(best, match_score(r, s));
  return best;
}

double recall(const EvalPair& pair) {
  if (pair.targets.empty()) throw EmptyGroundTruth(pair.frame);
  double sum = 0.0;
  for (const Rect& t : pair.targets) sum += best_match(t, pair.estimates);
  return sum / static_cast<double>(pair.targets.size());
}

double precision(const EvalPair& pair) {
  if (pair.estimates.empty()) return 0.0;
  double sum = 0.0;
  for (const Rect& e : pair.estimates) sum += best_match(e, pair.targets);
  return sum / static_cast<double>(pair.estimates.size());
}

double fmeasure(double p, double r, double alpha) {
  if (p <= 0.0 || r <= 0.0) return 0.0;
  return 1.0 / (alpha / p + (1.0 - alpha) / r);
}

BlockCounts block_counts(const EvalPair& pair, double tau_detect,
                         double tau_full) {
  if (!(tau_detect >= 0.0 && tau_detect <= tau_full && tau_full <= 1.0)) {
    throw std::invalid_argument("block_rates: need 0 <= tau_detect <= tau_full <= 1");
  }
  BlockCounts c;
  c.atb = static_cast<long long>(pair.targets.size());
  for (const Rect& e : pair.estimates) {
    const int t = best_index(e, pair.targets);
    if (t < 0 || match_score(e, pair.targets[t]) <= tau_detect) {
      ++c.fdb;
      continue;
    }
    ++c.tdb;
    const Rect& target = pair.targets[t];
    const double covered = static_cast<double>(intersection_area(e, target)) /
                           static_cast<double>(target.area());
    if (covered < tau_full) ++c.mdb;
  }
  return c;
}

BlockRates rates_from_counts(const BlockCounts& counts) {
  BlockRates r;
  r.counts = counts;
  r.dr_undefined = counts.atb == 0;
  r.fpr_undefined = counts.tdb + counts.fdb == 0;
  r.mdr_undefined = counts.tdb == 0;
  if (!r.dr_undefined) r.dr = double(counts.tdb) / double(counts.atb);
  if (!r.fpr_undefined) r.fpr = double(counts.fdb) / double(counts.tdb + counts.fdb);
  if (!r.mdr_undefined) r.mdr = double(counts.mdb) / double(counts.tdb);
  return r;
}

BlockRates block_rates(const EvalPair& pair, double tau_detect, double tau_full) {
  return rates_from_counts(block_counts(pair, tau_detect, tau_full));
}

EvalReport evaluate(std::span<const EvalPair> pairs, const EvalOptions& opts) {
  EvalReport report;
  report.options = opts;
  double recall_sum = 0.0;
  double precision_sum = 0.0;
  long long targets = 0;
  long long estimates = 0;
  BlockCounts totals;

  for (const EvalPair& pair : pairs) {
    if (pair.targets.empty()) {
      report.excluded.push_back(pair.frame);
      continue;
    }
    FrameScore s;
    s.frame = pair.frame;
    s.recall = recall(pair);
    s.precision = precision(pair);
    s.fmeasure = fmeasure(s.precision, s.recall, opts.alpha);
    s.counts = block_counts(pair, opts.tau_detect, opts.tau_full);

    recall_sum += s.recall * static_cast<double>(pair.targets.size());
    precision_sum += s.precision * static_cast<double>(pair.estimates.size());
    targets += static_cast<long long>(pair.targets.size());
    estimates += static_cast<long long>(pair.estimates.size());
    totals += s.counts;
    report.frames.push_back(std::move(s));
  }

  if (targets > 0) report.recall = recall_sum / static_cast<double>(targets);
  if (estimates > 0) report.precision = precision_sum / static_cast<double>(estimates);
  report.fmeasure = fmeasure(report.precision, report.recall, opts.alpha);
  report.blocks = rates_from_counts(totals);
  return report;
}

std::string report_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "frame,recall,precision,fmeasure,ATB,TDB,FDB,MDB\n";
  for (const FrameScore& s : report.frames) {
    out << s.frame << ',' << fixed(s.recall) << ',' << fixed(s.precision) << ','
        << fixed(s.fmeasure) << ',' << s.counts.atb << ',' << s.counts.tdb << ','
        << s.counts.fdb << ',' << s.counts.mdb << '\n';
  }
  return out.str();
}

std::string report_json(const EvalReport& report) {
  const BlockRates& b = report.blocks;
  nlohmann::ordered_json j;
  j["frames"] = report.frames.size();
  j["excluded_frames"] = report.excluded;
  j["recall"] = report.recall;
  j["precision"] = report.precision;
  j["fmeasure"] = report.fmeasure;
  j["DR"] = b.dr;
  j["FPR"] = b.fpr;
  j["MDR"] = b.mdr;
  j["counts"] = {{"ATB", b.counts.atb},
                 {"TDB", b.counts.tdb},
                 {"FDB", b.counts.fdb},
                 {"MDB", b.counts.mdb}};
  j["undefined_rates"] = {{"DR", b.dr_undefined},
                          {"FPR", b.fpr_undefined},
                          {"MDR", b.mdr_undefined}};
  j["config"] = {{"alpha", report.options.alpha},
                 {"tau_detect", report.options.tau_detect},
                 {"tau_full", report.options.tau_full},
                 {"averaging", "micro"},
                 {"mdb_rule", "target-area coverage below tau_full (proxy)"}};
  return j.dump(2) + "\n";
}

}  // namespace sheartext
