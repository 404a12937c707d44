#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "json.hpp"
#include "sheartext/evaluate.hpp"

using namespace sheartext;

namespace {

Rect random_rect(std::mt19937_64& rng, int extent = 40) {
  std::uniform_int_distribution<int> pos(0, extent);
  std::uniform_int_distribution<int> dim(1, extent / 2);
  return Rect{pos(rng), pos(rng), dim(rng), dim(rng)};
}

// Pixel-counting oracle for the match score.
double brute_match(const Rect& a, const Rect& b) {
  const int x0 = std::min(a.x, b.x), y0 = std::min(a.y, b.y);
  const int x1 = std::max(a.right(), b.right()), y1 = std::max(a.bottom(), b.bottom());
  long long inter = 0;
  auto inside = [](const Rect& r, int x, int y) {
    return x >= r.x && x < r.right() && y >= r.y && y < r.bottom();
  };
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) inter += inside(a, x, y) && inside(b, x, y);
  }
  return static_cast<double>(inter) / (static_cast<double>(x1 - x0) * (y1 - y0));
}

std::vector<EvalPair> hand_fixture() {
  return {
      {"a", {{0, 0, 10, 10}}, {{0, 0, 10, 10}}},
      {"b", {{0, 0, 10, 10}}, {{5, 0, 10, 10}}},
      {"c", {{0, 0, 10, 10}, {20, 0, 10, 10}}, {{0, 0, 10, 10}}},
  };
}

}  // namespace

TEST_CASE("match score examples") {
  const Rect r{3, 4, 10, 7};
  CHECK(match_score(r, r) == 1.0);
  CHECK(match_score({0, 0, 10, 10}, {20, 20, 5, 5}) == 0.0);
  CHECK(match_score({0, 0, 10, 10}, {10, 0, 10, 10}) == 0.0);  // touching edges
  CHECK(match_score({0, 0, 10, 10}, {5, 0, 10, 10}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(match_score({0, 0, 10, 10}, {2, 2, 5, 5}) == doctest::Approx(0.25));
}

TEST_CASE("match score is symmetric, bounded and agrees with pixel counting") {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 1000; ++i) {
    const Rect a = random_rect(rng);
    const Rect b = random_rect(rng);
    const double m = match_score(a, b);
    REQUIRE(m == match_score(b, a));
    REQUIRE(m >= 0.0);
    REQUIRE(m <= 1.0);
    REQUIRE(std::abs(m - brute_match(a, b)) < 1e-12);
    if (m == 1.0) REQUIRE(a == b);
  }
}

TEST_CASE("best match") {
  const Rect r{0, 0, 10, 10};
  std::vector<Rect> set{{50, 50, 3, 3}, r, {5, 0, 10, 10}};
  CHECK(best_match(r, set) == 1.0);
  CHECK(best_match(r, std::vector<Rect>{}) == 0.0);

  std::mt19937_64 rng(72);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Rect> five;
    for (int i = 0; i < 5; ++i) five.push_back(random_rect(rng));
    const Rect q = random_rect(rng);
    double oracle = 0.0;
    for (const Rect& s : five) oracle = std::max(oracle, brute_match(q, s));
    CHECK(best_match(q, five) == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("recall and precision") {
  const Rect u1{0, 0, 1, 1}, u2{5, 5, 1, 1};
  EvalPair perfect{"p", {u1, u2}, {u2, u1}};
  CHECK(recall(perfect) == 1.0);
  CHECK(precision(perfect) == 1.0);

  EvalPair half{"h", {u1, u2}, {u1}};
  CHECK(recall(half) == 0.5);
  CHECK(precision(half) == 1.0);

  EvalPair none{"n", {u1}, {}};
  CHECK(recall(none) == 0.0);
  CHECK(precision(none) == 0.0);

  EvalPair empty{"e", {}, {u1}};
  CHECK_THROWS_AS(recall(empty), EmptyGroundTruth);
}

TEST_CASE("recall and precision ignore list order") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 50; ++trial) {
    EvalPair p{"x", {}, {}};
    for (int i = 0; i < 4; ++i) p.targets.push_back(random_rect(rng));
    for (int i = 0; i < 5; ++i) p.estimates.push_back(random_rect(rng));
    const double r = recall(p), pr = precision(p);
    std::shuffle(p.targets.begin(), p.targets.end(), rng);
    std::shuffle(p.estimates.begin(), p.estimates.end(), rng);
    CHECK(recall(p) == doctest::Approx(r).epsilon(1e-14));
    CHECK(precision(p) == doctest::Approx(pr).epsilon(1e-14));
  }
}

TEST_CASE("f-measure") {
  CHECK(fmeasure(0.9, 0.9) == doctest::Approx(0.9));
  CHECK(fmeasure(0.0, 0.7) == 0.0);
  CHECK(fmeasure(0.7, 0.0) == 0.0);
  CHECK(fmeasure(0.6, 0.3, 1.0) == doctest::Approx(0.6));
  CHECK(fmeasure(0.6, 0.3, 0.0) == doctest::Approx(0.3));

  struct Row {
    double p, r, f;
  };
  for (const Row& row : {Row{80.35, 76.94, 78.61}, Row{73.26, 52.58, 61.22},
                         Row{86.95, 84.38, 85.66}, Row{85.64, 87.23, 86.43}}) {
    CHECK(std::abs(100.0 * fmeasure(row.p / 100, row.r / 100, 0.5) - row.f) <= 0.02);
  }

  std::mt19937_64 rng(74);
  std::uniform_real_distribution<double> u(1e-3, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double p = u(rng), r = u(rng);
    const double f = fmeasure(p, r);
    CHECK(f == doctest::Approx(fmeasure(r, p)).epsilon(1e-15));
    CHECK(f >= std::min(p, r) * (1 - 1e-15));
    CHECK(f <= std::max(p, r) * (1 + 1e-15));
  }
}

TEST_CASE("block rates") {
  const Rect t{0, 0, 10, 10};
  const BlockRates perfect = block_rates({"p", {t}, {t}});
  CHECK(perfect.dr == 1.0);
  CHECK(perfect.fpr == 0.0);
  CHECK(perfect.mdr == 0.0);

  const BlockRates stray = block_rates({"s", {t}, {{50, 50, 5, 5}}});
  CHECK(stray.counts.tdb == 0);
  CHECK(stray.counts.fdb == 1);
  CHECK(stray.fpr == 1.0);
  CHECK(stray.mdr_undefined);

  const BlockCounts partial = block_counts({"m", {t}, {{0, 0, 6, 10}}});
  CHECK(partial.tdb == 1);
  CHECK(partial.mdb == 1);
  CHECK(block_counts({"m", {t}, {{0, 0, 6, 10}}}, 0.0, 0.5).mdb == 0);

  const BlockRates nothing = block_rates({"z", {}, {}});
  CHECK(nothing.dr_undefined);
  CHECK(nothing.fpr_undefined);
  CHECK(nothing.dr == 0.0);

  CHECK_THROWS_AS(block_counts({"x", {t}, {t}}, 0.5, 0.4), std::invalid_argument);

  std::mt19937_64 rng(75);
  for (int trial = 0; trial < 200; ++trial) {
    EvalPair p{"r", {}, {}};
    for (int i = 0; i < 3; ++i) p.targets.push_back(random_rect(rng));
    for (int i = 0; i < 4; ++i) p.estimates.push_back(random_rect(rng));
    const BlockRates b = block_rates(p);
    CHECK(b.counts.tdb + b.counts.fdb == 4);
    CHECK(b.counts.mdb <= b.counts.tdb);
    for (double v : {b.fpr, b.mdr}) CHECK((v >= 0.0 && v <= 1.0));
  }
}

TEST_CASE("hand-computed three-frame report") {
  const auto pairs = hand_fixture();
  const EvalReport rep = evaluate(pairs);
  CHECK(std::abs(rep.recall - 7.0 / 12.0) < 1e-9);
  CHECK(std::abs(rep.precision - 7.0 / 9.0) < 1e-9);
  CHECK(std::abs(rep.fmeasure - 2.0 / 3.0) < 1e-9);
  CHECK(rep.blocks.counts.atb == 4);
  CHECK(rep.blocks.counts.tdb == 3);
  CHECK(rep.blocks.counts.fdb == 0);
  CHECK(rep.blocks.counts.mdb == 1);
  CHECK(rep.blocks.dr == 0.75);
  REQUIRE(rep.frames.size() == 3);
  CHECK(rep.frames[2].recall == 0.5);

  CHECK(report_csv(rep) ==
        "frame,recall,precision,fmeasure,ATB,TDB,FDB,MDB\n"
        "a,1.000000,1.000000,1.000000,1,1,0,0\n"
        "b,0.333333,0.333333,0.333333,1,1,0,1\n"
        "c,0.500000,1.000000,0.666667,2,1,0,0\n");

  const auto j = nlohmann::json::parse(report_json(rep));
  CHECK(j["recall"].get<double>() == doctest::Approx(7.0 / 12.0));
  CHECK(j["counts"]["MDB"].get<int>() == 1);
  CHECK(j["config"]["alpha"].get<double>() == 0.5);
  CHECK(j["excluded_frames"].empty());
}

TEST_CASE("frames without ground truth are excluded") {
  auto pairs = hand_fixture();
  pairs.push_back({"empty", {}, {{1, 1, 4, 4}}});
  const EvalReport rep = evaluate(pairs);
  CHECK(rep.frames.size() == 3);
  CHECK(rep.excluded == std::vector<std::string>{"empty"});
  CHECK(std::abs(rep.precision - 7.0 / 9.0) < 1e-9);

  const EvalReport nothing = evaluate(std::vector<EvalPair>{});
  CHECK(nothing.recall == 0.0);
  CHECK(nothing.fmeasure == 0.0);
}
