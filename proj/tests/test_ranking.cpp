#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "lips/ranking.hpp"

using namespace lips;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

BitVector bits(std::initializer_list<int> v) {
  BitVector b(v.size());
  std::size_t i = 0;
  for (int x : v) b.set(i++, x != 0);
  return b;
}

}  // namespace

TEST_CASE("contingency counts the joint cells") {
  auto t = contingency(bits({1, 1, 0, 0}), bits({1, 0, 1, 0}));
  CHECK(t.a == 1);
  CHECK(t.b == 1);
  CHECK(t.c == 1);
  CHECK(t.d == 1);

  auto zeros = contingency(bits({0, 0, 0}), bits({1, 0, 1}));
  CHECK(zeros.a == 0);
  CHECK(zeros.b == 0);

  CHECK_THROWS(contingency(bits({1}), bits({1, 0})));
}

TEST_CASE("odds ratio formula and Haldane correction") {
  auto plain = odds_ratio({10, 5, 20, 40});
  CHECK_THAT(plain.value, WithinRel(4.0, 1e-12));
  CHECK_FALSE(plain.corrected);

  auto corrected = odds_ratio({0, 5, 20, 40}, ZeroCellPolicy::haldane);
  CHECK(corrected.corrected);
  CHECK_THAT(corrected.value, WithinAbs((0.5 / 5.5) / (20.5 / 40.5), 1e-12));
  CHECK_THAT(corrected.value, WithinAbs(0.17960, 1e-4));

  CHECK_THAT(odds_ratio({5, 5, 5, 5}).value, WithinRel(1.0, 1e-12));

  CHECK_THROWS_AS(odds_ratio({0, 5, 20, 40}, ZeroCellPolicy::error),
                  UncomputableRank);
  // correction engaged iff a cell is zero
  CHECK_FALSE(odds_ratio({1, 1, 1, 1}).corrected);
}

TEST_CASE("odds ratio symmetry laws") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    ContingencyTable t{static_cast<long long>(rng() % 20 + 1),
                       static_cast<long long>(rng() % 20 + 1),
                       static_cast<long long>(rng() % 20 + 1),
                       static_cast<long long>(rng() % 20 + 1)};
    double orig = odds_ratio(t).value;
    CHECK_THAT(odds_ratio({t.d, t.c, t.b, t.a}).value,
               WithinRel(orig, 1e-12));
    CHECK_THAT(odds_ratio({t.b, t.a, t.d, t.c}).value,
               WithinRel(1.0 / orig, 1e-12));
  }
}

TEST_CASE("Woolf confidence interval") {
  // ln 4 +- z * sqrt(1/10 + 1/5 + 1/20 + 1/40), z for gamma = 0.90
  auto [low, high] = or_confidence_interval({10, 5, 20, 40}, 0.90);
  double z = 1.6448536269514722;
  double se = std::sqrt(0.1 + 0.2 + 0.05 + 0.025);
  // the quantile approximation is good to ~1e-9 relative in z
  CHECK_THAT(low, WithinAbs(std::exp(std::log(4.0) - z * se), 1e-6));
  CHECK_THAT(high, WithinAbs(std::exp(std::log(4.0) + z * se), 1e-6));
  CHECK(low < high);

  // symmetric around 1 on the log scale when OR = 1
  auto [l1, h1] = or_confidence_interval({5, 5, 5, 5}, 0.8);
  CHECK_THAT(l1 * h1, WithinAbs(1.0, 1e-12));

  // wider gamma, wider interval
  auto [l90, h90] = or_confidence_interval({10, 5, 20, 40}, 0.90);
  auto [l99, h99] = or_confidence_interval({10, 5, 20, 40}, 0.99);
  CHECK(l99 < l90);
  CHECK(h99 > h90);
}

TEST_CASE("rank orders by absolute log odds ratio") {
  std::vector<RankedPattern> cands = {
      make_ranked(Pattern::of({{0, 0}}), {40, 10, 20, 20}),   // OR = 4
      make_ranked(Pattern::of({{1, 0}}), {10, 50, 20, 20}),   // OR = 0.2
      make_ranked(Pattern::of({{2, 0}}), {22, 20, 20, 20}),   // OR = 1.1
  };
  auto sorted = rank(cands);
  REQUIRE(sorted.size() == 3);
  CHECK_THAT(sorted[0].odds_ratio, WithinRel(0.2, 1e-12));  // |ln .2| = 1.609
  CHECK_THAT(sorted[1].odds_ratio, WithinRel(4.0, 1e-12));  // |ln 4| = 1.386
  CHECK_THAT(sorted[2].odds_ratio, WithinRel(1.1, 1e-12));
}

TEST_CASE("reciprocal odds ratios tie and break deterministically") {
  auto r2 = make_ranked(Pattern::of({{1, 0}}), {20, 10, 10, 10});  // OR = 2
  auto rhalf = make_ranked(Pattern::of({{0, 0}}), {10, 20, 10, 5});  // OR = 0.25
  // craft an exact reciprocal pair instead: (a b c d) vs swapped rows
  auto x = make_ranked(Pattern::of({{1, 0}}), {20, 10, 10, 10},
                       ZeroCellPolicy::haldane, 0.4);
  auto y = make_ranked(Pattern::of({{0, 0}}), {10, 20, 10, 10},
                       ZeroCellPolicy::haldane, 0.4);
  CHECK_THAT(x.log_abs_or, WithinAbs(y.log_abs_or, 1e-12));
  auto sorted = rank({y, x});
  // equal |log OR| and support and size: pattern order decides
  CHECK(sorted[0].pattern == Pattern::of({{0, 0}}));
  (void)r2;
  (void)rhalf;
}

TEST_CASE("confidence filter removes intervals containing 1") {
  auto strong = make_ranked(Pattern::of({{0, 0}}), {40, 10, 20, 40});
  auto weak = make_ranked(Pattern::of({{1, 0}}), {11, 10, 10, 10});
  auto sorted = rank({strong, weak}, 0.9);
  REQUIRE(sorted.size() == 1);
  CHECK(sorted[0].pattern == Pattern::of({{0, 0}}));
  CHECK(sorted[0].ci.has_value());
}

TEST_CASE("rank output is a permutation and non-increasing") {
  std::mt19937_64 rng(41);
  std::vector<RankedPattern> cands;
  for (int i = 0; i < 50; ++i)
    cands.push_back(make_ranked(
        Pattern::of({{i, 0}}),
        {static_cast<long long>(rng() % 30), static_cast<long long>(rng() % 30),
         static_cast<long long>(rng() % 30 + 1),
         static_cast<long long>(rng() % 30 + 1)}));
  auto sorted = rank(cands);
  REQUIRE(sorted.size() == cands.size());
  for (std::size_t i = 1; i < sorted.size(); ++i)
    CHECK(sorted[i - 1].log_abs_or >= sorted[i].log_abs_or);
  auto sorted2 = rank(cands);
  for (std::size_t i = 0; i < sorted.size(); ++i)
    CHECK(sorted[i].pattern == sorted2[i].pattern);
}
