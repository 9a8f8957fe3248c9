#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "pscrd/metrics.hpp"
#include "pscrd/rng.hpp"
#include "pscrd/testing/aged_populations.hpp"
#include "pscrd/testing/oracles.hpp"

using namespace pscrd;
using namespace pscrd::metrics;

namespace {

std::vector<double> random_values(Rng& rng, std::size_t n) {
  std::vector<double> v;
  for (std::size_t i = 0; i < n; ++i) {
    const double roll = rng.uniform01();
    v.push_back(roll < 0.1 ? 0.0 : roll < 0.3 ? double(rng.poisson(5)) : rng.uniform(0, 1000));
  }
  if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0; })) v[0] = 1;
  return v;
}

}  // namespace

// ---------------------------------------------------------------------- Gini

TEST(Gini, EqualValuesGiveZero) { EXPECT_DOUBLE_EQ(gini_direct(Distribution({5, 5, 5, 5})), 0.0); }

TEST(Gini, TwoBridgesOneHoldsEverything) {
  const Distribution d({0, 1});
  EXPECT_DOUBLE_EQ(gini_direct(d), 0.5);
  EXPECT_DOUBLE_EQ(gini_from_lorenz(lorenz(d)), 0.5);
  // the right-endpoint sum sits exactly 1/n lower
  EXPECT_DOUBLE_EQ(gini_from_lorenz_right_endpoint(lorenz(d)), 0.0);
}

TEST(Gini, ConcentrationLimit) {
  std::vector<double> v(100, 0.0);
  v.back() = 7;
  EXPECT_DOUBLE_EQ(gini_direct(Distribution(v)), 0.99);  // (n-1)/n
}

TEST(Gini, ZeroTotalIsZero) { EXPECT_EQ(gini_direct(Distribution({0, 0, 0})), 0.0); }

TEST(Gini, SingleValueIsZero) { EXPECT_EQ(gini_direct(Distribution({3})), 0.0); }

TEST(Gini, RejectsBadInput) {
  EXPECT_THROW(Distribution(std::vector<double>{}), DegenerateDistribution);
  EXPECT_THROW(Distribution({1, -1}), DegenerateDistribution);
  EXPECT_THROW(Distribution({1, std::nan("")}), DegenerateDistribution);
}

TEST(Gini, MatchesPairwiseOracle) {
  Rng rng(101);
  for (int t = 0; t < 1000; ++t) {
    const auto v = random_values(rng, 1 + rng.uniform_below(60));
    const Distribution d(v);
    const double want = pscrd::testing::gini_pairwise(v);
    ASSERT_NEAR(gini_direct(d), want, 1e-9);
    ASSERT_NEAR(gini_from_lorenz(lorenz(d)), want, 1e-9);
    ASSERT_NEAR(gini_from_lorenz_right_endpoint(lorenz(d)), want - 1.0 / double(v.size()), 1e-9);
  }
}

TEST(Gini, BoundedAndScaleInvariant) {
  Rng rng(102);
  for (int t = 0; t < 500; ++t) {
    auto v = random_values(rng, 2 + rng.uniform_below(40));
    const double g = gini_direct(Distribution(v));
    ASSERT_GE(g, 0.0);
    ASSERT_LE(g, 1.0 - 1.0 / double(v.size()) + 1e-12);
    const double c = rng.uniform(0.01, 100);
    for (auto& x : v) x *= c;
    ASSERT_NEAR(gini_direct(Distribution(v)), g, 1e-12);
  }
}

TEST(Gini, PermutationInvariant) {
  Rng rng(103);
  auto v = random_values(rng, 30);
  const double g = gini_direct(Distribution(v));
  std::reverse(v.begin(), v.end());
  EXPECT_NEAR(gini_direct(Distribution(v)), g, 1e-15);
}

// -------------------------------------------------------------------- Lorenz

TEST(Lorenz, CumulativeShares) {
  const auto c = lorenz(Distribution({2, 1, 1}));
  ASSERT_EQ(c.size(), 3u);
  EXPECT_DOUBLE_EQ(c.coords[0], 0.25);
  EXPECT_DOUBLE_EQ(c.coords[1], 0.5);
  EXPECT_EQ(c.coords[2], 1.0);
}

TEST(Lorenz, ZeroTotalRejected) { EXPECT_THROW(lorenz(Distribution({0, 0})), DegenerateDistribution); }

TEST(Lorenz, DominanceExample) {
  // decayed [5,3] dominates raw [10,1]
  const auto after = lorenz(Distribution({5, 3}));
  const auto before = lorenz(Distribution({10, 1}));
  EXPECT_DOUBLE_EQ(after.coords[0], 0.375);
  EXPECT_DOUBLE_EQ(before.coords[0], 1.0 / 11.0);
  EXPECT_TRUE(lorenz_dominates(after, before));
  EXPECT_FALSE(lorenz_dominates(before, after));
}

TEST(Lorenz, DominanceNeedsEqualLengths) {
  EXPECT_THROW(lorenz_dominates(lorenz(Distribution({1, 1})), lorenz(Distribution({1, 1, 1}))),
               LengthMismatch);
}

// ------------------------------------------------------------------ Nakamoto

TEST(Nakamoto, Examples) {
  EXPECT_EQ(nakamoto(Distribution({5, 3, 2})).coefficient, 1u);
  EXPECT_EQ(nakamoto(Distribution({1, 1, 1, 1})).coefficient, 2u);  // exactly half counts
  EXPECT_EQ(nakamoto(Distribution({10, 0, 0})).coefficient, 1u);
}

TEST(Nakamoto, CumulativeSumsDescending) {
  const auto r = nakamoto(Distribution({2, 5, 3}));
  EXPECT_EQ(r.cumulative, (std::vector<double>{5, 8, 10}));
}

TEST(Nakamoto, ZeroTotalRejected) { EXPECT_THROW(nakamoto(Distribution({0, 0})), DegenerateDistribution); }

TEST(Nakamoto, MatchesBruteForceOracle) {
  Rng rng(104);
  for (int t = 0; t < 1000; ++t) {
    const auto v = random_values(rng, 1 + rng.uniform_below(t % 2 ? 16 : 80));
    const auto k = nakamoto(Distribution(v)).coefficient;
    ASSERT_EQ(k, pscrd::testing::nakamoto_bruteforce(v));
    ASSERT_GE(k, 1u);
    ASSERT_LE(k, v.size());
  }
}

TEST(Nakamoto, EqualSharesNeedHalfThePopulation) {
  for (std::size_t n = 1; n <= 60; ++n) {
    const std::vector<double> v(n, 3.0);
    EXPECT_EQ(nakamoto(Distribution(v)).coefficient, (n + 1) / 2) << n;
  }
}

// --------------------------------------------------- decay and concentration

TEST(DecayConcentration, RankPreservingDecayNeverRaisesGiniOrLowersNakamoto) {
  Rng rng(2025);
  std::size_t checked = 0;
  while (checked < 2000) {
    const auto p = pscrd::testing::sample_aged_population(rng);
    if (!p.rank_preserving()) continue;
    ++checked;
    const Distribution raw(p.points), dec(p.decayed());
    ASSERT_LE(gini_direct(dec), gini_direct(raw) + 1e-12);
    ASSERT_TRUE(lorenz_dominates(lorenz(dec), lorenz(raw)));
    ASSERT_GE(nakamoto(dec).coefficient, nakamoto(raw).coefficient);
  }
}

// With co-sorted points and ages, decay can still reorder bridges when an
// old bridge loses more than its lead; concentration then rises.
TEST(DecayConcentration, ReorderingDecayCanRaiseGini) {
  pscrd::testing::AgedPopulation p;
  p.points = {10, 11};
  p.ages = {6, 150};
  p.decay = {0.05, 5};
  const auto d = p.decayed();
  EXPECT_NEAR(d[0], 10 / 1.3, 1e-12);
  EXPECT_NEAR(d[1], 11 / 8.5, 1e-12);
  EXPECT_FALSE(p.rank_preserving());
  EXPECT_GT(gini_direct(Distribution(d)), gini_direct(Distribution(p.points)));
}

TEST(DecayConcentration, ReorderingDecayCanLowerNakamoto) {
  pscrd::testing::AgedPopulation p;
  p.points = {4, 5, 5, 6};
  p.ages = {6, 200, 200, 200};
  p.decay = {0.5, 5};
  EXPECT_EQ(nakamoto(Distribution(p.points)).coefficient, 2u);
  EXPECT_EQ(nakamoto(Distribution(p.decayed())).coefficient, 1u);
}
