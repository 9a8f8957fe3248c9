#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "pscrd/protocol.hpp"
#include "pscrd/security.hpp"

using namespace pscrd;

TEST(QuorumMajorityProbability, Extremes) {
  EXPECT_EQ(quorum_majority_probability(50, 20, 0), 0.0);
  EXPECT_NEAR(quorum_majority_probability(50, 20, 50), 1.0, 1e-12);
  EXPECT_EQ(quorum_majority_probability(50, 20, 10), 0.0);  // 10 seats can never exceed 10
}

// 4 bridges, 2 of them attackers, quorum of 2: only the single pair of
// attackers out of C(4,2)=6 pairs seats a strict majority.
TEST(QuorumMajorityProbability, SmallCaseByEnumeration) {
  EXPECT_NEAR(quorum_majority_probability(4, 2, 2), 1.0 / 6.0, 1e-12);

  for (std::size_t n = 1; n <= 10; ++n)
    for (std::size_t q = 1; q <= n; ++q)
      for (std::size_t a = 0; a <= n; ++a) {
        std::size_t hits = 0, total = 0;
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
          if (std::size_t(__builtin_popcount(mask)) != q) continue;
          ++total;
          // attackers are bridges 0..a-1
          const auto seated = std::size_t(__builtin_popcount(mask & ((1u << a) - 1)));
          hits += 2 * seated > q;
        }
        ASSERT_NEAR(quorum_majority_probability(n, q, a), double(hits) / double(total), 1e-12)
            << n << " " << q << " " << a;
      }
}

TEST(QuorumMajorityProbability, AgreesWithSampledSelections) {
  constexpr std::size_t n = 50, q = 20, attackers = 24;
  std::vector<BridgeId> ids;
  for (std::size_t i = 0; i < n; ++i) ids.emplace_back("b" + std::to_string(100 + i));
  Rng rng(31);
  constexpr int trials = 50000;
  int hits = 0;
  for (int t = 0; t < trials; ++t) {
    std::size_t seated = 0;
    for (const auto& id : select_quorum(ids, q, rng)) seated += std::stoi(id.str().substr(1)) - 100 < int(attackers);
    hits += 2 * seated > q;
  }
  const double p = quorum_majority_probability(n, q, attackers);
  const double se = std::sqrt(p * (1 - p) / trials);
  EXPECT_NEAR(double(hits) / trials, p, 3 * se);
}

TEST(QuorumMajorityProbability, MonotoneInCoalitionSize) {
  double prev = 0.0;
  for (std::size_t a = 0; a <= 50; ++a) {
    const double p = quorum_majority_probability(50, 20, a);
    ASSERT_GE(p, prev - 1e-12);
    prev = p;
  }
}

TEST(QuorumMajorityProbability, RejectsBadArguments) {
  EXPECT_THROW(quorum_majority_probability(10, 0, 1), InvalidParams);
  EXPECT_THROW(quorum_majority_probability(10, 11, 1), InvalidParams);
  EXPECT_THROW(quorum_majority_probability(10, 5, 11), InvalidParams);
}
