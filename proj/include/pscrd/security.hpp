#pragma once

#include <cmath>
#include <cstddef>

#include "pscrd/errors.hpp"

namespace pscrd {

inline double log_binomial(std::size_t n, std::size_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

// Probability that a uniformly random q-subset of n bridges, of which
// `attackers` collude, seats strictly more than q/2 attackers. Selection is
// without replacement, so this is the hypergeometric upper tail.
inline double quorum_majority_probability(std::size_t n, std::size_t q, std::size_t attackers) {
  if (q == 0 || q > n) throw InvalidParams("quorum must lie in [1, population]");
  if (attackers > n) throw InvalidParams("more attackers than bridges");
  const std::size_t honest = n - attackers;
  const double log_total = log_binomial(n, q);
  double p = 0.0;
  for (std::size_t k = q / 2 + 1; k <= q && k <= attackers; ++k) {
    if (q - k > honest) continue;
    p += std::exp(log_binomial(attackers, k) + log_binomial(honest, q - k) - log_total);
  }
  return p > 1.0 ? 1.0 : p;
}

}  // namespace pscrd
