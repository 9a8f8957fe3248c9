#pragma once

// Random populations satisfying the monotone-decay assumption: success
// points and ages are co-sorted (more points never means younger), ages are
// pairwise distinct and all exceed the time window.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "pscrd/protocol.hpp"
#include "pscrd/rng.hpp"

namespace pscrd::testing {

struct AgedPopulation {
  std::vector<double> points;  // ascending
  std::vector<double> ages;    // ascending, aligned with points
  DecayParams decay;

  std::vector<double> decayed() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < points.size(); ++i)
      out.push_back(decay_points(points[i], ages[i], decay));
    return out;
  }

  // Whether decay keeps the bridges in the same order.
  bool rank_preserving() const {
    const auto d = decayed();
    return std::is_sorted(d.begin(), d.end());
  }
};

inline AgedPopulation sample_aged_population(Rng& rng, std::size_t max_n = 50) {
  static constexpr double kWindows[] = {1.0, 5.0, 10.0};
  AgedPopulation p;
  const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_below(max_n - 1));
  const double mean = rng.uniform(1.0, 100.0);
  do {
    p.points.clear();
    for (std::size_t i = 0; i < n; ++i) p.points.push_back(static_cast<double>(rng.poisson(mean)));
  } while (std::all_of(p.points.begin(), p.points.end(), [](double v) { return v == 0.0; }));
  std::sort(p.points.begin(), p.points.end());

  p.decay.lambda = rng.uniform(1e-3, 1.0 - 1e-3);
  p.decay.time_window_hours = kWindows[rng.uniform_below(3)];
  for (std::size_t i = 0; i < n; ++i)
    p.ages.push_back(p.decay.time_window_hours + 1e-6 + rng.uniform(0.0, 150.0));
  std::sort(p.ages.begin(), p.ages.end());
  return p;
}

}  // namespace pscrd::testing
