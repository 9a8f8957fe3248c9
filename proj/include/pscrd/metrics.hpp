#pragma once

// Fairness and decentralization measures over per-bridge success points.
//
// Conventions:
//   * gini_direct is the canonical Gini. An all-zero economy has Gini 0.
//   * gini_from_lorenz integrates the Lorenz curve with the trapezoid rule
//     (L_0 = 0), which matches gini_direct exactly:
//       1 - (1/n) * sum_k (L_{k-1} + L_k).
//     gini_from_lorenz_right_endpoint keeps the right-endpoint sum
//       1 - (2/n) * sum_k L_k,
//     which sits exactly 1/n below gini_direct.
//   * nakamoto is undefined (throws) when the total is zero.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

#include "pscrd/errors.hpp"

namespace pscrd::metrics {

struct Distribution {
  std::vector<double> values;

  Distribution() = default;
  explicit Distribution(std::vector<double> v) : values(std::move(v)) { validate(); }

  void validate() const {
    if (values.empty()) throw DegenerateDistribution("distribution has no values");
    for (double v : values)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw DegenerateDistribution("values must be finite and non-negative");
  }

  std::size_t size() const noexcept { return values.size(); }
  double total() const noexcept { return std::accumulate(values.begin(), values.end(), 0.0); }

  std::vector<double> ascending() const {
    auto v = values;
    std::stable_sort(v.begin(), v.end());
    return v;
  }
  std::vector<double> descending() const {
    auto v = values;
    std::stable_sort(v.begin(), v.end(), std::greater<>{});
    return v;
  }
};

struct LorenzCurve {
  std::vector<double> coords;

  std::size_t size() const noexcept { return coords.size(); }
};

struct NakamotoResult {
  std::size_t coefficient = 0;
  std::vector<double> cumulative;
};

inline double gini_direct(const Distribution& d) {
  d.validate();
  const double total = d.total();
  const auto n = static_cast<double>(d.size());
  if (total <= 0.0 || d.size() == 1) return 0.0;
  const auto sorted = d.ascending();
  double acc = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i)
    acc += (2.0 * static_cast<double>(i + 1) - n - 1.0) * sorted[i];
  return acc / (n * total);
}

inline LorenzCurve lorenz(const Distribution& d) {
  d.validate();
  const double total = d.total();
  if (!(total > 0.0)) throw DegenerateDistribution("Lorenz curve of a zero-total distribution");
  LorenzCurve curve;
  curve.coords.reserve(d.size());
  double running = 0.0;
  for (double v : d.ascending()) {
    running += v;
    curve.coords.push_back(running / total);
  }
  curve.coords.back() = 1.0;
  return curve;
}

inline double gini_from_lorenz(const LorenzCurve& curve) {
  if (curve.coords.empty()) return 0.0;
  const auto n = static_cast<double>(curve.size());
  double previous = 0.0;
  double area = 0.0;
  for (double l : curve.coords) {
    area += previous + l;
    previous = l;
  }
  return 1.0 - area / n;
}

inline double gini_from_lorenz_right_endpoint(const LorenzCurve& curve) {
  if (curve.coords.empty()) return 0.0;
  const auto n = static_cast<double>(curve.size());
  const double sum = std::accumulate(curve.coords.begin(), curve.coords.end(), 0.0);
  return 1.0 - 2.0 / n * sum;
}

// Smallest k whose top-k cumulative share reaches half the total. The
// comparison allows 1e-12 relative slack so sums that are mathematically
// equal to S/2 are not lost to rounding.
inline NakamotoResult nakamoto(const Distribution& d) {
  d.validate();
  const double total = d.total();
  if (!(total > 0.0)) throw DegenerateDistribution("Nakamoto coefficient of a zero total");
  const double half = total / 2.0;
  NakamotoResult out;
  double running = 0.0;
  for (double v : d.descending()) {
    running += v;
    out.cumulative.push_back(running);
    if (out.coefficient == 0 && running >= half - 1e-12 * total)
      out.coefficient = out.cumulative.size();
  }
  return out;
}

inline bool lorenz_dominates(const LorenzCurve& after, const LorenzCurve& before) {
  if (after.size() != before.size())
    throw LengthMismatch("Lorenz curves of different populations");
  for (std::size_t k = 0; k < after.size(); ++k)
    if (after.coords[k] < before.coords[k] - 1e-12) return false;
  return true;
}

}  // namespace pscrd::metrics
