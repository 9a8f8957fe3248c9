#pragma once

// Acceptance criteria registry. The acceptance test binary and the CLI
// `verify` subcommand both iterate criteria(); there is no second list.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "pscrd/metrics.hpp"
#include "pscrd/protocol.hpp"
#include "pscrd/report.hpp"
#include "pscrd/security.hpp"
#include "pscrd/simulator.hpp"
#include "pscrd/testing/aged_populations.hpp"
#include "pscrd/testing/oracles.hpp"

namespace pscrd::acceptance {

inline constexpr std::size_t kReplicates = 20;

// Bands, pinned.
inline constexpr double kGiniLow = 0.05, kGiniHigh = 0.20;
inline constexpr double kNakamotoLow = 17.0, kNakamotoHigh = 25.0;
inline constexpr double kBaselineSeconds = 10.0, kSweepSeconds = 60.0;
inline constexpr double kSmallCoalitionShareMax = 0.02, kSmallCoalitionCaptureMax = 0.01;
inline constexpr double kMajorityShareLow = 0.45, kMajorityShareHigh = 0.55;
inline constexpr double kDecayedRatioMax = 0.2;
inline constexpr std::size_t kTheoremSamples = 2000;
inline constexpr std::size_t kOracleInstances = 1000;
inline constexpr std::size_t kSelections = 100000;

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  std::function<CriterionResult(const sim::ScenarioConfig&)> check;
};

namespace detail {

inline std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

inline sim::ScenarioConfig honest(sim::ScenarioConfig c) {
  c.adversary.reset();
  return c;
}

struct Timed {
  sim::AveragedSeries series;
  double seconds;
};

inline Timed averaged(const sim::ScenarioConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto seeds = sim::replicate_seeds(cfg.seed, kReplicates);
  const auto runs = sim::run_replicates(cfg, seeds, {.record_events = false});
  auto series = sim::average_series(runs);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(series), secs};
}

inline bool in_band(double v, double lo, double hi) { return v >= lo && v <= hi; }

inline CriterionResult final_bands(const sim::ScenarioConfig& cfg, bool check_gini, bool check_k) {
  const auto t = averaged(cfg);
  const double g = t.series.gini_decayed.back();
  const double k = t.series.nakamoto_decayed.back();
  CriterionResult r;
  r.pass = t.seconds < kBaselineSeconds;
  if (check_gini) {
    r.pass = r.pass && in_band(g, kGiniLow, kGiniHigh);
    r.detail += fmt("final gini_decayed=%.4f in [0.05,0.20]", g);
  }
  if (check_k) {
    r.pass = r.pass && in_band(k, kNakamotoLow, kNakamotoHigh);
    r.detail += (r.detail.empty() ? "" : ", ") + fmt("final nakamoto_decayed=%.2f in [17,25]", k);
  }
  r.detail += fmt(" (%.2f s)", t.seconds);
  return r;
}

inline CriterionResult entry_shock(const sim::ScenarioConfig& base) {
  const auto t = averaged(honest(base));
  const auto& g = t.series.gini_decayed;
  if (g.size() <= 80) return {false, "series shorter than 81 hours"};
  const bool ok = g[41] > g[39] && g[61] > g[59] && g[55] < g[41] && g[80] < g[61];
  char buf[200];
  std::snprintf(buf, sizeof buf, "G39=%.4f G41=%.4f G55=%.4f | G59=%.4f G61=%.4f G80=%.4f", g[39],
                g[41], g[55], g[59], g[61], g[80]);
  return {ok, buf};
}

inline CriterionResult sensitivity(const sim::ScenarioConfig& base) {
  const std::vector<double> lambdas{0.01, 0.05, 0.1}, windows{1.0, 5.0, 10.0};
  const auto seeds = sim::replicate_seeds(base.seed, kReplicates);
  const auto t0 = std::chrono::steady_clock::now();
  const auto cells = sim::run_sensitivity(honest(base), lambdas, windows, seeds, {.record_events = false});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::map<std::size_t, std::vector<sim::RunResult>> by_cell;
  for (const auto& c : cells) by_cell[c.cell_index].push_back(c.result);
  bool ok = by_cell.size() == 9 && secs < kSweepSeconds;
  double gmin = 1, gmax = 0, kmin = 1e9, kmax = 0;
  for (const auto& [_, runs] : by_cell) {
    const auto avg = sim::average_series(runs);
    const double g = avg.gini_decayed.back(), k = avg.nakamoto_decayed.back();
    gmin = std::min(gmin, g), gmax = std::max(gmax, g);
    kmin = std::min(kmin, k), kmax = std::max(kmax, k);
    ok = ok && in_band(g, kGiniLow, kGiniHigh) && in_band(k, kNakamotoLow, kNakamotoHigh);
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "9 cells: gini in [%.4f,%.4f], nakamoto in [%.2f,%.2f] (%.2f s)", gmin,
                gmax, kmin, kmax, secs);
  return {ok, buf};
}

inline sim::AttackSummary attack_row(const sim::ScenarioConfig& base, int count) {
  const int counts[] = {count};
  return sim::run_attack(base, counts, kReplicates).front();
}

inline CriterionResult small_coalition(const sim::ScenarioConfig& base) {
  const auto row = attack_row(base, 5);
  const auto n = static_cast<std::size_t>(base.population());
  const auto q = quorum_size({base.total_reward, base.min_reward, n});
  const double exact = quorum_majority_probability(n, q, 5);
  const bool ok = row.reward_share < kSmallCoalitionShareMax &&
                  row.capture_frequency < kSmallCoalitionCaptureMax && exact < kSmallCoalitionCaptureMax;
  char buf[200];
  std::snprintf(buf, sizeof buf, "share=%.4f capture=%.4f exact P(N=%zu,Q=%zu,5)=%.3g", row.reward_share,
                row.capture_frequency, n, q, exact);
  return {ok, buf};
}

inline CriterionResult majority_coalition(const sim::ScenarioConfig& base) {
  const auto row = attack_row(base, 26);
  const bool share_ok = in_band(row.reward_share, kMajorityShareLow, kMajorityShareHigh);
  const bool ratio_ok = row.decayed_to_raw_ratio <= kDecayedRatioMax;
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "share=%.4f in [0.45,0.55]: %s; decayed/raw=%.2f/%.2f=%.4f <= 0.2: %s; capture=%.4f",
                row.reward_share, share_ok ? "ok" : "NO", row.attacker_points_decayed,
                row.attacker_points_raw, row.decayed_to_raw_ratio, ratio_ok ? "ok" : "NO",
                row.capture_frequency);
  return {share_ok && ratio_ok, buf};
}

inline std::string vec_str(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size() && i < 6; ++i) s += (i ? "," : "") + fmt("%.3g", v[i]);
  if (v.size() > 6) s += ",...";
  return s + "]";
}

inline CriterionResult theorem(bool gini, std::uint64_t seed) {
  Rng rng(seed);
  std::size_t holds = 0, strict = 0;
  std::string example;
  for (std::size_t i = 0; i < kTheoremSamples; ++i) {
    const auto p = testing::sample_aged_population(rng);
    const auto d = p.decayed();
    const metrics::Distribution before(p.points), after(d);
    bool ok, is_strict;
    if (gini) {
      const double g = metrics::gini_direct(before), g2 = metrics::gini_direct(after);
      ok = g2 <= g + 1e-12;
      is_strict = g2 < g;
    } else {
      const auto k = metrics::nakamoto(before).coefficient, k2 = metrics::nakamoto(after).coefficient;
      ok = k2 >= k;
      is_strict = k2 > k;
    }
    holds += ok;
    strict += is_strict;
    if (!ok && example.empty())
      example = "; first counterexample n=" + std::to_string(p.points.size()) +
                fmt(" lambda=%.3f", p.decay.lambda) + " points=" + vec_str(p.points) +
                " ages=" + vec_str(p.ages);
  }
  const double n = static_cast<double>(kTheoremSamples);
  std::string detail = std::to_string(kTheoremSamples) + " populations: holds " +
                       fmt("%.2f%%", 100.0 * static_cast<double>(holds) / n) + ", strict " +
                       fmt("%.2f%%", 100.0 * static_cast<double>(strict) / n) + example;
  return {holds == kTheoremSamples, detail};
}

inline CriterionResult metric_oracles(std::uint64_t seed) {
  Rng rng(seed);
  double worst_pair = 0, worst_lorenz = 0;
  std::size_t nak_mismatch = 0, nak_cases = 0;
  for (std::size_t t = 0; t < kOracleInstances; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform_below(199));
    std::vector<double> x;
    for (std::size_t i = 0; i < n; ++i)
      x.push_back(rng.uniform01() < 0.2 ? 0.0 : rng.uniform(0.0, 100.0));
    x[rng.uniform_below(n)] += 1.0;  // total > 0
    const metrics::Distribution d(x);
    const double g = metrics::gini_direct(d);
    worst_pair = std::max(worst_pair, std::fabs(g - testing::gini_pairwise(x)));
    worst_lorenz = std::max(worst_lorenz, std::fabs(g - metrics::gini_from_lorenz(metrics::lorenz(d))));
    if (n <= 50) {
      ++nak_cases;
      if (metrics::nakamoto(d).coefficient != testing::nakamoto_bruteforce(x)) ++nak_mismatch;
    }
  }
  const bool ok = worst_pair <= 1e-9 && worst_lorenz <= 1e-12 && nak_mismatch == 0;
  char buf[200];
  std::snprintf(buf, sizeof buf, "max|G-pairwise|=%.2e, max|G-G_lorenz|=%.2e, nakamoto mismatches %zu/%zu",
                worst_pair, worst_lorenz, nak_mismatch, nak_cases);
  return {ok, buf};
}

inline CriterionResult conservation_determinism(const sim::ScenarioConfig& base) {
  const auto seeds = sim::replicate_seeds(base.seed, kReplicates);
  double worst = 0;
  std::size_t rounds = 0;
  for (const auto& run : sim::run_replicates(base, seeds, {.record_events = false}))
    for (const auto& r : run.rounds)
      if (r.consensus) {
        ++rounds;
        worst = std::max(worst, std::fabs(r.reward_sum - base.fee));
      }
  const auto a = sim::run_scenario(base), b = sim::run_scenario(base);
  const bool csv_same = report::format_csv(a.snapshots) == report::format_csv(b.snapshots);
  const bool log_same = a.events.serialize() == b.events.serialize();
  char buf[200];
  std::snprintf(buf, sizeof buf, "max|sum-fee|=%.2e over %zu rounds; CSV identical: %s; event log identical: %s",
                worst, rounds, csv_same ? "yes" : "no", log_same ? "yes" : "no");
  return {worst <= 1e-9 && rounds > 0 && csv_same && log_same, buf};
}

inline CriterionResult selection_uniformity(std::uint64_t seed) {
  constexpr std::size_t n = 50, q = 20;
  std::vector<BridgeId> ids;
  for (std::size_t i = 0; i < n; ++i) ids.emplace_back(sim::bridge_name(i, n));
  std::map<BridgeId, std::size_t> hits;
  Rng rng(seed);
  for (std::size_t m = 0; m < kSelections; ++m)
    for (const auto& id : select_quorum(ids, q, rng)) ++hits[id];
  const double p = selection_probability(q, n);
  const double se = std::sqrt(p * (1 - p) / static_cast<double>(kSelections));
  double worst = 0;
  for (const auto& id : ids)
    worst = std::max(worst, std::fabs(static_cast<double>(hits[id]) / kSelections - p));
  char buf[160];
  std::snprintf(buf, sizeof buf, "max|freq-Q/N|=%.5f vs 3*SE=%.5f (Q/N=%.2f, M=%zu)", worst, 3 * se, p,
                kSelections);
  return {worst < 3 * se, buf};
}

inline CriterionResult quorum_robustness(const sim::ScenarioConfig& base) {
  CriterionResult out{true, ""};
  for (double total : {10.0, 30.0}) {
    auto cfg = honest(base);
    cfg.total_reward = total * cfg.min_reward;
    const auto r = final_bands(cfg, true, true);
    out.pass = out.pass && r.pass;
    out.detail += (out.detail.empty() ? "" : " | ") + fmt("Q=%.0f: ", total) + r.detail;
  }
  return out;
}

}  // namespace detail

inline const std::vector<Criterion>& criteria() {
  using namespace detail;
  static const std::vector<Criterion> list = {
      {1, "Baseline fairness convergence",
       [](const sim::ScenarioConfig& c) { return final_bands(honest(c), true, false); }},
      {2, "Baseline decentralization",
       [](const sim::ScenarioConfig& c) { return final_bands(honest(c), false, true); }},
      {3, "Entry-shock shape", [](const sim::ScenarioConfig& c) { return entry_shock(c); }},
      {4, "Sensitivity robustness", [](const sim::ScenarioConfig& c) { return sensitivity(c); }},
      {5, "Attack baseline (5 of 50)", [](const sim::ScenarioConfig& c) { return small_coalition(c); }},
      {6, "51% attack containment (26 of 50)",
       [](const sim::ScenarioConfig& c) { return majority_coalition(c); }},
      {7, "Decay never raises Gini (co-sorted ages)",
       [](const sim::ScenarioConfig& c) { return theorem(true, c.seed + 7); }},
      {8, "Decay never lowers Nakamoto (co-sorted ages)",
       [](const sim::ScenarioConfig& c) { return theorem(false, c.seed + 7); }},
      {9, "Metric oracles", [](const sim::ScenarioConfig& c) { return metric_oracles(c.seed + 9); }},
      {10, "Reward conservation and determinism",
       [](const sim::ScenarioConfig& c) { return conservation_determinism(honest(c)); }},
      {11, "Selection uniformity", [](const sim::ScenarioConfig& c) { return selection_uniformity(c.seed + 11); }},
      {12, "Quorum-parameter robustness (Q=10,30)",
       [](const sim::ScenarioConfig& c) { return quorum_robustness(c); }},
  };
  return list;
}

// Prints one PASS/FAIL line per criterion; returns true when all pass.
inline bool run_all(const sim::ScenarioConfig& base, std::ostream& out) {
  bool all = true;
  for (const auto& c : criteria()) {
    CriterionResult r;
    try {
      r = c.check(base);
    } catch (const std::exception& e) {
      r = {false, std::string("error: ") + e.what()};
    }
    all = all && r.pass;
    char head[96];
    std::snprintf(head, sizeof head, "[%s] %2d %-40s ", r.pass ? "PASS" : "FAIL", c.id, c.name.c_str());
    out << head << r.detail << '\n';
  }
  return all;
}

}  // namespace pscrd::acceptance
