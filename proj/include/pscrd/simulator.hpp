#pragma once

// Hour-stepped, seeded simulation of a bridge population running the
// protocol. One run is strictly sequential: the round pipeline order
// (select, respond, group, award, decay, distribute) defines the ledger.

#include <algorithm>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "pscrd/event_log.hpp"
#include "pscrd/metrics.hpp"
#include "pscrd/protocol.hpp"
#include "pscrd/rng.hpp"
#include "pscrd/scenario.hpp"
#include "pscrd/security.hpp"

namespace pscrd::sim {

struct MetricsSnapshot {
  std::int64_t hour = 0;
  std::int64_t round_id = 0;  // last round executed in this hour
  double gini_raw = 0.0;
  double gini_decayed = 0.0;
  std::int64_t nakamoto_raw = 0;
  std::int64_t nakamoto_decayed = 0;
  std::int64_t active_bridges = 0;
  std::int64_t majority_size = 0;  // of the hour's last round, 0 without consensus
  double attacker_points_raw = 0.0;
  double attacker_points_decayed = 0.0;
  double attacker_reward_share = 0.0;  // cumulative

  friend bool operator==(const MetricsSnapshot&, const MetricsSnapshot&) = default;
};

struct RoundStats {
  std::int64_t round_id = 0;
  std::size_t quorum = 0;
  std::size_t majority = 0;
  bool consensus = false;
  bool attacker_capture = false;
  double reward_sum = 0.0;
};

struct RunResult {
  ScenarioConfig config;
  std::vector<MetricsSnapshot> snapshots;
  std::vector<RoundStats> rounds;
  EventLog events;
  Ledger ledger;
  std::vector<BridgeId> attackers;
  std::vector<double> join_hours;  // distinct group join hours, ascending
  double total_rewards = 0.0;
  double attacker_rewards = 0.0;
  std::size_t consensus_rounds = 0;
  std::size_t attacker_captures = 0;

  const MetricsSnapshot& final_snapshot() const { return snapshots.back(); }
};

struct RunOptions {
  bool record_events = true;
};

inline std::string bridge_name(std::size_t index, std::size_t population) {
  std::size_t width = 3;
  for (std::size_t p = population; p >= 1000; p /= 10) ++width;
  auto digits = std::to_string(index);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return "b" + digits;
}

inline std::vector<std::uint64_t> replicate_seeds(std::uint64_t master, std::size_t count) {
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < count; ++i) seeds.push_back(stream_seed(master, i));
  return seeds;
}

namespace detail {

struct Population {
  std::vector<double> raw;
  std::vector<double> decayed;
};

inline Population active_points(const Ledger& ledger, const DecayParams& decay) {
  Population p;
  for (const auto& [id, rec] : ledger.bridges) {
    if (!rec.is_active()) continue;
    p.raw.push_back(rec.raw_success_points);
    p.decayed.push_back(apply_decay(rec, decay));
  }
  return p;
}

inline std::int64_t nakamoto_or_zero(const std::vector<double>& values) {
  double total = 0.0;
  for (double v : values) total += v;
  if (values.empty() || !(total > 0.0)) return 0;
  return static_cast<std::int64_t>(metrics::nakamoto(metrics::Distribution(values)).coefficient);
}

inline double gini_or_zero(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  return metrics::gini_direct(metrics::Distribution(values));
}

inline std::vector<std::size_t> choose_attackers(const ScenarioConfig& cfg, Rng& rng) {
  const auto n = static_cast<std::size_t>(cfg.population());
  if (!cfg.adversary || cfg.adversary->count == 0) return {};
  const auto count = static_cast<std::size_t>(cfg.adversary->count);
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  switch (cfg.adversary->placement) {
    case AttackerPlacement::earliest:
      idx.resize(count);
      break;
    case AttackerPlacement::latest:
      idx.erase(idx.begin(), idx.end() - static_cast<std::ptrdiff_t>(count));
      break;
    case AttackerPlacement::random:
      for (std::size_t i = 0; i < count; ++i)
        std::swap(idx[i], idx[i + static_cast<std::size_t>(rng.uniform_below(n - i))]);
      idx.resize(count);
      std::sort(idx.begin(), idx.end());
      break;
  }
  return idx;
}

}  // namespace detail

inline RunResult run_scenario(const ScenarioConfig& cfg, RunOptions options = {}) {
  validate(cfg);
  RunResult out;
  out.config = cfg;
  out.events = EventLog(options.record_events);
  auto& log = out.events;

  Rng rng(cfg.seed);
  Rng placement_rng = rng.split(0);
  const DecayParams decay = cfg.decay();
  const auto population = static_cast<std::size_t>(cfg.population());

  // Admission order: groups sorted by join hour, stable in listing order.
  struct Admission {
    std::size_t index;
    int hour;
  };
  std::vector<GroupSpec> groups = cfg.groups;
  std::stable_sort(groups.begin(), groups.end(),
                   [](const GroupSpec& a, const GroupSpec& b) { return a.join_hour < b.join_hour; });
  std::vector<Admission> admissions;
  for (const auto& g : groups)
    for (int i = 0; i < g.size; ++i) admissions.push_back({admissions.size(), g.join_hour});
  for (const auto& g : groups)
    if (out.join_hours.empty() || out.join_hours.back() != g.join_hour)
      out.join_hours.push_back(g.join_hour);

  std::vector<BridgeId> ids;
  for (std::size_t i = 0; i < population; ++i) ids.emplace_back(bridge_name(i, population));

  std::vector<bool> is_attacker(population, false);
  for (std::size_t i : detail::choose_attackers(cfg, placement_rng)) {
    is_attacker[i] = true;
    out.attackers.push_back(ids[i]);
  }

  Ledger ledger;
  std::int64_t round_id = 0;
  std::size_t next_admission = 0;

  for (int hour = 0; hour < cfg.duration_hours; ++hour) {
    const double now = ledger.now;

    while (next_admission < admissions.size() && admissions[next_admission].hour == hour) {
      const std::size_t i = admissions[next_admission++].index;
      BridgeRecord rec;
      rec.id = ids[i];
      rec.join_time = now;
      rec.raw_success_points = static_cast<double>(rng.poisson(cfg.initial_points_mean));
      rec.age = cfg.age_init_mode == AgeInitMode::uniform_random
                    ? rng.uniform(0.0, static_cast<double>(cfg.duration_hours))
                    : 0.0;
      rec.behavior = is_attacker[i] ? Behavior::adversary(0) : Behavior::honest();
      log.append(hour, -1, "admit",
                 {{"bridge", rec.id.str()},
                  {"points", rec.raw_success_points},
                  {"age", rec.age},
                  {"adversarial", rec.behavior.adversarial()}});
      ledger = admit(std::move(ledger), std::move(rec));
    }

    for (const auto& e : cfg.churn) {
      const auto& id = ids[static_cast<std::size_t>(e.bridge)];
      auto it = ledger.bridges.find(id);
      if (e.offline_hour == hour) {
        if (it == ledger.bridges.end() || !it->second.is_active()) {
          log.append(hour, -1, "warning", {{"message", "offline event for inactive bridge"},
                                           {"bridge", id.str()}});
        } else {
          ledger = take_offline(std::move(ledger), id, now);
          log.append(hour, -1, "offline", {{"bridge", id.str()}});
        }
      }
      if (e.rejoin_hour && *e.rejoin_hour == hour && ledger.bridges.contains(id)) {
        try {
          // rejoin may refuse, so it gets a copy rather than the moved ledger
          ledger = rejoin(ledger, id, now, cfg.retention_hours);
          log.append(hour, -1, "rejoin",
                     {{"bridge", id.str()}, {"points", ledger.at(id).raw_success_points},
                      {"age", ledger.at(id).age}});
        } catch (const Error& err) {
          log.append(hour, -1, "rejoin_refused", {{"bridge", id.str()}, {"reason", err.what()}});
        }
      }
    }

    std::int64_t last_majority = 0;
    for (int r = 0; r < cfg.rounds_per_hour; ++r, ++round_id) {
      RoundStats stats;
      stats.round_id = round_id;
      const auto candidates = active_bridges(ledger);
      if (candidates.empty()) {
        log.append(hour, round_id, "no_active_bridges");
        out.rounds.push_back(stats);
        last_majority = 0;
        continue;
      }

      TransferRound round;
      round.round_id = static_cast<std::uint64_t>(round_id);
      round.fee = cfg.fee;
      const auto q = quorum_size({cfg.total_reward, cfg.min_reward, candidates.size()});
      round.quorum = select_quorum(candidates, q, rng);
      stats.quorum = q;

      const ResponsePayload truth{"chainA:tx" + std::to_string(round_id),
                                  "chainB:acct" + std::to_string(round_id), 100.0};
      const ResponsePayload forged{truth.sender, "chainB:coalition0", truth.amount};
      std::vector<std::string> members;
      for (const auto& id : round.quorum) {
        round.responses[id] = ledger.at(id).behavior.adversarial() ? forged : truth;
        members.push_back(id.str());
      }
      log.append(hour, round_id, "quorum", {{"size", q}, {"members", members}});

      const auto groups_by_payload = group_responses(round);
      auto winner = find_majority(groups_by_payload, q);
      if (!winner) {
        std::vector<std::size_t> sizes;
        for (const auto& [_, m] : groups_by_payload) sizes.push_back(m.size());
        log.append(hour, round_id, "no_consensus", {{"group_sizes", sizes}});
        out.rounds.push_back(stats);
        last_majority = 0;
        continue;
      }

      const auto& majority = winner->second;
      const bool forged_won = winner->first == forged;
      round.majority = majority;
      ledger = award_success_points(std::move(ledger), majority);

      std::map<BridgeId, double> weights;
      for (const auto& id : majority) weights[id] = apply_decay(ledger.at(id), decay);
      const auto rewards = distribute_rewards(majority, cfg.fee, weights);
      ledger = credit_rewards(std::move(ledger), rewards);

      double sum = 0.0;
      for (const auto& [id, amount] : rewards) {
        sum += amount;
        if (ledger.at(id).behavior.adversarial()) out.attacker_rewards += amount;
      }
      out.total_rewards += sum;
      ++out.consensus_rounds;
      if (forged_won) ++out.attacker_captures;

      stats.consensus = true;
      stats.attacker_capture = forged_won;
      stats.majority = majority.size();
      stats.reward_sum = sum;
      out.rounds.push_back(stats);
      last_majority = static_cast<std::int64_t>(majority.size());

      if (log.enabled()) {
        log.append(hour, round_id, "consensus",
                   {{"payload", forged_won ? "forged" : "true"}, {"size", majority.size()}});
        for (const auto& id : majority) {
          log.append(hour, round_id, "award",
                     {{"bridge", id.str()}, {"points", ledger.at(id).raw_success_points}});
          log.append(hour, round_id, "decay",
                     {{"bridge", id.str()}, {"age", ledger.at(id).age},
                      {"decayed_points", weights.at(id)}});
          log.append(hour, round_id, "reward", {{"bridge", id.str()}, {"amount", rewards.at(id)}});
        }
      }
    }

    MetricsSnapshot snap;
    snap.hour = hour;
    snap.round_id = round_id - 1;
    const auto points = detail::active_points(ledger, decay);
    snap.active_bridges = static_cast<std::int64_t>(points.raw.size());
    snap.majority_size = last_majority;
    if (points.raw.size() == 1)
      log.append(hour, -1, "warning", {{"message", "single active bridge; G=0, K=1 by convention"}});
    snap.gini_raw = detail::gini_or_zero(points.raw);
    snap.gini_decayed = detail::gini_or_zero(points.decayed);
    snap.nakamoto_raw = detail::nakamoto_or_zero(points.raw);
    snap.nakamoto_decayed = detail::nakamoto_or_zero(points.decayed);
    if (!points.raw.empty() && snap.nakamoto_raw == 0)
      log.append(hour, -1, "warning", {{"message", "zero total points; Nakamoto undefined"}});
    for (const auto& id : out.attackers) {
      auto it = ledger.bridges.find(id);
      if (it == ledger.bridges.end()) continue;
      snap.attacker_points_raw += it->second.raw_success_points;
      snap.attacker_points_decayed += apply_decay(it->second, decay);
    }
    snap.attacker_reward_share = out.total_rewards > 0.0 ? out.attacker_rewards / out.total_rewards : 0.0;
    out.snapshots.push_back(snap);

    std::set<BridgeId> offline_before;
    for (const auto& [id, rec] : ledger.bridges)
      if (rec.status == BridgeStatus::offline) offline_before.insert(id);
    ledger = advance_time(std::move(ledger), 1.0, cfg.retention_hours);
    for (const auto& id : offline_before)
      if (ledger.at(id).status == BridgeStatus::archived)
        log.append(hour, -1, "archive", {{"bridge", id.str()}});
  }

  out.ledger = std::move(ledger);
  return out;
}

// ---------------------------------------------------------------------------
// Seed averaging

struct AveragedSeries {
  std::vector<double> hour;
  std::vector<double> gini_raw;
  std::vector<double> gini_decayed;
  std::vector<double> nakamoto_raw;
  std::vector<double> nakamoto_decayed;
  std::vector<double> attacker_reward_share;

  std::size_t size() const noexcept { return hour.size(); }
};

inline AveragedSeries average_series(std::span<const RunResult> runs) {
  AveragedSeries avg;
  if (runs.empty()) return avg;
  const std::size_t len = runs.front().snapshots.size();
  for (const auto& r : runs)
    if (r.snapshots.size() != len) throw LengthMismatch("runs of different durations");
  const auto m = static_cast<double>(runs.size());
  for (std::size_t t = 0; t < len; ++t) {
    double gr = 0, gd = 0, kr = 0, kd = 0, share = 0;
    for (const auto& r : runs) {
      const auto& s = r.snapshots[t];
      gr += s.gini_raw;
      gd += s.gini_decayed;
      kr += static_cast<double>(s.nakamoto_raw);
      kd += static_cast<double>(s.nakamoto_decayed);
      share += s.attacker_reward_share;
    }
    avg.hour.push_back(static_cast<double>(runs.front().snapshots[t].hour));
    avg.gini_raw.push_back(gr / m);
    avg.gini_decayed.push_back(gd / m);
    avg.nakamoto_raw.push_back(kr / m);
    avg.nakamoto_decayed.push_back(kd / m);
    avg.attacker_reward_share.push_back(share / m);
  }
  return avg;
}

inline std::vector<RunResult> run_replicates(const ScenarioConfig& cfg,
                                             std::span<const std::uint64_t> seeds,
                                             RunOptions options = {}) {
  std::vector<RunResult> runs;
  runs.reserve(seeds.size());
  for (auto seed : seeds) {
    auto c = cfg;
    c.seed = seed;
    runs.push_back(run_scenario(c, options));
  }
  return runs;
}

// ---------------------------------------------------------------------------
// Sensitivity sweep

struct SweepCell {
  std::size_t cell_index = 0;
  double lambda = 0.0;
  double time_window_hours = 0.0;
  std::uint64_t replicate_seed = 0;
  std::uint64_t run_seed = 0;
  RunResult result;
};

// Cartesian product lambda x window x seed. The run seed of each replicate
// is derived from (replicate seed, cell index), so cells never share a stream.
inline std::vector<SweepCell> run_sensitivity(const ScenarioConfig& base,
                                              std::span<const double> lambdas,
                                              std::span<const double> windows,
                                              std::span<const std::uint64_t> seeds,
                                              RunOptions options = {}) {
  if (lambdas.empty() || windows.empty() || seeds.empty())
    throw ConfigError("sensitivity grid needs at least one lambda, window and seed");
  std::vector<SweepCell> cells;
  std::size_t cell = 0;
  for (double lambda : lambdas) {
    for (double window : windows) {
      for (auto seed : seeds) {
        auto cfg = base;
        cfg.lambda = lambda;
        cfg.time_window_hours = window;
        cfg.seed = stream_seed(seed, cell);
        SweepCell c{cell, lambda, window, seed, cfg.seed, run_scenario(cfg, options)};
        cells.push_back(std::move(c));
      }
      ++cell;
    }
  }
  return cells;
}

// ---------------------------------------------------------------------------
// Attack analysis

struct AttackSummary {
  int attackers = 0;
  std::size_t seeds = 0;
  double attacker_points_raw = 0.0;      // seed mean of the coalition's summed raw points
  double attacker_points_decayed = 0.0;  // seed mean of the coalition's summed decayed points
  double decayed_to_raw_ratio = 0.0;     // ratio of the two means
  double reward_share = 0.0;             // seed mean of the final cumulative share
  double capture_frequency = 0.0;        // forged majorities / rounds, pooled over seeds
  double exact_capture_probability = 0.0;  // full population, configured quorum
};

inline std::vector<AttackSummary> run_attack(const ScenarioConfig& base,
                                             std::span<const int> attacker_counts,
                                             std::size_t num_seeds,
                                             RunOptions options = {.record_events = false}) {
  if (attacker_counts.empty() || num_seeds == 0)
    throw ConfigError("attack analysis needs attacker counts and at least one seed");
  const auto seeds = replicate_seeds(base.seed, num_seeds);
  std::vector<AttackSummary> rows;
  for (int count : attacker_counts) {
    if (count < 0 || count > base.population())
      throw ConfigError("attacker count " + std::to_string(count) + " exceeds population");
    auto cfg = base;
    AdversarySpec adv = base.adversary.value_or(AdversarySpec{});
    adv.count = count;
    cfg.adversary = adv;
    const auto runs = run_replicates(cfg, seeds, options);
    AttackSummary row;
    row.attackers = count;
    row.seeds = runs.size();
    std::size_t captures = 0, rounds = 0;
    for (const auto& r : runs) {
      row.attacker_points_raw += r.final_snapshot().attacker_points_raw;
      row.attacker_points_decayed += r.final_snapshot().attacker_points_decayed;
      row.reward_share += r.final_snapshot().attacker_reward_share;
      captures += r.attacker_captures;
      rounds += r.rounds.size();
    }
    const auto m = static_cast<double>(runs.size());
    row.attacker_points_raw /= m;
    row.attacker_points_decayed /= m;
    row.reward_share /= m;
    row.decayed_to_raw_ratio =
        row.attacker_points_raw > 0.0 ? row.attacker_points_decayed / row.attacker_points_raw : 0.0;
    row.capture_frequency = rounds ? static_cast<double>(captures) / static_cast<double>(rounds) : 0.0;
    const auto n = static_cast<std::size_t>(base.population());
    row.exact_capture_probability = quorum_majority_probability(
        n, quorum_size({base.total_reward, base.min_reward, n}), static_cast<std::size_t>(count));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pscrd::sim
