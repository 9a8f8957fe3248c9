#pragma once

// Multi-bridge coordination protocol: quorum sizing and selection, response
// grouping, strict-majority consensus, success-point accounting, age decay,
// proportional reward distribution and bridge lifecycle.
//
// State lives in an explicit Ledger value. Operations that change it take the
// ledger by value and return the updated one, so a round pipeline reads
//   ledger = award_success_points(std::move(ledger), majority);

#include <algorithm>
#include <bit>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pscrd/errors.hpp"
#include "pscrd/rng.hpp"

namespace pscrd {

inline constexpr double kDefaultRetentionHours = 8760.0;

class BridgeId {
public:
  BridgeId() = default;
  explicit BridgeId(std::string value) : value_(std::move(value)) {}

  const std::string& str() const noexcept { return value_; }

  friend auto operator<=>(const BridgeId&, const BridgeId&) = default;

private:
  std::string value_;
};

enum class BridgeStatus { active, offline, archived };

inline const char* to_string(BridgeStatus s) {
  switch (s) {
    case BridgeStatus::active: return "active";
    case BridgeStatus::offline: return "offline";
    case BridgeStatus::archived: return "archived";
  }
  return "?";
}

struct Behavior {
  std::optional<int> coalition;  // set for adversarial bridges

  bool adversarial() const noexcept { return coalition.has_value(); }

  static Behavior honest() { return {}; }
  static Behavior adversary(int coalition_id) { return Behavior{coalition_id}; }

  friend bool operator==(const Behavior&, const Behavior&) = default;
};

struct BridgeRecord {
  BridgeId id;
  double join_time = 0.0;
  double age = 0.0;
  double raw_success_points = 0.0;
  double cumulative_reward = 0.0;
  BridgeStatus status = BridgeStatus::active;
  double offline_since = 0.0;  // meaningful while status != active
  Behavior behavior;

  bool is_active() const noexcept { return status == BridgeStatus::active; }
};

struct Ledger {
  double now = 0.0;
  std::map<BridgeId, BridgeRecord> bridges;

  const BridgeRecord& at(const BridgeId& id) const {
    auto it = bridges.find(id);
    if (it == bridges.end()) throw UnknownBridge(id.str());
    return it->second;
  }
  BridgeRecord& at(const BridgeId& id) {
    auto it = bridges.find(id);
    if (it == bridges.end()) throw UnknownBridge(id.str());
    return it->second;
  }
};

// ---------------------------------------------------------------------------
// Quorum sizing and selection

struct QuorumParams {
  double total_reward = 20.0;
  double min_reward = 1.0;
  std::size_t population_size = 1;
};

// floor(total / min), capped at the population. The quotient is nudged by a
// relative 1e-12 before flooring so 0.3/0.1 counts as 3 seats, not 2.
inline std::size_t quorum_size(const QuorumParams& p) {
  if (!(p.min_reward > 0.0) || !std::isfinite(p.total_reward) || !std::isfinite(p.min_reward))
    throw InvalidParams("min_reward must be a positive finite number");
  if (p.population_size == 0) throw InvalidParams("population_size must be positive");
  if (p.total_reward < p.min_reward)
    throw InvalidParams("total_reward < min_reward leaves the quorum empty");
  const double ratio = p.total_reward / p.min_reward;
  const auto seats = static_cast<std::size_t>(std::floor(ratio * (1.0 + 1e-12)));
  return std::clamp<std::size_t>(seats, 1, p.population_size);
}

inline double selection_probability(std::size_t q, std::size_t n) {
  if (q == 0 || n == 0) throw InvalidParams("quorum and population must be positive");
  if (q > n) throw InvalidParams("quorum larger than population");
  return static_cast<double>(q) / static_cast<double>(n);
}

// Partial Fisher-Yates over the lexicographically sorted candidates. Returns
// the chosen ids in sorted order.
inline std::vector<BridgeId> select_quorum(std::vector<BridgeId> candidates, std::size_t q,
                                           Rng& rng) {
  std::sort(candidates.begin(), candidates.end());
  if (std::adjacent_find(candidates.begin(), candidates.end()) != candidates.end())
    throw InvalidParams("duplicate bridge id among candidates");
  if (q > candidates.size())
    throw InsufficientPopulation("quorum of " + std::to_string(q) + " from " +
                                 std::to_string(candidates.size()) + " active bridges");
  const std::size_t n = candidates.size();
  for (std::size_t i = 0; i < q; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(n - i));
    std::swap(candidates[i], candidates[j]);
  }
  candidates.resize(q);
  std::sort(candidates.begin(), candidates.end());
  return candidates;
}

inline std::vector<BridgeId> active_bridges(const Ledger& ledger) {
  std::vector<BridgeId> out;
  for (const auto& [id, rec] : ledger.bridges)
    if (rec.is_active()) out.push_back(id);
  return out;
}

inline std::vector<BridgeId> select_quorum(const Ledger& ledger, std::size_t q, Rng& rng) {
  return select_quorum(active_bridges(ledger), q, rng);
}

// ---------------------------------------------------------------------------
// Responses and consensus

struct ResponsePayload {
  std::string sender;
  std::string receiver;
  double amount = 0.0;

  // Bit-level comparison on amount: 0.0 and -0.0 are different payloads.
  friend bool operator==(const ResponsePayload& a, const ResponsePayload& b) noexcept {
    return a.sender == b.sender && a.receiver == b.receiver &&
           std::bit_cast<std::uint64_t>(a.amount) == std::bit_cast<std::uint64_t>(b.amount);
  }
  friend std::strong_ordering operator<=>(const ResponsePayload& a,
                                          const ResponsePayload& b) noexcept {
    if (auto c = a.sender <=> b.sender; c != 0) return c;
    if (auto c = a.receiver <=> b.receiver; c != 0) return c;
    return std::bit_cast<std::uint64_t>(a.amount) <=> std::bit_cast<std::uint64_t>(b.amount);
  }
};

struct TransferRound {
  std::uint64_t round_id = 0;
  double fee = 1.0;
  std::vector<BridgeId> quorum;
  std::map<BridgeId, ResponsePayload> responses;
  std::optional<std::vector<BridgeId>> majority;
};

using ResponseGroups = std::map<ResponsePayload, std::vector<BridgeId>>;

inline ResponseGroups group_responses(const TransferRound& round) {
  ResponseGroups groups;
  for (const auto& [bridge, payload] : round.responses) {
    if (std::find(round.quorum.begin(), round.quorum.end(), bridge) == round.quorum.end())
      throw ForeignResponse(bridge.str() + " is not in the quorum of round " +
                            std::to_string(round.round_id));
    groups[payload].push_back(bridge);
  }
  return groups;
}

// The group holding strictly more than q/2 seats, with its payload. Silent
// quorum members count against consensus.
inline std::optional<std::pair<ResponsePayload, std::vector<BridgeId>>> find_majority(
    const ResponseGroups& groups, std::size_t q) {
  for (const auto& [payload, members] : groups)
    if (2 * members.size() > q) return std::pair{payload, members};
  return std::nullopt;
}

inline std::optional<std::vector<BridgeId>> majority_group(const ResponseGroups& groups,
                                                           std::size_t q) {
  if (auto m = find_majority(groups, q)) return std::move(m->second);
  return std::nullopt;
}

inline Ledger award_success_points(Ledger ledger, std::span<const BridgeId> majority) {
  for (const auto& id : majority) ledger.at(id);  // validate before mutating
  for (const auto& id : majority) ledger.at(id).raw_success_points += 1.0;
  return ledger;
}

// ---------------------------------------------------------------------------
// Decay and rewards

struct DecayParams {
  double lambda = 0.05;
  double time_window_hours = 5.0;

  void validate() const {
    if (!(lambda > 0.0 && lambda < 1.0))
      throw InvalidParams("lambda must lie in the open interval (0,1)");
    if (!(time_window_hours >= 0.0)) throw InvalidParams("time window must be >= 0");
  }
};

inline double decay_points(double raw_points, double age, const DecayParams& decay) {
  decay.validate();
  if (age > decay.time_window_hours) return raw_points / (1.0 + decay.lambda * age);
  return raw_points;
}

inline double apply_decay(const BridgeRecord& record, const DecayParams& decay) {
  return decay_points(record.raw_success_points, record.age, decay);
}

using RewardMap = std::map<BridgeId, double>;

// Proportional split of the fee by weight. An all-zero majority splits equally.
inline RewardMap distribute_rewards(std::span<const BridgeId> majority, double fee,
                                    const std::map<BridgeId, double>& weights) {
  if (majority.empty()) throw EmptyMajority("no majority to reward");
  if (!(fee > 0.0) || !std::isfinite(fee)) throw InvalidParams("fee must be positive");
  double total = 0.0;
  for (const auto& id : majority) {
    auto it = weights.find(id);
    if (it == weights.end()) throw UnknownBridge("no weight for " + id.str());
    if (!(it->second >= 0.0)) throw InvalidParams("negative weight for " + id.str());
    total += it->second;
  }
  RewardMap rewards;
  const double equal_share = fee / static_cast<double>(majority.size());
  for (const auto& id : majority)
    rewards[id] = total > 0.0 ? weights.at(id) / total * fee : equal_share;
  return rewards;
}

inline Ledger credit_rewards(Ledger ledger, const RewardMap& rewards) {
  for (const auto& [id, _] : rewards) ledger.at(id);
  for (const auto& [id, amount] : rewards) ledger.at(id).cumulative_reward += amount;
  return ledger;
}

// ---------------------------------------------------------------------------
// Lifecycle

inline Ledger admit(Ledger ledger, BridgeRecord record) {
  if (record.raw_success_points < 0.0 || record.age < 0.0)
    throw InvalidParams("negative points or age for " + record.id.str());
  auto id = record.id;
  if (!ledger.bridges.emplace(id, std::move(record)).second)
    throw InvalidParams("bridge already registered: " + id.str());
  return ledger;
}

// Age keeps running while a bridge is offline; archived bridges are frozen.
inline Ledger advance_time(Ledger ledger, double hours,
                           double retention_hours = kDefaultRetentionHours) {
  if (!(hours > 0.0)) throw InvalidParams("advance_time needs hours > 0");
  ledger.now += hours;
  for (auto& [id, rec] : ledger.bridges) {
    if (rec.status == BridgeStatus::archived) continue;
    rec.age += hours;
    if (rec.status == BridgeStatus::offline && ledger.now - rec.offline_since > retention_hours)
      rec.status = BridgeStatus::archived;
  }
  return ledger;
}

inline Ledger take_offline(Ledger ledger, const BridgeId& id, double current_time) {
  auto& rec = ledger.at(id);
  if (!rec.is_active()) throw InvalidParams(id.str() + " is not active");
  rec.status = BridgeStatus::offline;
  rec.offline_since = current_time;
  return ledger;
}

inline Ledger rejoin(Ledger ledger, const BridgeId& id, double current_time,
                     double retention_hours = kDefaultRetentionHours) {
  auto& rec = ledger.at(id);
  if (rec.status == BridgeStatus::archived ||
      (rec.status == BridgeStatus::offline && current_time - rec.offline_since > retention_hours))
    throw ArchivedBridge(id.str() + " history was archived");
  if (rec.status == BridgeStatus::active) throw BridgeNotOffline(id.str() + " is already active");
  rec.status = BridgeStatus::active;
  return ledger;
}

}  // namespace pscrd
