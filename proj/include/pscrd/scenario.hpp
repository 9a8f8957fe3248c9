#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "pscrd/errors.hpp"
#include "pscrd/protocol.hpp"

namespace pscrd::sim {

struct GroupSpec {
  int size = 0;
  int join_hour = 0;

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

enum class AgeInitMode { from_join_time, uniform_random };

// Coalition members all submit one identical forged payload whenever they
// are selected; honest members submit the true payload.
enum class AttackStrategy { colluding_equivocation };

// Which admitted bridges the coalition occupies.
enum class AttackerPlacement { random, earliest, latest };

struct AdversarySpec {
  int count = 0;
  AttackStrategy strategy = AttackStrategy::colluding_equivocation;
  AttackerPlacement placement = AttackerPlacement::random;

  friend bool operator==(const AdversarySpec&, const AdversarySpec&) = default;
};

// Scheduled offline/rejoin of one bridge, addressed by admission index.
struct ChurnEvent {
  int bridge = 0;
  int offline_hour = 0;
  std::optional<int> rejoin_hour;

  friend bool operator==(const ChurnEvent&, const ChurnEvent&) = default;
};

struct ScenarioConfig {
  std::vector<GroupSpec> groups{{20, 0}, {20, 40}, {10, 60}};
  int duration_hours = 150;
  int rounds_per_hour = 1;
  double lambda = 0.05;
  double time_window_hours = 5.0;
  double fee = 1.0;
  double initial_points_mean = 5.0;
  AgeInitMode age_init_mode = AgeInitMode::from_join_time;
  double total_reward = 20.0;
  double min_reward = 1.0;
  std::optional<AdversarySpec> adversary;
  double retention_hours = kDefaultRetentionHours;
  std::uint64_t seed = 0;
  std::vector<ChurnEvent> churn;

  int population() const {
    int n = 0;
    for (const auto& g : groups) n += g.size;
    return n;
  }

  DecayParams decay() const { return {lambda, time_window_hours}; }
};

inline const char* to_string(AgeInitMode m) {
  return m == AgeInitMode::from_join_time ? "from_join_time" : "uniform_random";
}
inline const char* to_string(AttackStrategy) { return "colluding_equivocation"; }
inline const char* to_string(AttackerPlacement p) {
  switch (p) {
    case AttackerPlacement::random: return "random";
    case AttackerPlacement::earliest: return "earliest";
    case AttackerPlacement::latest: return "latest";
  }
  return "?";
}

// Throws ConfigError naming the offending field.
inline void validate(const ScenarioConfig& c) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (c.groups.empty()) fail("groups: at least one group is required");
  if (c.duration_hours <= 0) fail("duration_hours must be positive");
  if (c.rounds_per_hour <= 0) fail("rounds_per_hour must be positive");
  for (std::size_t i = 0; i < c.groups.size(); ++i) {
    const auto& g = c.groups[i];
    const auto where = "groups[" + std::to_string(i) + "]";
    if (g.size <= 0) fail(where + ".size must be positive");
    if (g.join_hour < 0 || g.join_hour >= c.duration_hours)
      fail(where + ".join_hour must lie in [0, duration_hours)");
  }
  if (!(c.lambda > 0.0 && c.lambda < 1.0)) fail("lambda must lie in the open interval (0,1)");
  if (!(c.time_window_hours >= 0.0)) fail("time_window_hours must be >= 0");
  if (!(c.fee > 0.0)) fail("fee must be positive");
  if (!(c.initial_points_mean >= 0.0)) fail("initial_points_mean must be >= 0");
  if (!(c.min_reward > 0.0)) fail("quorum.min_reward must be positive");
  if (c.total_reward < c.min_reward) fail("quorum.total_reward must be >= quorum.min_reward");
  if (!(c.retention_hours > 0.0)) fail("retention_hours must be positive");
  if (c.adversary) {
    if (c.adversary->count < 0 || c.adversary->count > c.population())
      fail("adversary.count must lie in [0, population]");
  }
  for (std::size_t i = 0; i < c.churn.size(); ++i) {
    const auto& e = c.churn[i];
    const auto where = "churn[" + std::to_string(i) + "]";
    if (e.bridge < 0 || e.bridge >= c.population()) fail(where + ".bridge out of range");
    if (e.offline_hour < 0 || e.offline_hour >= c.duration_hours)
      fail(where + ".offline_hour must lie in [0, duration_hours)");
    if (e.rejoin_hour && *e.rejoin_hour <= e.offline_hour)
      fail(where + ".rejoin_hour must come after offline_hour");
  }
}

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Canonical text of every semantically meaningful field except the seed,
// which addresses a replicate rather than an experiment.
inline std::string canonical_form(const ScenarioConfig& c) {
  std::string s;
  auto kv = [&s](const std::string& k, const std::string& v) { s += k + "=" + v + "\n"; };
  for (std::size_t i = 0; i < c.groups.size(); ++i) {
    kv("groups." + std::to_string(i) + ".size", std::to_string(c.groups[i].size));
    kv("groups." + std::to_string(i) + ".join_hour", std::to_string(c.groups[i].join_hour));
  }
  kv("duration_hours", std::to_string(c.duration_hours));
  kv("rounds_per_hour", std::to_string(c.rounds_per_hour));
  kv("lambda", format_real(c.lambda));
  kv("time_window_hours", format_real(c.time_window_hours));
  kv("fee", format_real(c.fee));
  kv("initial_points_mean", format_real(c.initial_points_mean));
  kv("age_init_mode", to_string(c.age_init_mode));
  kv("quorum.total_reward", format_real(c.total_reward));
  kv("quorum.min_reward", format_real(c.min_reward));
  if (c.adversary) {
    kv("adversary.count", std::to_string(c.adversary->count));
    kv("adversary.strategy", to_string(c.adversary->strategy));
    kv("adversary.placement", to_string(c.adversary->placement));
  }
  kv("retention_hours", format_real(c.retention_hours));
  for (std::size_t i = 0; i < c.churn.size(); ++i) {
    const auto& e = c.churn[i];
    const auto p = "churn." + std::to_string(i) + ".";
    kv(p + "bridge", std::to_string(e.bridge));
    kv(p + "offline_hour", std::to_string(e.offline_hour));
    kv(p + "rejoin_hour", e.rejoin_hour ? std::to_string(*e.rejoin_hour) : "none");
  }
  return s;
}

// FNV-1a 64 over the canonical form, as 16 lowercase hex digits.
inline std::string config_hash(const ScenarioConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_form(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace pscrd::sim
