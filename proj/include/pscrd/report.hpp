#pragma once

// Run artifacts: snapshot CSV, run manifest and event log files.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pscrd/errors.hpp"
#include "pscrd/scenario.hpp"
#include "pscrd/simulator.hpp"

namespace pscrd::report {

inline constexpr const char* kToolVersion = "0.1.0";

inline constexpr const char* kCsvHeader =
    "hour,round_id,gini_raw,gini_decayed,nakamoto_raw,nakamoto_decayed,active_bridges,"
    "majority_size,attacker_points_raw,attacker_points_decayed,attacker_reward_share";

inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  // "-0.000000" and "0.000000" must not differ between otherwise equal runs
  if (std::string_view(buf) == "-0.000000") return "0.000000";
  return buf;
}

inline std::string format_csv(std::span<const sim::MetricsSnapshot> snapshots) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& s : snapshots) {
    out += std::to_string(s.hour) + ',' + std::to_string(s.round_id) + ',' + fixed6(s.gini_raw) +
           ',' + fixed6(s.gini_decayed) + ',' + std::to_string(s.nakamoto_raw) + ',' +
           std::to_string(s.nakamoto_decayed) + ',' + std::to_string(s.active_bridges) + ',' +
           std::to_string(s.majority_size) + ',' + fixed6(s.attacker_points_raw) + ',' +
           fixed6(s.attacker_points_decayed) + ',' + fixed6(s.attacker_reward_share) + '\n';
  }
  return out;
}

inline void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << contents;
  if (!out) throw IoError("write failed for " + path.string());
}

inline void emit_csv(std::span<const sim::MetricsSnapshot> snapshots,
                     const std::filesystem::path& path) {
  if (snapshots.empty()) throw IoError("refusing to write an empty snapshot series");
  write_file(path, format_csv(snapshots));
}

inline std::vector<sim::MetricsSnapshot> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ParseError("unexpected CSV header");
  std::vector<sim::MetricsSnapshot> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 11) throw ParseError("CSV line " + std::to_string(lineno) + ": expected 11 fields");
    try {
      sim::MetricsSnapshot s;
      s.hour = std::stoll(f[0]);
      s.round_id = std::stoll(f[1]);
      s.gini_raw = std::stod(f[2]);
      s.gini_decayed = std::stod(f[3]);
      s.nakamoto_raw = std::stoll(f[4]);
      s.nakamoto_decayed = std::stoll(f[5]);
      s.active_bridges = std::stoll(f[6]);
      s.majority_size = std::stoll(f[7]);
      s.attacker_points_raw = std::stod(f[8]);
      s.attacker_points_decayed = std::stod(f[9]);
      s.attacker_reward_share = std::stod(f[10]);
      rows.push_back(s);
    } catch (const std::exception&) {
      throw ParseError("CSV line " + std::to_string(lineno) + ": malformed number");
    }
  }
  return rows;
}

struct RunManifest {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string started_at;
  std::string finished_at;
  std::string tool_version = kToolVersion;
  std::string canonical_config;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["config_hash"] = config_hash;
    j["seed"] = seed;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    j["tool_version"] = tool_version;
    j["config"] = canonical_config;
    return j;
  }
};

inline std::string utc_timestamp() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline RunManifest make_manifest(const sim::ScenarioConfig& cfg, std::string started_at) {
  RunManifest m;
  m.config_hash = sim::config_hash(cfg);
  m.seed = cfg.seed;
  m.started_at = std::move(started_at);
  m.finished_at = utc_timestamp();
  m.canonical_config = sim::canonical_form(cfg);
  return m;
}

// out/<config-hash>/<seed>/
inline std::filesystem::path run_directory(const std::filesystem::path& out_root,
                                           const sim::ScenarioConfig& cfg) {
  return out_root / sim::config_hash(cfg) / std::to_string(cfg.seed);
}

}  // namespace pscrd::report
