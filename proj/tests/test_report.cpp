#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include "pscrd/report.hpp"
#include "pscrd/svg_chart.hpp"

using namespace pscrd;
namespace fs = std::filesystem;

namespace {

sim::ScenarioConfig baseline() {
  sim::ScenarioConfig c;
  c.seed = 2024;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("pscrd_report_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST(Csv, HeaderAndOneRowPerHour) {
  const auto run = sim::run_scenario(baseline());
  const auto text = report::format_csv(run.snapshots);
  EXPECT_EQ(count_of(text, "\n"), 151u);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "hour,round_id,gini_raw,gini_decayed,nakamoto_raw,nakamoto_decayed,active_bridges,"
            "majority_size,attacker_points_raw,attacker_points_decayed,attacker_reward_share");
}

TEST(Csv, RealsHaveSixDecimals) {
  const auto run = sim::run_scenario(baseline());
  std::istringstream in(report::format_csv(run.snapshots));
  std::string line;
  std::getline(in, line);
  const std::regex row(R"(\d+,\d+,\d+\.\d{6},\d+\.\d{6},\d+,\d+,\d+,\d+,\d+\.\d{6},\d+\.\d{6},\d+\.\d{6})");
  while (std::getline(in, line)) ASSERT_TRUE(std::regex_match(line, row)) << line;
}

TEST(Csv, RoundTripsWithinPrintedPrecision) {
  auto cfg = baseline();
  cfg.adversary = sim::AdversarySpec{26};
  const auto run = sim::run_scenario(cfg);
  const auto back = report::parse_csv(report::format_csv(run.snapshots));
  ASSERT_EQ(back.size(), run.snapshots.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    const auto& a = run.snapshots[i];
    const auto& b = back[i];
    ASSERT_EQ(a.hour, b.hour);
    ASSERT_EQ(a.round_id, b.round_id);
    ASSERT_EQ(a.nakamoto_raw, b.nakamoto_raw);
    ASSERT_EQ(a.nakamoto_decayed, b.nakamoto_decayed);
    ASSERT_EQ(a.active_bridges, b.active_bridges);
    ASSERT_EQ(a.majority_size, b.majority_size);
    ASSERT_NEAR(a.gini_raw, b.gini_raw, 5e-7);
    ASSERT_NEAR(a.gini_decayed, b.gini_decayed, 5e-7);
    ASSERT_NEAR(a.attacker_points_raw, b.attacker_points_raw, 5e-7);
    ASSERT_NEAR(a.attacker_points_decayed, b.attacker_points_decayed, 5e-7);
    ASSERT_NEAR(a.attacker_reward_share, b.attacker_reward_share, 5e-7);
  }
}

TEST(Csv, HonestRunHasZeroAttackerColumns) {
  const auto run = sim::run_scenario(baseline());
  std::istringstream in(report::format_csv(run.snapshots));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) ASSERT_TRUE(line.ends_with(",0.000000,0.000000,0.000000")) << line;
}

TEST(Csv, IdenticalRunsGiveIdenticalBytes) {
  TempDir tmp;
  report::emit_csv(sim::run_scenario(baseline()).snapshots, tmp.path / "a.csv");
  report::emit_csv(sim::run_scenario(baseline()).snapshots, tmp.path / "b.csv");
  EXPECT_EQ(slurp(tmp.path / "a.csv"), slurp(tmp.path / "b.csv"));
}

TEST(Csv, EmptySeriesRefused) {
  TempDir tmp;
  EXPECT_THROW(report::emit_csv({}, tmp.path / "x.csv"), IoError);
}

TEST(Csv, UnwritablePathRaisesIoError) {
  const auto run = sim::run_scenario(baseline());
  EXPECT_THROW(report::emit_csv(run.snapshots, "/proc/definitely/not/here.csv"), IoError);
}

TEST(Csv, MalformedInputRejected) {
  EXPECT_THROW(report::parse_csv("hour,oops\n"), ParseError);
  EXPECT_THROW(report::parse_csv(std::string(report::kCsvHeader) + "\n1,2,3\n"), ParseError);
}

TEST(Fixed6, NegativeZeroNormalized) {
  EXPECT_EQ(report::fixed6(-0.0), "0.000000");
  EXPECT_EQ(report::fixed6(-1e-9), "0.000000");
  EXPECT_EQ(report::fixed6(0.1234567), "0.123457");
}

TEST(Chart, EntryMarkersAtLaterGroupJoins) {
  TempDir tmp;
  const auto run = sim::run_scenario(baseline());
  chart::emit_chart(run.snapshots, chart::ChartKind::gini, run.join_hours, tmp.path / "g.svg");
  const auto svg = slurp(tmp.path / "g.svg");
  EXPECT_TRUE(svg.starts_with("<svg"));
  EXPECT_EQ(count_of(svg, "class=\"marker\""), 2u);
  EXPECT_EQ(count_of(svg, "class=\"series\""), 1u);
  EXPECT_NE(svg.find("Gini Index over Time"), std::string::npos);
  EXPECT_EQ(chart::entry_markers(run.join_hours), (std::vector<double>{40, 60}));
}

TEST(Chart, SingleGroupHasNoMarkers) {
  TempDir tmp;
  auto cfg = baseline();
  cfg.groups = {{30, 0}};
  const auto run = sim::run_scenario(cfg);
  chart::emit_chart(run.snapshots, chart::ChartKind::nakamoto, run.join_hours, tmp.path / "k.svg");
  const auto svg = slurp(tmp.path / "k.svg");
  EXPECT_EQ(count_of(svg, "class=\"marker\""), 0u);
  EXPECT_NE(svg.find("Nakamoto Coefficient over Time"), std::string::npos);
}

TEST(Chart, OverlayLabelsEachSeries) {
  const std::vector<chart::Series> series{{"lambda=0.01", {0, 1}, {0.1, 0.2}}, {"lambda=0.1", {0, 1}, {0.3, 0.1}}};
  const std::vector<double> joins{0, 40};
  const auto svg = chart::render_svg(series, chart::entry_markers(joins), "t", "y");
  EXPECT_EQ(count_of(svg, "class=\"series\""), 2u);
  EXPECT_NE(svg.find("lambda=0.01"), std::string::npos);
  EXPECT_NE(svg.find("lambda=0.1<"), std::string::npos);
}

TEST(ConfigHash, StableAndSeedIndependent) {
  auto a = baseline();
  auto b = baseline();
  b.seed = 99;
  EXPECT_EQ(sim::config_hash(a), sim::config_hash(b));
  EXPECT_EQ(sim::config_hash(a).size(), 16u);
  b.lambda = 0.06;
  EXPECT_NE(sim::config_hash(a), sim::config_hash(b));
  b = baseline();
  b.groups[2].join_hour = 61;
  EXPECT_NE(sim::config_hash(a), sim::config_hash(b));
}

TEST(ConfigHash, FrozenValueForDefaults) {
  // FNV-1a 64 of the canonical text, computed independently
  const sim::ScenarioConfig d;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : sim::canonical_form(d)) h = (h ^ ch) * 0x100000001b3ULL;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  EXPECT_EQ(sim::config_hash(d), buf);
  EXPECT_NE(sim::canonical_form(d).find("lambda=0.050000000000000003\n"), std::string::npos);
}

TEST(Manifest, FieldsAndRunDirectory) {
  const auto cfg = baseline();
  const auto m = report::make_manifest(cfg, "2026-01-01T00:00:00Z");
  const auto j = m.to_json();
  EXPECT_EQ(j["config_hash"], sim::config_hash(cfg));
  EXPECT_EQ(j["seed"], 2024u);
  EXPECT_EQ(j["started_at"], "2026-01-01T00:00:00Z");
  EXPECT_EQ(j["tool_version"], report::kToolVersion);
  EXPECT_TRUE(std::regex_match(j["finished_at"].get<std::string>(),
                               std::regex(R"(\d{4}-\d\d-\d\dT\d\d:\d\d:\d\dZ)")));
  EXPECT_EQ(report::run_directory("out", cfg), fs::path("out") / sim::config_hash(cfg) / "2024");
}

TEST(EventLog, OneJsonObjectPerLine) {
  const auto run = sim::run_scenario(baseline());
  std::istringstream in(run.events.serialize());
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    ASSERT_TRUE(j.contains("hour"));
    ASSERT_TRUE(j.contains("round"));
    ASSERT_TRUE(j.contains("kind"));
    ++n;
  }
  EXPECT_EQ(n, run.events.size());
  EXPECT_TRUE(run.events.serialize().starts_with(R"({"hour":0,"round":-1,"kind":"admit","bridge":"b000")"));
}
