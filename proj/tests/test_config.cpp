#include <gtest/gtest.h>

#include <string>

#include "pscrd/config.hpp"

using namespace pscrd;
using pscrd::config::parse_config;
using pscrd::config::parse_config_text;

namespace {

std::string message_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, BaselineFile) {
  const auto c = parse_config(PSCRD_SOURCE_DIR "/configs/baseline.toml");
  EXPECT_EQ(c.seed, 2024u);
  ASSERT_EQ(c.groups.size(), 3u);
  EXPECT_EQ(c.groups[0], (sim::GroupSpec{20, 0}));
  EXPECT_EQ(c.groups[1], (sim::GroupSpec{20, 40}));
  EXPECT_EQ(c.groups[2], (sim::GroupSpec{10, 60}));
  EXPECT_EQ(c.population(), 50);
  EXPECT_EQ(c.duration_hours, 150);
  EXPECT_EQ(c.lambda, 0.05);
  EXPECT_EQ(c.time_window_hours, 5.0);
  EXPECT_EQ(c.total_reward, 20.0);
  EXPECT_EQ(c.min_reward, 1.0);
  EXPECT_EQ(c.age_init_mode, sim::AgeInitMode::from_join_time);
  EXPECT_FALSE(c.adversary);
}

TEST(Config, ShippedConfigsParse) {
  const auto ages = parse_config(PSCRD_SOURCE_DIR "/configs/uniform_ages.toml");
  EXPECT_EQ(ages.age_init_mode, sim::AgeInitMode::uniform_random);
  const auto attack = parse_config(PSCRD_SOURCE_DIR "/configs/attack_26.toml");
  ASSERT_TRUE(attack.adversary);
  EXPECT_EQ(attack.adversary->count, 26);
  EXPECT_EQ(attack.adversary->placement, sim::AttackerPlacement::random);
  const auto churn = parse_config(PSCRD_SOURCE_DIR "/configs/churn.toml");
  ASSERT_EQ(churn.churn.size(), 2u);
  EXPECT_EQ(churn.churn[1], (sim::ChurnEvent{7, 20, 100}));
  EXPECT_EQ(churn.retention_hours, 24.0);
}

TEST(Config, AbsentKeysKeepDefaults) {
  const auto c = parse_config_text("seed = 3\n");
  const sim::ScenarioConfig d;
  EXPECT_EQ(c.seed, 3u);
  EXPECT_EQ(c.groups, d.groups);
  EXPECT_EQ(c.lambda, d.lambda);
  EXPECT_EQ(c.retention_hours, 8760.0);
}

TEST(Config, LambdaOutsideOpenIntervalNamesTheField) {
  EXPECT_THROW(parse_config_text("lambda = 1.5\n"), ValidationError);
  EXPECT_NE(message_of("lambda = 1.5\n").find("lambda"), std::string::npos);
  EXPECT_THROW(parse_config_text("lambda = 0\n"), ValidationError);
}

TEST(Config, EmptyFileIsAParseError) {
  EXPECT_THROW(parse_config_text(""), ParseError);
  EXPECT_THROW(parse_config_text("   \n# only a comment\n"), ParseError);
}

TEST(Config, UnknownKeysAndTablesRejected) {
  EXPECT_THROW(parse_config_text("lamda = 0.1\n"), ValidationError);
  EXPECT_THROW(parse_config_text("[quorom]\ntotal_reward = 3\n"), ValidationError);
  EXPECT_THROW(parse_config_text("[[groups]]\nsize = 3\njoin_hour = 0\ncolor = \"red\"\n"), ValidationError);
}

TEST(Config, SyntaxErrorsReportLine) {
  const auto msg = message_of("seed = 1\nlambda = = 2\n");
  EXPECT_NE(msg.find("ParseError"), std::string::npos);
  EXPECT_NE(msg.find("2"), std::string::npos);
  EXPECT_THROW(parse_config_text("name = \"unterminated\n"), ParseError);
}

TEST(Config, TypeMismatchRejected) {
  EXPECT_THROW(parse_config_text("duration_hours = \"long\"\n"), ValidationError);
  EXPECT_THROW(parse_config_text("age_init_mode = \"sometimes\"\n"), ValidationError);
}

TEST(Config, GroupsNeedBothFields) {
  EXPECT_THROW(parse_config_text("[[groups]]\nsize = 3\n"), ValidationError);
}

TEST(Config, GroupJoiningAfterTheRunRejected) {
  EXPECT_THROW(parse_config_text("duration_hours = 10\n[[groups]]\nsize = 3\njoin_hour = 10\n"),
               ValidationError);
}

TEST(Config, AdversaryAboveTheFoldRejected) {
  EXPECT_THROW(parse_config_text("[adversary]\ncount = 51\n"), ValidationError);
  EXPECT_THROW(parse_config_text("[adversary]\ncount = 3\nstrategy = \"bribery\"\n"), ValidationError);
}

TEST(Config, MissingFileIsAnIoError) {
  EXPECT_THROW(parse_config("/nonexistent/none.toml"), IoError);
}
