#include "fedstlf/app/config.hpp"

#include <gtest/gtest.h>

#include "fedstlf/error.hpp"

namespace fedstlf::app {
namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

TEST(Config, ScenarioPresets) {
  const auto c = parse_config_text("scenario: 1\n");
  EXPECT_EQ(c.fed.subset_size, 5u);
  EXPECT_EQ(c.fed.local_epochs, 1u);
  EXPECT_EQ(c.fed.rounds, 20u);
  EXPECT_EQ(parse_config_text("scenario: 2\n").fed.subset_size, 20u);
  EXPECT_EQ(parse_config_text("scenario: 3\n").fed.local_epochs, 5u);
  const auto four = parse_config_text("scenario: 4\n");
  EXPECT_EQ(four.fed.subset_size, 20u);
  EXPECT_EQ(four.fed.local_epochs, 5u);
  EXPECT_NE(error_of("scenario: 5\n").find("scenario"), std::string::npos);
}

TEST(Config, Defaults) {
  const auto c = parse_config_text("{}\n");
  EXPECT_FALSE(c.scenario.has_value());
  EXPECT_EQ(c.fed.look_back, 12u);
  EXPECT_EQ(c.fed.look_ahead, 1u);
  EXPECT_EQ(c.train_frac, 0.9);
  EXPECT_EQ(c.n_participants, 180u);
  EXPECT_EQ(c.n_holdout, 20u);
  EXPECT_TRUE(std::holds_alternative<SyntheticSource>(c.source));
  EXPECT_EQ(c.netload.direction_multiplier, 2);
  EXPECT_EQ(c.personalization.epochs, 5u);
}

TEST(Config, ExplicitFieldsOverridePreset) {
  const auto c = parse_config_text(
      "scenario: 2\nsubset_size: 7\noptimizer: sgd\nlayer_widths: [1, 8, 8]\n"
      "data:\n  csv_dir: /tmp/x\ntopology:\n  default_hops: 2\n  hops:\n    a: 4\n");
  EXPECT_EQ(c.fed.subset_size, 7u);
  EXPECT_EQ(c.fed.optimizer, nn::OptimizerKind::sgd);
  EXPECT_EQ(c.fed.layer_widths, (std::vector<std::size_t>{1, 8, 8}));
  ASSERT_TRUE(std::holds_alternative<CsvSource>(c.source));
  EXPECT_EQ(std::get<CsvSource>(c.source).dir, "/tmp/x");
  EXPECT_EQ(c.topology.default_hops, 2);
  EXPECT_EQ(c.topology.hops.at("a"), 4);
}

TEST(Config, RoundsZeroNamesKey) {
  const auto msg = error_of("rounds: 0\n");
  EXPECT_NE(msg.find("rounds"), std::string::npos) << msg;
}

TEST(Config, BothSourcesRejected) {
  const auto msg = error_of("data:\n  csv_dir: /tmp\n  synthetic:\n    clients: 3\n");
  EXPECT_NE(msg.find("exactly one source"), std::string::npos) << msg;
  EXPECT_NE(error_of("data: {}\n").find("exactly one source"), std::string::npos);
}

TEST(Config, UnknownKeyAndTypeErrorsCarryPath) {
  EXPECT_NE(error_of("netload:\n  modl_size_kb: 2\n").find("netload.modl_size_kb"), std::string::npos);
  EXPECT_NE(error_of("learning_rate: fast\n").find("learning_rate"), std::string::npos);
  EXPECT_NE(error_of("optimizer: rmsprop\n").find("optimizer"), std::string::npos);
  EXPECT_NE(error_of("netload:\n  direction_multiplier: 3\n").find("direction_multiplier"),
            std::string::npos);
  EXPECT_NE(error_of("layer_widths: [2, 4]\n").find("layer_widths"), std::string::npos);
  EXPECT_NE(error_of("train_frac: 1.5\n").find("train_frac"), std::string::npos);
}

TEST(Config, MissingFile) {
  EXPECT_THROW(parse_config("/nonexistent/fedstlf.yaml"), ConfigError);
}

}  // namespace
}  // namespace fedstlf::app
