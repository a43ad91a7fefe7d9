#include <string>

#include <gtest/gtest.h>

#include "risprop/config.hpp"
#include "risprop/errors.hpp"

using namespace risprop;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "t.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, PowerConversions) {
  EXPECT_DOUBLE_EQ(dbm_to_watts(30.0), 1.0);
  EXPECT_NEAR(dbm_to_watts(-90.0), 1e-12, 1e-27);
  EXPECT_NEAR(watts_to_dbm(1e-3), 0.0, 1e-12);
}

TEST(Config, DefaultsAreValidAndRoundTrip) {
  const ExperimentConfig c;
  EXPECT_NO_THROW(c.validate());
  const std::string text = serialize_config(c);
  const ExperimentConfig back = parse_config(text);
  EXPECT_EQ(serialize_config(back), text);
  EXPECT_EQ(config_hash(back), config_hash(c));
  EXPECT_DOUBLE_EQ(c.resolved_d_max(), 1000.0);
}

TEST(Config, HashIgnoresExecutionSettings) {
  ExperimentConfig a, b;
  b.threads = 4;
  b.output_dir = "elsewhere";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.seed = 2;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Config, EmptyObjectGivesDefaults) {
  EXPECT_EQ(config_hash(parse_config("{}")), config_hash(ExperimentConfig{}));
}

TEST(Config, PartialOverride) {
  const ExperimentConfig c = parse_config(R"({"seed": 9, "channel": {"N": 64, "phase": {"mode": "quantized", "bits": 3}}})");
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.channel.N, 64);
  EXPECT_EQ(c.phase.mode, PhaseMode::quantized);
  EXPECT_EQ(c.phase.bits, 3);
  EXPECT_DOUBLE_EQ(c.channel.alpha, 3.0);
  EXPECT_NE(config_hash(c), config_hash(ExperimentConfig{}));
}

TEST(Config, UnknownKeysAreRejectedWithPath) {
  EXPECT_NE(error_of(R"({"topology": {"lamda_R": 1e-5}})").find("$.topology: unknown key \"lamda_R\""),
            std::string::npos);
  EXPECT_NE(error_of(R"({"sead": 1})").find("unknown key"), std::string::npos);
}

TEST(Config, BadEnumListsAlternatives) {
  const std::string e = error_of(R"({"outage": {"laplace_model": "exact"}})");
  EXPECT_NE(e.find("closed_form"), std::string::npos);
  EXPECT_NE(e.find("quadrature"), std::string::npos);
}

TEST(Config, ParseErrorsCarryLineAndColumn) {
  const std::string e = error_of("{\n  \"seed\": 1,\n  \"trials\": ,\n}");
  EXPECT_NE(e.find("t.json"), std::string::npos);
  EXPECT_NE(e.find("line 3"), std::string::npos);
}

TEST(Config, TypeErrorsAreConfigErrors) {
  EXPECT_NE(error_of(R"({"trials": "many"})").find("trials"), std::string::npos);
}

TEST(Config, SemanticValidation) {
  EXPECT_THROW(parse_config(R"({"trials": 0})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"outage": {"series_order": 61}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"sweeps": {"lambda_U": [0.1, 0.01]}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"channel": {"alpha": 1.5}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"serving": {"d_ik": 100, "d_ij": 10, "d_jk": 20}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"topology": {"window": {"shape": "disk", "radius": -1}}})"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/cfg.json"), ConfigError);
}

TEST(Config, ShippedDefaultMatchesBuiltIn) {
  const ExperimentConfig c = load_config(std::string(RISPROP_SOURCE_DIR) + "/config/default.json");
  EXPECT_EQ(config_hash(c), config_hash(ExperimentConfig{}));
}

TEST(Config, ModuleViews) {
  const ExperimentConfig c;
  const OutageParams o = outage_params(c);
  EXPECT_NEAR(o.P, dbm_to_watts(-5.0), 1e-18);
  EXPECT_NEAR(o.sigma2, 1e-12, 1e-27);
  EXPECT_DOUBLE_EQ(o.laplace.d_max, 1000.0);
  EXPECT_NEAR(o.fit.shape, 6.18463976834431829, 1e-10);
  const ScenarioConfig s = scenario_config(c);
  EXPECT_EQ(s.seed, c.seed);
  EXPECT_EQ(s.topology.seed, c.seed);
}
