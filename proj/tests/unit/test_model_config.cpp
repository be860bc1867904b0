#include <gtest/gtest.h>

#include <sstream>

#include "levysup/model_config.hpp"

namespace {

using levysup::ConfigError;
using levysup::KeyValueConfig;

KeyValueConfig parse(const std::string& text) {
  std::istringstream in(text);
  return KeyValueConfig::parse(in, "test");
}

TEST(KeyValueConfig, SectionsAndComments) {
  const auto cfg = parse(
      "reps = 1000   # trailing\n"
      "; whole-line comment\n"
      "\n"
      "[model.mine]\n"
      "drift = 1.5\n"
      "z.family = exp\n"
      "z.rate = 0.5\n"
      "z.theta = 1\n");
  EXPECT_EQ(cfg.number("reps"), 1000.0);
  EXPECT_EQ(cfg.number("model.mine.drift"), 1.5);
  EXPECT_EQ(cfg.get("model.mine.z.family"), "exp");
  EXPECT_FALSE(cfg.get("missing").has_value());
  EXPECT_EQ(cfg.model_names(), (std::vector<std::string>{"mine"}));
}

TEST(KeyValueConfig, SectionsEquivalentToFlatKeys) {
  const auto a = parse("[model.x]\ndrift = 1\nz.family = exp\nz.rate = 0.5\nz.theta = 1\n");
  const auto b = parse("model.x.drift=1\nmodel.x.z.family=exp\nmodel.x.z.rate=0.5\nmodel.x.z.theta=1\n");
  EXPECT_EQ(a.entries(), b.entries());
}

TEST(KeyValueConfig, Errors) {
  EXPECT_THROW(parse("[open\n"), ConfigError);
  EXPECT_THROW(parse("novalue\n"), ConfigError);
  EXPECT_THROW(parse("= 3\n"), ConfigError);
  const auto cfg = parse("x = abc\ny = 1e400\nz = 2.5\n");
  EXPECT_THROW(cfg.number("x"), ConfigError);
  EXPECT_THROW(cfg.number("y"), ConfigError);
  EXPECT_THROW(cfg.number("w"), ConfigError);
  EXPECT_EQ(cfg.number_or("z"), 2.5);
  EXPECT_FALSE(cfg.number_or("w").has_value());
  EXPECT_THROW(KeyValueConfig::load("/nonexistent/levysup.cfg"), ConfigError);
}

TEST(ModelFromConfig, ReproducesModelA) {
  const auto cfg = parse(
      "[model.a]\ndrift = 1\nz.family = exp\nz.rate = 0.5\nz.theta = 1\n"
      "c.family = exp\nc.rate = 0.3\nc.theta = 2\n");
  const auto m = levysup::model_from_config(cfg, "a");
  const auto ref = *levysup::preset("A");
  EXPECT_EQ(m.name(), "a");
  EXPECT_NEAR(m.mean_drift(), ref.mean_drift(), 1e-15);
  for (double lam : {0.2, 1.0, 4.0}) EXPECT_NEAR(levysup::psi_dual(m, lam), levysup::psi_dual(ref, lam), 1e-14);
}

TEST(ModelFromConfig, MixCutoffAndDiffusion) {
  const auto cfg = parse(
      "[model.m]\ndrift = 2\na = 0.5\n"
      "z.family = mix\n"
      "z.0.family = exp\nz.0.rate = 0.5\nz.0.theta = 1\n"
      "z.1.family = atom\nz.1.location = 2\nz.1.mass = 0.25\n"
      "c.family = gamma\nc.alpha = 0.2\nc.beta = 1\nc.cutoff = 0.01\n");
  const auto m = levysup::model_from_config(cfg, "m");
  EXPECT_NEAR(m.z().mean(), 0.5 + 0.5, 1e-14);
  EXPECT_EQ(m.diffusion(), 0.5);
  ASSERT_TRUE(m.has_c());
  EXPECT_TRUE(m.c()->finite_activity());
  EXPECT_EQ(m.c()->tail(0.005), m.c()->tail(0.01));
}

TEST(ModelFromConfig, NoneAndMissingC) {
  const auto cfg = parse("[model.y]\ndrift = 1\nz.family = exp\nz.rate = 0.5\nz.theta = 1\nc.family = none\n");
  EXPECT_FALSE(levysup::model_from_config(cfg, "y").has_c());
}

TEST(ModelFromConfig, Errors) {
  EXPECT_THROW(levysup::model_from_config(parse("[model.q]\nz.family = exp\n"), "q"), ConfigError);
  EXPECT_THROW(levysup::model_from_config(parse("[model.q]\ndrift = 1\nz.family = weird\n"), "q"), ConfigError);
  EXPECT_THROW(levysup::model_from_config(parse("[model.q]\ndrift = 1\nz.family = mix\n"), "q"), ConfigError);
  EXPECT_THROW(
      levysup::model_from_config(parse("[model.q]\ndrift = 1\nz.family = exp\nz.rate = -1\nz.theta = 1\n"), "q"),
      ConfigError);
  EXPECT_THROW(levysup::model_from_config(parse("[model.q]\ndrift = 1\nz.family = exp\nz.rate = 1\n"), "q"),
               ConfigError);
}

TEST(Presets, NamesAndLookup) {
  for (const auto& name : levysup::preset_names()) EXPECT_TRUE(levysup::preset(name).has_value()) << name;
  EXPECT_TRUE(levysup::preset("gammac").has_value());
  EXPECT_FALSE(levysup::preset("Z").has_value());
  EXPECT_NEAR(levysup::preset("A")->mean_drift(), -0.35, 1e-15);
  EXPECT_NEAR(levysup::preset("C")->mean_drift(), 0.0, 1e-15);
  EXPECT_FALSE(levysup::preset("D")->has_c());
  EXPECT_EQ(levysup::preset("brownianY")->diffusion(), 1.0);
}

TEST(ResolveModel, ConfigBeforePresets) {
  const auto cfg = parse("[model.A]\ndrift = 3\nz.family = exp\nz.rate = 0.5\nz.theta = 1\n");
  EXPECT_EQ(levysup::resolve_model("A", &cfg).drift(), 3.0);
  EXPECT_EQ(levysup::resolve_model("A").drift(), 1.0);
  EXPECT_THROW(levysup::resolve_model("nope", &cfg), ConfigError);
}

}  // namespace
