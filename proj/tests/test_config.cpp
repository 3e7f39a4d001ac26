#include <algorithm>
#include <string>

#include <gtest/gtest.h>

#include "nnecon/harness/config.hpp"

namespace nnecon::harness {
namespace {

constexpr const char* kS1 =
    "model=subscription\nD0=200\nalpha=10\nbeta=0.5\nrho=0.5\ndelta=0\np_r=1\nq_max=10\np_t=0";

constexpr const char* kA1 =
    "model=advertisement\nD0_0=0\nK=10\nMB=1000\ndist=uniform\nv_max=10\n"
    "alpha=10\nbeta=0.5\np_r=1\n";

ValidationError validation(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ValidationError& e) {
    return e;
  }
  ADD_FAILURE() << "expected ValidationError for:\n" << text;
  return ValidationError("", "");
}

int parse_error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  ADD_FAILURE() << "expected ParseError for:\n" << text;
  return -1;
}

TEST(ParseConfig, ReferenceSubscription) {
  const ScenarioConfig cfg = parse_config(kS1);
  EXPECT_EQ(cfg.model, ModelKind::Subscription);
  EXPECT_EQ(cfg.subscription.D0, 200.0);
  EXPECT_EQ(cfg.subscription.alpha, 10.0);
  EXPECT_EQ(cfg.subscription.beta, 0.5);
  EXPECT_EQ(cfg.subscription.rho, 0.5);
  EXPECT_EQ(cfg.subscription.p_r, 1.0);
  EXPECT_EQ(cfg.subscription.q_max, 10.0);
  EXPECT_FALSE(cfg.sweep);
  EXPECT_FALSE(cfg.bargain);
  EXPECT_TRUE(cfg.output.empty());
}

TEST(ParseConfig, DefaultsCommentsAndWhitespace) {
  const ScenarioConfig cfg = parse_config(
      "# scenario\n model = subscription \n\nD0=200 # trailing\nalpha=10\nbeta=0.5\nrho=2\np_r=1\r\n");
  EXPECT_EQ(cfg.subscription.q_max, 10.0);
  EXPECT_EQ(cfg.subscription.delta, 0.0);
  EXPECT_EQ(cfg.subscription.p_t, 0.0);
  EXPECT_EQ(cfg.subscription.rho, 2.0);
}

TEST(ParseConfig, Advertisement) {
  const ScenarioConfig cfg = parse_config(kA1);
  EXPECT_EQ(cfg.model, ModelKind::Advertisement);
  EXPECT_EQ(cfg.ad.K, 10.0);
  EXPECT_EQ(cfg.ad.MB, 1000.0);
  EXPECT_TRUE(cfg.ad.dist.is_uniform());
  const ScenarioConfig n = parse_config(
      "model=ad\nK=10\nMB=1000\ndist=normal\nmu=5\nsigma=2\nalpha=10\nbeta=0.5\np_r=1\n");
  EXPECT_FALSE(n.ad.dist.is_uniform());
}

TEST(ParseConfig, MissingAndOutOfRangeValues) {
  const std::string no_alpha = "model=subscription\nD0=200\nbeta=0.5\nrho=0.5\np_r=1\n";
  ValidationError e = validation(no_alpha);
  EXPECT_EQ(e.key(), "alpha");
  EXPECT_EQ(e.reason(), "required");

  e = validation("model=subscription\nD0=200\nalpha=10\nbeta=0.5\nrho=-1\np_r=1\n");
  EXPECT_EQ(e.key(), "rho");
  EXPECT_EQ(e.reason(), "must be > 0");

  e = validation("model=subscription\nD0=200\nalpha=10\nbeta=0.5\nrho=1\np_r=1\ndelta=2\n");
  EXPECT_EQ(e.key(), "delta");
  EXPECT_EQ(e.reason(), "must lie in [0, 1]");

  e = validation("model=subscription\nD0=200\nalpha=10\nbeta=7\nrho=1\np_r=1\n");
  EXPECT_EQ(e.key(), "beta");

  EXPECT_EQ(validation("D0=200\n").key(), "model");
  EXPECT_EQ(validation("model=cable\n").key(), "model");
  EXPECT_EQ(validation(std::string(kA1) + "rho=1\n").key(), "rho");
  EXPECT_EQ(validation(std::string(kS1) + "\nK=10\n").key(), "K");
  EXPECT_EQ(validation("model=ad\nK=10\nMB=1000\nalpha=10\nbeta=0.5\np_r=1\n").key(), "dist");
  EXPECT_EQ(validation("model=ad\nK=10\nMB=1000\ndist=normal\nmu=5\nalpha=10\nbeta=0.5\np_r=1\n").key(),
            "sigma");
}

TEST(ParseConfig, LineErrors) {
  EXPECT_EQ(parse_error_line("model=subscription\nD0=200\nbogus=1\n"), 3);
  EXPECT_EQ(parse_error_line("model=subscription\nD0=200\nD0=100\n"), 3);
  EXPECT_EQ(parse_error_line("model=subscription\n# ok\nalpha\n"), 3);
  EXPECT_EQ(parse_error_line("model=subscription\nD0=abc\nalpha=10\nbeta=0.5\nrho=1\np_r=1\n"), 2);
}

TEST(ParseConfig, SweepAndSeries) {
  const ScenarioConfig cfg =
      parse_config(std::string(kS1) + "\nsweep=p_t,0,5,11\nseries=rho,0.5,1.5\n");
  ASSERT_TRUE(cfg.sweep);
  EXPECT_EQ(cfg.sweep->var, "p_t");
  EXPECT_EQ(cfg.sweep->steps, 11);
  EXPECT_DOUBLE_EQ(cfg.sweep->value(10), 5.0);
  EXPECT_DOUBLE_EQ(cfg.sweep->value(3), 1.5);
  ASSERT_TRUE(cfg.series);
  EXPECT_EQ(cfg.series->var, "rho");
  EXPECT_EQ(cfg.series->values, (std::vector<double>{0.5, 1.5}));

  EXPECT_EQ(validation(std::string(kS1) + "\nsweep=p_t,0,5,1\n").key(), "sweep");
  EXPECT_EQ(validation(std::string(kS1) + "\nsweep=p_t,0,5,2.5\n").key(), "sweep");
  EXPECT_EQ(validation(std::string(kS1) + "\nsweep=K,0,5,3\n").key(), "sweep");
  EXPECT_EQ(validation(std::string(kS1) + "\nsweep=p_t,0,5\n").key(), "sweep");
  EXPECT_EQ(validation(std::string(kS1) + "\nsweep=p_t,0,5,3\nseries=p_t,1\n").key(), "series");
  EXPECT_EQ(validation(std::string(kS1) + "\nsweep=gamma,0,1,3\n").key(), "sweep");
}

TEST(ParseConfig, Bargaining) {
  const ScenarioConfig cfg = parse_config(std::string(kS1) + "\nbargain=post\ngamma=0.25\n");
  ASSERT_TRUE(cfg.bargain);
  EXPECT_EQ(cfg.bargain->timing, BargainTiming::Post);
  EXPECT_EQ(cfg.bargain->gamma, 0.25);
  EXPECT_EQ(parse_config(std::string(kS1) + "\nbargain=pre\n").bargain->gamma, 0.5);

  EXPECT_EQ(validation(std::string(kS1) + "\nbargain=during\n").key(), "bargain");
  EXPECT_EQ(validation(std::string(kS1) + "\ngamma=0.3\n").key(), "gamma");
  EXPECT_EQ(validation(std::string(kS1) + "\nbargain=pre\ngamma=1.5\n").key(), "gamma");
  EXPECT_EQ(validation(std::string(kS1) + "\nbargain=pre\nsweep=p_t,0,1,3\n").key(), "sweep");
  EXPECT_EQ(validation("model=subscription\nD0=200\nalpha=10\nbeta=0.5\nrho=1\np_r=1\ndelta=0.2\n"
                       "bargain=pre\n")
                .key(),
            "delta");
}

TEST(WithValue, ReplacesOneParameter) {
  const ScenarioConfig cfg = parse_config(kA1);
  EXPECT_EQ(with_value(cfg, "K", 30.0).ad.K, 30.0);
  EXPECT_EQ(with_value(cfg, "K", 30.0).ad.MB, 1000.0);
  EXPECT_EQ(with_value(cfg, "v_max", 20.0).ad.dist.upper_support(), 20.0);
  EXPECT_THROW(with_value(cfg, "rho", 1.0), ValidationError);
  EXPECT_THROW(with_value(cfg, "gamma", 0.3), ValidationError);
}

TEST(SweepableKeys, PerModel) {
  const auto& sub = sweepable_keys(ModelKind::Subscription);
  EXPECT_NE(std::find(sub.begin(), sub.end(), "rho"), sub.end());
  EXPECT_EQ(std::find(sub.begin(), sub.end(), "K"), sub.end());
  const auto& ad = sweepable_keys(ModelKind::Advertisement);
  EXPECT_NE(std::find(ad.begin(), ad.end(), "K"), ad.end());
}

}  // namespace
}  // namespace nnecon::harness
