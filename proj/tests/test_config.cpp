#include <gtest/gtest.h>

#include "lcformation/config.hpp"
#include "lcformation/scenarios.hpp"

using namespace lcf;

namespace {

const char *kMinimal = R"(
[formation]
n = 4
R = 1.5
omega = 0.5
)";

}  // namespace

TEST(ParseConfig, Defaults) {
  const auto cfg = sim_config_from(parse_config(kMinimal));
  ASSERT_EQ(cfg.spec.size(), 4u);
  for (double d : cfg.spec.spacing) EXPECT_DOUBLE_EQ(d, kTwoPi / 4);
  for (double r : cfg.spec.radius) EXPECT_DOUBLE_EQ(r, 1.5);
  EXPECT_EQ(cfg.params.lambda1, 1.0);
  EXPECT_EQ(cfg.params.sigma, -1.0);
  EXPECT_EQ(cfg.dt, 1e-3);
  EXPECT_EQ(cfg.t_end, 60.0);
  EXPECT_EQ(cfg.seed, 1u);
  EXPECT_EQ(cfg.log_every, 1u);
  EXPECT_EQ(target_kind(cfg.target), "static");
  EXPECT_TRUE(std::holds_alternative<RandomAnnulusInit>(cfg.init));
}

TEST(ParseConfig, FullDocument) {
  const auto cfg = sim_config_from(parse_config(R"(
# comment line
[formation]
d = [1.0, 2.0,
     3.2831853071795862]   # wraps across lines
R = [0.5, 1, 2]
omega = -0.2

[controller]
lambda1 = 2
lambda2 = 0.5
mu = 3
sigma = 0
eps_rho = 1e-8

[target]
kind = "circular"
center = [1, 2]
radius = 3
rate = 0.25
phase = 0.1

[sim]
dt = 0.01
t_end = 2
seed = 42
log_every = 10
init = "explicit"
positions = [1, 0, 0, 1, -1, 0]
velocities = [0, 0, 0, 0, 0, 0]
)"));
  EXPECT_EQ(cfg.spec.size(), 3u);
  EXPECT_EQ(cfg.spec.radius[2], 2.0);
  EXPECT_EQ(cfg.params.mu, 3.0);
  EXPECT_EQ(cfg.params.eps_rho, 1e-8);
  EXPECT_EQ(target_kind(cfg.target), "circular");
  EXPECT_EQ(std::get<CircularTarget>(cfg.target).center.y, 2.0);
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(std::get<ExplicitInit>(cfg.init).agents[1].p.y, 1.0);
}

TEST(ParseConfig, Errors) {
  EXPECT_THROW(sim_config_from(parse_config("[formation]\nn = 3\nd = [1, 1, 1]\n")), ConfigError);
  EXPECT_THROW(sim_config_from(parse_config("[formation]\nn = 3\nbogus = 1\n")), ConfigError);
  EXPECT_THROW(sim_config_from(parse_config("[extra]\nx = 1\n")), ConfigError);
  EXPECT_THROW(parse_config("[formation]\nn = 3\nn = 4\n"), ConfigError);
  EXPECT_THROW(parse_config("[formation]\nn = abc\n"), ConfigError);
  EXPECT_THROW(parse_config("[formation\n"), ConfigError);
  EXPECT_THROW(sim_config_from(parse_config("[formation]\nn = 3\nR = [1, -1, 1]\n")), ConfigError);
  EXPECT_THROW(sim_config_from(parse_config(std::string(kMinimal) + "[sim]\ndt = 0\n")), ConfigError);
  EXPECT_THROW(sim_config_from(parse_config(std::string(kMinimal) + "[target]\nkind = \"warp\"\n")), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/path.cfg"), ConfigError);
}

TEST(BundledConfigs, MatchBuiltInExamples) {
  for (int ex : {1, 2, 3}) {
    const auto file = load_config(std::string(LCF_CONFIG_DIR) + "/example" + std::to_string(ex) + ".cfg");
    const auto ref = example_config(ex);
    ASSERT_EQ(file.spec.size(), ref.spec.size());
    for (std::size_t i = 0; i < ref.spec.size(); ++i) {
      EXPECT_NEAR(file.spec.spacing[i], ref.spec.spacing[i], 1e-15);
      EXPECT_NEAR(file.spec.radius[i], ref.spec.radius[i], 1e-15);
    }
    EXPECT_EQ(file.spec.omega, ref.spec.omega);
    EXPECT_EQ(file.dt, ref.dt);
    EXPECT_EQ(file.t_end, ref.t_end);
    EXPECT_EQ(target_kind(file.target), target_kind(ref.target));
    EXPECT_EQ(target_state(file.target, 7.0).position.x, target_state(ref.target, 7.0).position.x);
    EXPECT_EQ(file.params.sigma, -1.0);
  }
}
