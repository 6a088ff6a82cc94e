#include <gtest/gtest.h>

#include <random>

#include "lcformation/controller.hpp"

using namespace lcf;

namespace {

RelativeObservation random_observation(std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  RelativeObservation obs;
  obs.rel_position = {2 * uni(rng), 2 * uni(rng)};
  obs.rel_velocity = {uni(rng), uni(rng)};
  obs.target_accel = {uni(rng), uni(rng)};
  obs.spacing_ahead = 1.0 + 0.5 * uni(rng);
  obs.spacing_behind = 1.0 + 0.5 * uni(rng);
  obs.spacing_ahead_rate = uni(rng);
  obs.spacing_behind_rate = uni(rng);
  obs.desired_ahead = 1.0 + 0.5 * uni(rng);
  obs.desired_behind = 1.0 + 0.5 * uni(rng);
  return obs;
}

RelativeObservation at_equilibrium(double R, double omega) {
  RelativeObservation obs;
  obs.rel_position = {R, 0};
  obs.rel_velocity = {0, omega * R};
  obs.spacing_ahead = obs.desired_ahead = 1.1;
  obs.spacing_behind = obs.desired_behind = 0.7;
  return obs;
}

}  // namespace

TEST(AngularDistance, Examples) {
  EXPECT_NEAR(angular_distance(0, kPi / 2), kPi / 2, 1e-15);
  EXPECT_NEAR(angular_distance(3 * kPi / 2, kPi / 4), 3 * kPi / 4, 1e-15);
  EXPECT_EQ(angular_distance(1.234, 1.234), 0.0);
}

TEST(AlphaRate, Examples) {
  EXPECT_DOUBLE_EQ(alpha_rate({1, 0}, {0, 1}, 1e-9), 1.0);
  EXPECT_DOUBLE_EQ(alpha_rate({2, 0}, {0, 1}, 1e-9), 0.5);
  EXPECT_DOUBLE_EQ(alpha_rate({1, 0}, {5, 0}, 1e-9), 0.0);
  EXPECT_TRUE(std::isfinite(alpha_rate({0, 0}, {1, 1}, 1e-9)));
}

TEST(GainE, Examples) {
  ControllerParams p;
  EXPECT_DOUBLE_EQ(gain_E(1, 1, 0, p), 0.0);
  for (double w : {-1.3, -0.2, 0.5, 1.0, 2.0}) EXPECT_DOUBLE_EQ(gain_E(0.7, 0.7, w, p), -w * (w - 1));
  EXPECT_DOUBLE_EQ(gain_E(2, 1, 1, p), -0.5);
  EXPECT_TRUE(std::isfinite(gain_E(0.0, 1, 1, p)));
}

TEST(LayoutF, Examples) {
  ControllerParams p;
  RelativeObservation obs;
  obs.spacing_ahead = obs.desired_ahead = 1.0;
  obs.spacing_behind = obs.desired_behind = 1.0;
  EXPECT_DOUBLE_EQ(layout_f(obs, p), 0.0);
  obs.spacing_ahead = obs.desired_ahead = 0.4;
  obs.spacing_behind = obs.desired_behind = 2.3;
  p.lambda1 = 3.0;
  EXPECT_NEAR(layout_f(obs, p), 0.0, 1e-15);
  p.lambda1 = 1.0;
  obs.desired_ahead = obs.desired_behind = kPi;
  obs.spacing_ahead = kPi + 0.2;
  obs.spacing_behind = kPi - 0.2;
  EXPECT_NEAR(layout_f(obs, p), 0.2, 1e-15);
}

TEST(ControlInput, RestEquilibriumIsZero) {
  ControllerParams p;
  auto obs = at_equilibrium(1.5, 0.0);
  const Vec2 u = control_input(obs, 1.5, 0.0, p);
  EXPECT_NEAR(u.x, 0.0, 1e-15);
  EXPECT_NEAR(u.y, 0.0, 1e-15);
}

TEST(ControlInput, CirclingEquilibriumIsCentripetal) {
  ControllerParams p;
  for (double w : {1.0, -0.2, 0.5, 2.0}) {
    const double R = 1.3;
    const Vec2 u = control_input(at_equilibrium(R, w), R, w, p);
    EXPECT_NEAR(u.x, -w * w * R, 1e-14);
    EXPECT_NEAR(u.y, 0.0, 1e-14);
  }
}

TEST(ControlInput, FeedforwardAdditive) {
  std::mt19937_64 rng(9);
  ControllerParams p;
  for (int k = 0; k < 200; ++k) {
    auto obs = random_observation(rng);
    obs.target_accel = {0, 0};
    const Vec2 base = control_input(obs, 1.0, 0.3, p);
    obs.target_accel = {7, -3};
    const Vec2 shifted = control_input(obs, 1.0, 0.3, p);
    EXPECT_NEAR(shifted.x - base.x, 7.0, 1e-12);
    EXPECT_NEAR(shifted.y - base.y, -3.0, 1e-12);
  }
}

TEST(ControlInputLocal, MatchesRotatedGlobal) {
  std::mt19937_64 rng(21);
  ControllerParams p;
  for (int k = 0; k < 500; ++k) {
    const auto obs = random_observation(rng);
    const double frame = polar_angle(obs.rel_position);
    const Vec2 g = rotate_into_frame(control_input(obs, 0.9, -0.7, p), frame);
    const Vec2 l = control_input_local(observation_in_frame(obs, frame), 0.9, -0.7, p);
    EXPECT_NEAR(g.x, l.x, 1e-12);
    EXPECT_NEAR(g.y, l.y, 1e-12);
  }
}

TEST(ControlInputLocal, IdentityFrameOnAxis) {
  ControllerParams p;
  std::mt19937_64 rng(4);
  auto obs = random_observation(rng);
  obs.rel_position = {1.7, 0.0};
  const Vec2 g = control_input(obs, 1.0, 0.4, p);
  const Vec2 l = control_input_local(obs, 1.0, 0.4, p);
  EXPECT_NEAR(g.x, l.x, 1e-14);
  EXPECT_NEAR(g.y, l.y, 1e-14);
}

TEST(ControlInputLocal, CirclingEquilibrium) {
  ControllerParams p;
  const double R = 0.6, w = 1.0;
  const Vec2 u = control_input_local(at_equilibrium(R, w), R, w, p);
  EXPECT_NEAR(u.x, -w * w * R, 1e-15);
  EXPECT_NEAR(u.y, 0.0, 1e-15);
}

TEST(ControllerParams, Validate) {
  ControllerParams p;
  EXPECT_NO_THROW(p.validate(1.0));
  p.lambda1 = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.mu = -1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.eps_rho = 0.1;
  EXPECT_THROW(p.validate(1.0), std::invalid_argument);
}
