#include <gtest/gtest.h>

#include "lcformation/formation.hpp"
#include "lcformation/scenarios.hpp"

using namespace lcf;

TEST(RingTopology, Neighbors) {
  RingTopology six(6), two(2);
  EXPECT_EQ(six.plus(1), 2u);
  EXPECT_EQ(six.plus(6), 1u);
  EXPECT_EQ(two.plus(2), 1u);
  EXPECT_EQ(six.minus(1), 6u);
  EXPECT_EQ(six.minus(3), 2u);
  EXPECT_EQ(two.minus(2), 1u);
}

TEST(RingTopology, Errors) {
  EXPECT_THROW(RingTopology(1), std::invalid_argument);
  RingTopology six(6);
  EXPECT_THROW(six.plus(0), std::out_of_range);
  EXPECT_THROW(six.minus(7), std::out_of_range);
}

TEST(RingTopology, PlusMinusInverse) {
  for (std::size_t n = 2; n <= 12; ++n) {
    RingTopology g(n);
    for (std::size_t i = 1; i <= n; ++i) {
      EXPECT_EQ(g.minus(g.plus(i)), i);
      EXPECT_EQ(g.plus(g.minus(i)), i);
    }
  }
}

TEST(Validate, Examples) {
  const double third = kTwoPi / 3;
  EXPECT_TRUE(validate({{third, third, third}, {1, 1, 1}, 0.5}).admissible);

  auto sum = validate({{kPi, kPi, kPi}, {1, 1, 1}, 0.0});
  ASSERT_FALSE(sum.admissible);
  ASSERT_EQ(sum.violations.size(), 1u);
  EXPECT_NE(sum.violations[0].find("sum(d)="), std::string::npos);

  auto neg = validate({{third, third, third}, {1, -1, 1}, 0.0});
  ASSERT_FALSE(neg.admissible);
  ASSERT_EQ(neg.violations.size(), 1u);
  EXPECT_EQ(neg.violations[0], "R_2<=0");
}

TEST(Validate, CollectsAllViolations) {
  auto rep = validate({{-1.0, 1.0}, {0.0}, std::numeric_limits<double>::infinity()});
  EXPECT_FALSE(rep.admissible);
  EXPECT_GE(rep.violations.size(), 4u);
  EXPECT_FALSE(validate({{kTwoPi}, {1.0}, 0.0}).admissible);
}

TEST(Validate, RandomSpacingAdmissible) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto d = random_spacing(2 + s % 11, s);
    EXPECT_TRUE(validate({d, std::vector<double>(d.size(), 1.0), 1.0}).admissible);
  }
}

TEST(AssignLabels, AngleOrder) {
  const std::vector<Vec2> pos{{0, 1}, {1, 0}, {-1, 0}};
  EXPECT_EQ(assign_labels(pos, {0, 0}, 1), (std::vector<std::size_t>{1, 0, 2}));
}

TEST(AssignLabels, SameRayNearerFirst) {
  EXPECT_EQ(assign_labels({{2, 0}, {1, 0}}, {0, 0}, 1), (std::vector<std::size_t>{1, 0}));
  // collinear points whose atan2 differs in the last bit
  EXPECT_EQ(assign_labels({{0.3, 0.7}, {0.1, 0.7 / 3.0}}, {0, 0}, 1),
            (std::vector<std::size_t>{1, 0}));
}

TEST(AssignLabels, CoincidentSeeded) {
  const std::vector<Vec2> pos{{1, 1}, {1, 1}, {1, 1}, {-1, 0}};
  const auto a = assign_labels(pos, {0, 0}, 77);
  EXPECT_EQ(a, assign_labels(pos, {0, 0}, 77));
  EXPECT_EQ(a.back(), 3u);
  bool differs = false;
  for (std::uint64_t s = 0; s < 20 && !differs; ++s) differs = assign_labels(pos, {0, 0}, s) != a;
  EXPECT_TRUE(differs);
}

TEST(AssignLabels, IsPermutationAndTargetRelative) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-3, 3);
  for (int t = 0; t < 200; ++t) {
    std::vector<Vec2> pos(7);
    for (auto &p : pos) p = {uni(rng), uni(rng)};
    const Vec2 target{uni(rng), uni(rng)};
    auto order = assign_labels(pos, target, 1);
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) ASSERT_EQ(sorted[i], i);
    for (std::size_t k = 1; k < order.size(); ++k) {
      ASSERT_LE(polar_angle(pos[order[k - 1]] - target), polar_angle(pos[order[k]] - target));
    }
  }
}

TEST(AssignLabels, AgentOnTargetThrows) {
  EXPECT_THROW(assign_labels({{1, 1}, {0, 0}}, {0, 0}, 1), std::invalid_argument);
}

TEST(Scenarios, RightTriangle) {
  const auto spec = right_triangle_formation();
  EXPECT_TRUE(validate(spec).admissible);
  const auto pts = right_triangle_points();
  const std::vector<Vec2> expected{{0.5, 1.0 / 3}, {-1, 4.0 / 3}, {-1, 1.0 / 3},
                                   {-1, -2.0 / 3}, {0.5, -2.0 / 3}, {2, -2.0 / 3}};
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_NEAR(pts[i].x, expected[i].x, 1e-15);
    EXPECT_NEAR(pts[i].y, expected[i].y, 1e-15);
  }
  EXPECT_NEAR(spec.radius[1], 5.0 / 3.0, 1e-15);
}
