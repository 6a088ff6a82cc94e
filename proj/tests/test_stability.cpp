#include <gtest/gtest.h>

#include <random>

#include "lcformation/scenarios.hpp"
#include "lcformation/stability.hpp"

using namespace lcf;

namespace {

void expect_poly(const Polynomial &got, const Polynomial &want) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t k = 0; k < got.size(); ++k) EXPECT_NEAR(got[k], want[k], 1e-12) << "k=" << k;
}

std::vector<PolarState> ring_states(const FormationSpec &spec, double alpha0, double speed_scale) {
  std::vector<PolarState> out;
  double a = alpha0;
  const double beta = spec.omega >= 0 ? kPi / 2 : 3 * kPi / 2;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    out.push_back({spec.radius[i], speed_scale * std::abs(spec.omega) * spec.radius[i], beta, wrap_angle(a)});
    a += spec.spacing[i];
  }
  return out;
}

}  // namespace

TEST(PolarResidual, CirclingEquilibria) {
  for (double w : {1.0, 0.4, -0.2, -1.5}) {
    const double R = 0.8;
    const PolarState s{R, std::abs(w * R), w > 0 ? kPi / 2 : wrap_angle(-kPi / 2), 0.3};
    const auto r = polar_residual(s, w, -w * (w - 1));
    EXPECT_NEAR(r.drho, 0.0, 1e-15);
    EXPECT_NEAR(r.dvbar, 0.0, 1e-15);
    ASSERT_TRUE(r.dbeta && r.dalpha);
    EXPECT_NEAR(*r.dbeta, 0.0, 1e-15);
    EXPECT_NEAR(*r.dalpha, w, 1e-15);
  }
}

TEST(PolarResidual, AtRestAngleRatesUndefined) {
  const auto r = polar_residual({1.0, 0.0, 0.0, 0.0}, 0.0, 0.0);
  EXPECT_FALSE(r.dbeta.has_value());
  EXPECT_EQ(r.drho, 0.0);
}

TEST(Classify, CaseIa) {
  const auto spec = example_config(2).spec;
  const auto label = classify_equilibrium(ring_states(spec, 0.2, 1.0), spec, 1e-9);
  EXPECT_EQ(label.equilibrium, EquilibriumCase::Ia);
  EXPECT_EQ(to_string(label.equilibrium), "Ia");
  auto wrong = ring_states(spec, 0.2, 1.1);
  EXPECT_EQ(classify_equilibrium(wrong, spec, 1e-9).equilibrium, EquilibriumCase::None);
}

TEST(Classify, CaseIbAndII) {
  const auto spec = example_config(3).spec;
  EXPECT_EQ(classify_equilibrium(ring_states(spec, 1.0, 0.0), spec, 1e-9).equilibrium, EquilibriumCase::Ib);
  std::vector<PolarState> all_at_target(6);
  EXPECT_EQ(classify_equilibrium(all_at_target, spec, 1e-9).equilibrium, EquilibriumCase::II);
  auto one = example_config(1).spec;
  EXPECT_EQ(classify_equilibrium(all_at_target, one, 1e-9).equilibrium, EquilibriumCase::II);
}

TEST(Classify, CaseIIIb) {
  auto spec = example_config(3).spec;
  auto states = ring_states(spec, 0.0, 0.0);
  states[2] = {};  // one agent parked at the target
  const auto label = classify_equilibrium(states, spec, 1e-9);
  EXPECT_EQ(label.equilibrium, EquilibriumCase::IIIb10);
  EXPECT_EQ(std::count(label.membership.begin(), label.membership.end(), Membership::V2), 1);
  states[4] = {};
  EXPECT_EQ(classify_equilibrium(states, spec, 1e-9).equilibrium, EquilibriumCase::IIIb2);
}

TEST(CharpolyIa, Examples) {
  expect_poly(single_agent_charpoly_Ia(1, 1, 1, 0), {1, 2, 3, 1});
  const auto half = single_agent_charpoly_Ia(0.5, 1, 1, 0);
  expect_poly(half, {1, 2, 2, 1});
  for (const auto &z : polynomial_roots(half)) EXPECT_LT(z.real(), 0.0);
  EXPECT_THROW(single_agent_charpoly_Ia(0.0, 1, 1, 0), std::invalid_argument);
}

TEST(CharpolyIa, MarginFormula) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> uni(-3, 3), pos(0.1, 4);
  for (int k = 0; k < 500; ++k) {
    const double w = uni(rng), mu = pos(rng), R = pos(rng), sigma = uni(rng);
    if (w == 0.0) continue;
    const auto c = single_agent_charpoly_Ia(w, mu, R, sigma);
    const double kk = mu * std::pow(R, sigma + 1);
    EXPECT_NEAR(cubic_hurwitz_margin(c), 2 * (2 * w - 1) * (2 * w - 1) + 2 + kk, 1e-9 * (1 + kk));
    EXPECT_GT(cubic_hurwitz_margin(c), 0.0);
  }
}

TEST(RootsIb, Examples) {
  auto r = single_agent_roots_Ib(1, 1, 0, 0);
  const std::complex<double> want[] = {{-1, 0}, {-0.5, std::sqrt(3.0) / 2}, {-0.5, -std::sqrt(3.0) / 2}};
  for (int k = 0; k < 3; ++k) EXPECT_LT(std::abs(r[k] - want[k]), 1e-15);
  auto flat = single_agent_roots_Ib(1, 1, 0, kPi / 2);
  EXPECT_NEAR(flat[0].real(), -1, 1e-15);
  EXPECT_NEAR(std::abs(flat[1]), 0, 1e-15);
  EXPECT_NEAR(flat[2].real(), -1, 1e-15);
  auto four = single_agent_roots_Ib(4, 1, 0, 0);
  EXPECT_LT(std::abs(four[1] - std::complex<double>(-0.5, std::sqrt(15.0) / 2)), 1e-14);
}

TEST(OriginCharpoly, ExamplesAndTwoRhpRoots) {
  expect_poly(origin_charpoly(1, 1, 1), {1, 2, 0, 0, 2});
  expect_poly(origin_charpoly(0, 1, 1), {1, 2, 0, -2, 1});
  for (double w = -2; w <= 2; w += 0.25) {
    for (double muR = 0.1; muR <= 5; muR += 0.35) {
      EXPECT_EQ(count_rhp_roots(polynomial_roots(origin_charpoly(w, muR, 1))), 2) << w << ' ' << muR;
    }
  }
}

TEST(OriginCharpoly, MatchesCartesianJacobian) {
  // linearize the Cartesian single-agent loop at the target for sigma = 0
  for (double w : {-1.0, 0.0, 0.5, 1.0}) {
    for (double muR : {0.5, 1.0, 2.0}) {
      const double E0 = muR - w * (w - 1);  // E at rho = 0 with sigma = 0
      Eigen::Matrix4d A;
      A << 0, 0, 1, 0, 0, 0, 0, 1, E0, -w, -1, -1, w, E0, 1, -1;
      const auto c = characteristic_polynomial(A);
      const auto want = origin_charpoly(w, muR, 1);
      for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(c[k], want[k], 1e-12);
    }
  }
}

TEST(Routh, Examples) {
  EXPECT_EQ(routh_sign_changes({1, 2, 3, 1}).rhp_count, 0);
  const auto z = routh_sign_changes({1, 2, 0, 0, 2});
  EXPECT_EQ(z.rhp_count, 2);
  EXPECT_TRUE(z.table.epsilon_pivot);
  EXPECT_EQ(routh_sign_changes({1, 1}).rhp_count, 0);
  EXPECT_EQ(routh_sign_changes({1, -1}).rhp_count, 1);
  EXPECT_THROW(routh_sign_changes({0, 1}), std::invalid_argument);
}

TEST(Routh, BoundaryFlag) {
  // (s^2 + 1)(s + 2): roots on the imaginary axis give an all-zero row
  const auto r = routh_sign_changes({1, 2, 1, 2});
  EXPECT_TRUE(r.table.boundary);
  EXPECT_EQ(r.rhp_count, 0);
}

TEST(Routh, AgreesWithRootOracle) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> root_re(-3, 3), root_im(0, 2);
  std::uniform_int_distribution<int> deg(1, 6);
  int compared = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    // build from random roots (conjugate pairs) so RHP counts vary
    const int n = deg(rng);
    std::vector<std::complex<double>> roots;
    while (static_cast<int>(roots.size()) < n) {
      const double re = root_re(rng);
      if (static_cast<int>(roots.size()) + 2 <= n && root_im(rng) > 1.0) {
        const double im = root_im(rng);
        roots.push_back({re, im});
        roots.push_back({re, -im});
      } else {
        roots.push_back({re, 0});
      }
    }
    std::vector<std::complex<double>> c{1.0};
    for (const auto &z : roots) {
      std::vector<std::complex<double>> next(c.size() + 1, 0.0);
      for (std::size_t k = 0; k < c.size(); ++k) {
        next[k] += c[k];
        next[k + 1] -= z * c[k];
      }
      c = next;
    }
    Polynomial p;
    for (const auto &x : c) p.push_back(x.real());
    const auto rr = routh_sign_changes(p);
    if (rr.table.boundary || rr.table.epsilon_pivot) continue;
    const bool near_axis = std::any_of(roots.begin(), roots.end(), [](const auto &z) { return std::abs(z.real()) < 1e-3; });
    if (near_axis) continue;
    EXPECT_EQ(rr.rhp_count, count_rhp_roots(polynomial_roots(p))) << "trial " << trial;
    ++compared;
  }
  EXPECT_GT(compared, 900);
}

TEST(CharacteristicPolynomial, MatchesKnownMatrix) {
  Eigen::Matrix3d A;
  A << 2, 0, 0, 0, 3, 4, 0, 4, 9;  // eigenvalues 2, 1, 11
  expect_poly(characteristic_polynomial(A), {1, -14, 35, -22});
}
