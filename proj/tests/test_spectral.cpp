#include <gtest/gtest.h>

#include <random>

#include "lcformation/matrix_exponential.hpp"
#include "lcformation/scenarios.hpp"
#include "lcformation/spectral.hpp"

using namespace lcf;

namespace {

std::vector<double> equal(std::size_t n) { return std::vector<double>(n, kTwoPi / n); }

}  // namespace

// The assembled matrix has zero column sums and right null vector d; its transpose carries the
// zero row sums (and annihilates the ones vector).
TEST(Laplacian, NullVectorsAndSums) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto d = random_spacing(2 + s % 11, s);
    const auto L = build_laplacian(d).matrix;
    const Eigen::Map<const Eigen::VectorXd> dv(d.data(), static_cast<Eigen::Index>(d.size()));
    EXPECT_LT(L.colwise().sum().cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((L * dv).cwiseAbs().maxCoeff(), 1e-12);
    const Eigen::MatrixXd Lt = L.transpose();
    EXPECT_LT(Lt.rowwise().sum().cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((dv.transpose() * Lt).cwiseAbs().maxCoeff(), 1e-12);
    // D^-1 L D = L^T
    const Eigen::MatrixXd D = dv.asDiagonal();
    EXPECT_LT((D.inverse() * L * D - Lt).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Laplacian, TwoAgentsAccumulate) {
  const auto L = build_laplacian({1.0, kTwoPi - 1.0}).matrix;
  EXPECT_NEAR(L(0, 0), 2.0 * (kTwoPi - 1.0) / kTwoPi, 1e-15);
  EXPECT_NEAR(L(1, 1), 2.0 / kTwoPi, 1e-15);
  EXPECT_NEAR(L(0, 1), -2.0 / kTwoPi, 1e-15);
  EXPECT_NEAR(L(1, 0), -2.0 * (kTwoPi - 1.0) / kTwoPi, 1e-15);
}

TEST(Laplacian, Errors) {
  EXPECT_THROW(build_laplacian({kTwoPi}), std::invalid_argument);
  EXPECT_THROW(build_laplacian({-1.0, kTwoPi + 1.0}), std::invalid_argument);
}

TEST(LaplacianSpectrum, CirculantExamples) {
  const auto four = check_laplacian_spectrum(build_laplacian(equal(4)));
  ASSERT_EQ(four.eigenvalues.size(), 4u);
  const double expect4[] = {0, 1, 1, 2};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(four.eigenvalues[k], expect4[k], 1e-12);
  EXPECT_TRUE(four.passed());

  const auto three = check_laplacian_spectrum(build_laplacian(equal(3)));
  const double expect3[] = {0, 1.5, 1.5};
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(three.eigenvalues[k], expect3[k], 1e-12);
  EXPECT_FALSE(three.two_present);
  EXPECT_FALSE(three.two_expected);
  EXPECT_TRUE(three.passed());
}

TEST(LaplacianSpectrum, RandomSixAgents) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    EXPECT_TRUE(check_laplacian_spectrum(build_laplacian(random_spacing(6, 900 + s))).passed());
  }
}

TEST(Phi, BlockAssembly) {
  const auto d = equal(2);
  const auto L = build_laplacian(d).matrix;
  const auto phi = build_phi(d, 1.0, 1.0, false);
  EXPECT_TRUE(phi.topLeftCorner(2, 2).isZero());
  EXPECT_TRUE(phi.topRightCorner(2, 2).isIdentity());
  EXPECT_TRUE(phi.bottomLeftCorner(2, 2).isApprox(-L));
  EXPECT_TRUE(phi.bottomRightCorner(2, 2).isApprox(-L - Eigen::MatrixXd::Identity(2, 2)));
  EXPECT_THROW(build_phi(d, 0.0, 1.0, false), std::invalid_argument);
}

TEST(Phi, ClosedFormExamples) {
  auto z0 = phi_eigenvalues_closed_form({0.0}, 2.5, 0.3);
  EXPECT_LT(multiset_distance(z0, {0.0, -1.0}), 1e-15);
  auto z1 = phi_eigenvalues_closed_form({1.0}, 1.0, 1.0);
  EXPECT_LT(multiset_distance(z1, {-1.0, -1.0}), 1e-15);
  auto z2 = phi_eigenvalues_closed_form({2.0}, 1.0, 1.0);
  EXPECT_LT(multiset_distance(z2, {-1.0, -2.0}), 1e-15);
}

TEST(Phi, SpectralReportPassesForGains) {
  for (double l1 : {0.3, 1.0, 4.0}) {
    for (double l2 : {0.2, 1.0, 3.0}) {
      const auto r = spectral_report(random_spacing(7, 3), l1, l2);
      EXPECT_TRUE(r.passed()) << l1 << ' ' << l2;
      EXPECT_LT(r.closed_form_mismatch, 1e-8);
    }
  }
}

TEST(Consensus, WeightsAreNormalizedSpacing) {
  const auto d = random_spacing(5, 8);
  const auto p = consensus_weights(build_laplacian(d));
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(p[i], d[i] / kTwoPi, 1e-12);
}

TEST(Consensus, LimitExamples) {
  const auto d = equal(3);
  auto at = consensus_limit(d, {0, 0, 0}, d);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(at.spacing[i], d[i], 1e-15);
    EXPECT_EQ(at.rate[i], 0.0);
  }
  auto lim = consensus_limit({kPi, kPi / 2, kPi / 2}, {0, 0, 0}, d);
  for (double x : lim.spacing) EXPECT_NEAR(x, kTwoPi / 3, 1e-15);
  EXPECT_THROW(consensus_limit({1, 1, 1}, {0, 0, 0}, d), std::invalid_argument);
  EXPECT_THROW(consensus_limit(d, {0.1, 0, 0}, d), std::invalid_argument);
}

TEST(LinearSubsystem, StationaryAtLimit) {
  const auto d = random_spacing(6, 1);
  const auto s = simulate_linear_subsystem(d, std::vector<double>(6, 0.0), d, 1, 1, 5.0, 1e-2);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(s.states.back()[static_cast<Eigen::Index>(i)], d[i], 1e-13);
}

TEST(LinearSubsystem, ExpmPredictsLimit) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> noise(0, 0.1);
  const auto d = equal(6);
  std::vector<double> a(6), r(6);
  for (int i = 0; i < 6; ++i) {
    a[i] = noise(rng);
    r[i] = noise(rng);
  }
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / 6, mr = std::accumulate(r.begin(), r.end(), 0.0) / 6;
  for (int i = 0; i < 6; ++i) {
    a[i] = d[i] + a[i] - ma;
    r[i] -= mr;
  }
  const auto lim = consensus_limit(a, r, d);
  Eigen::VectorXd x0(12);
  for (int i = 0; i < 6; ++i) {
    x0[i] = a[i];
    x0[6 + i] = r[i];
  }
  const Eigen::VectorXd x = matrix_exponential(build_phi(d, 1, 1, false) * 50.0) * x0;
  for (int i = 0; i < 6; ++i) {
    EXPECT_NEAR(x[i], lim.spacing[i], 1e-6);
    EXPECT_NEAR(x[6 + i], 0.0, 1e-6);
  }
}

TEST(MatrixExponential, KnownCases) {
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(3, 3);
  EXPECT_TRUE(matrix_exponential(Z).isIdentity(1e-15));
  Eigen::MatrixXd R(2, 2);
  R << 0, -2.0, 2.0, 0;  // rotation generator
  const auto E = matrix_exponential(R);
  EXPECT_NEAR(E(0, 0), std::cos(2.0), 1e-14);
  EXPECT_NEAR(E(1, 0), std::sin(2.0), 1e-14);
  Eigen::MatrixXd N(2, 2);
  N << 0, 30.0, 0, 0;  // nilpotent
  const auto En = matrix_exponential(N);
  EXPECT_NEAR(En(0, 1), 30.0, 1e-11);
  Eigen::MatrixXd Dg = Eigen::MatrixXd::Zero(2, 2);
  Dg(0, 0) = -40.0;
  Dg(1, 1) = 3.0;
  const auto Ed = matrix_exponential(Dg);
  EXPECT_NEAR(Ed(0, 0) / std::exp(-40.0), 1.0, 1e-12);
  EXPECT_NEAR(Ed(1, 1) / std::exp(3.0), 1.0, 1e-13);
}

TEST(SpectrumMismatch, DefectivePairAtEqualSpacing) {
  // unit gains and equal spacing put a double, non-diagonalizable eigenvalue at -1
  for (std::size_t n : {4u, 6u, 8u}) {
    const auto r = spectral_report(std::vector<double>(n, kTwoPi / static_cast<double>(n)), 1.0, 1.0);
    EXPECT_LT(r.closed_form_mismatch, 1e-8) << n;
    EXPECT_TRUE(r.passed()) << n;
  }
}

TEST(SpectrumMismatch, MergeClusters) {
  const std::vector<Complex> z{{-1.0 + 1e-8, 0.0}, {-1.0 - 1e-8, 0.0}, {-2.0, 0.0}};
  const auto m = merge_clusters(z, 1e-6);
  EXPECT_NEAR(m[0].real(), -1.0, 1e-15);
  EXPECT_NEAR(m[1].real(), -1.0, 1e-15);
  EXPECT_EQ(m[2].real(), -2.0);
  EXPECT_GT(multiset_distance(z, {{-1, 0}, {-1, 0}, {-2, 0}}), 5e-9);
  EXPECT_LT(spectrum_mismatch({{-1, 0}, {-1, 0}, {-2, 0}}, z), 1e-15);
}
