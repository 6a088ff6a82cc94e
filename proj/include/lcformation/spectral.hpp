#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lcformation/formation.hpp"
#include "lcformation/geometry.hpp"
#include "lcformation/integrator.hpp"

namespace lcf {

using Complex = std::complex<double>;

/// Weighted ring Laplacian L(d) of the angular-spacing subsystem.
///
/// Row i holds d_{i+}/(d_{i+}+d_i) + d_{i-}/(d_i+d_{i-}) on the diagonal, -d_i/(d_{i+}+d_i) at
/// column i+ and -d_i/(d_i+d_{i-}) at column i-. Columns sum to zero and L(d) d = 0, so 1 is the
/// left and d the right null vector; L^T(d) = D^-1 L(d) D with D = diag(d).
struct SpacingLaplacian {
  std::vector<double> spacing;
  Eigen::MatrixXd matrix;

  std::size_t size() const { return spacing.size(); }
};

inline SpacingLaplacian build_laplacian(const std::vector<double> &d) {
  const auto n = d.size();
  if (n < 2) throw std::invalid_argument("build_laplacian: need at least 2 spacings");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(d[i] > 0.0)) {
      throw std::invalid_argument("build_laplacian: d_" + std::to_string(i + 1) + " <= 0");
    }
  }
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ip = next_index(i, n);
    const auto im = prev_index(i, n);
    const auto r = static_cast<Eigen::Index>(i);
    L(r, r) += d[ip] / (d[ip] + d[i]) + d[im] / (d[i] + d[im]);
    // for n = 2 both neighbors are the same agent and the two weights accumulate
    L(r, static_cast<Eigen::Index>(ip)) -= d[i] / (d[ip] + d[i]);
    L(r, static_cast<Eigen::Index>(im)) -= d[i] / (d[i] + d[im]);
  }
  return {d, std::move(L)};
}

inline constexpr double kSpectrumTolerance = 1e-9;

struct LaplacianSpectrum {
  std::vector<double> eigenvalues;  // ascending
  double max_imag = 0.0;
  bool real = false;          // all eigenvalues real to tolerance
  bool in_range = false;      // all in [-tol, 2 + tol]
  bool zero_simple = false;   // one eigenvalue at 0, the next clearly positive
  bool two_present = false;
  bool two_expected = false;  // N even

  bool passed() const { return real && in_range && zero_simple && two_present == two_expected; }
};

inline std::vector<Complex> eigenvalues(const Eigen::MatrixXd &M) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed to converge");
  const auto &ev = es.eigenvalues();
  std::vector<Complex> out(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index k = 0; k < ev.size(); ++k) out[static_cast<std::size_t>(k)] = ev[k];
  std::sort(out.begin(), out.end(), [](const Complex &a, const Complex &b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

inline LaplacianSpectrum check_laplacian_spectrum(const SpacingLaplacian &L) {
  LaplacianSpectrum s;
  const auto ev = eigenvalues(L.matrix);
  for (const auto &z : ev) {
    s.eigenvalues.push_back(z.real());
    s.max_imag = std::max(s.max_imag, std::abs(z.imag()));
  }
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
  const double tol = kSpectrumTolerance;
  s.real = s.max_imag <= tol;
  s.in_range = s.eigenvalues.front() >= -tol && s.eigenvalues.back() <= 2.0 + tol;
  const double radius = std::max(1.0, std::abs(s.eigenvalues.back()));
  s.zero_simple = std::abs(s.eigenvalues[0]) <= tol * radius && s.eigenvalues[1] > tol * radius;
  s.two_present = std::any_of(s.eigenvalues.begin(), s.eigenvalues.end(),
                              [tol](double e) { return std::abs(e - 2.0) <= tol; });
  s.two_expected = L.size() % 2 == 0;
  return s;
}

/// Stacked second-order consensus matrix [[0, I], [-l1 L, -l2 L - I]]; with `transposed` the
/// Laplacian is replaced by its transpose, giving the system in the normalized variables
/// (delta, xi) = (D^-1 alpha_hat, D^-1 alpha_hat').
inline Eigen::MatrixXd build_phi(const std::vector<double> &d, double lambda1, double lambda2,
                                 bool transposed) {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) throw std::invalid_argument("build_phi: gains must be > 0");
  const auto lap = build_laplacian(d);
  const Eigen::MatrixXd L = transposed ? Eigen::MatrixXd(lap.matrix.transpose()) : lap.matrix;
  const auto n = L.rows();
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  phi.topRightCorner(n, n).setIdentity();
  phi.bottomLeftCorner(n, n) = -lambda1 * L;
  phi.bottomRightCorner(n, n) = -lambda2 * L - Eigen::MatrixXd::Identity(n, n);
  return phi;
}

/// Roots of zeta^2 + (l2 eta + 1) zeta + l1 eta for each Laplacian eigenvalue eta.
inline std::vector<Complex> phi_eigenvalues_closed_form(const std::vector<double> &etas,
                                                        double lambda1, double lambda2) {
  std::vector<Complex> out;
  out.reserve(2 * etas.size());
  for (double eta : etas) {
    const double b = lambda2 * eta + 1.0;
    const Complex root = std::sqrt(Complex(b * b - 4.0 * lambda1 * eta, 0.0));
    out.push_back((-b + root) / 2.0);
    out.push_back((-b - root) / 2.0);
  }
  return out;
}

/// Largest distance in a greedy nearest-neighbor pairing of two equally sized multisets.
inline double multiset_distance(const std::vector<Complex> &a, std::vector<Complex> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const auto &z : a) {
    auto it = std::min_element(b.begin(), b.end(), [&z](const Complex &p, const Complex &q) {
      return std::abs(p - z) < std::abs(q - z);
    });
    worst = std::max(worst, std::abs(*it - z));
    b.erase(it);
  }
  return worst;
}

/// Replaces every member of a tight cluster (single linkage within `radius`) by the cluster mean.
/// A defective eigenvalue splits under roundoff by about sqrt(eps), while the mean of the split
/// group stays accurate to roundoff.
inline std::vector<Complex> merge_clusters(std::vector<Complex> z, double radius) {
  const auto n = z.size();
  std::vector<std::size_t> label(n);
  std::iota(label.begin(), label.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> root = [&](std::size_t i) {
    return label[i] == i ? i : label[i] = root(label[i]);
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(z[i] - z[j]) < radius) label[root(i)] = root(j);
    }
  }
  std::vector<Complex> sum(n, Complex{0.0, 0.0});
  std::vector<std::size_t> count(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    sum[root(i)] += z[i];
    ++count[root(i)];
  }
  for (std::size_t i = 0; i < n; ++i) z[i] = sum[root(i)] / static_cast<double>(count[root(i)]);
  return z;
}

/// Closed-form vs computed spectrum, with near-coincident eigenvalues compared through their means.
inline double spectrum_mismatch(const std::vector<Complex> &expected, const std::vector<Complex> &computed) {
  constexpr double radius = 1e-6;
  return multiset_distance(merge_clusters(expected, radius), merge_clusters(computed, radius));
}

struct PhiSpectrum {
  std::vector<Complex> eigenvalues;
  std::size_t zero_count = 0;               // |zeta| < tol
  double max_nonzero_real = -std::numeric_limits<double>::infinity();

  /// exactly one zero eigenvalue, all others strictly in the open left half-plane
  bool passed() const { return zero_count == 1 && max_nonzero_real < -kSpectrumTolerance; }
};

inline PhiSpectrum analyze_phi(const Eigen::MatrixXd &phi) {
  PhiSpectrum s;
  s.eigenvalues = eigenvalues(phi);
  for (const auto &z : s.eigenvalues) {
    if (std::abs(z) < kSpectrumTolerance) {
      ++s.zero_count;
    } else {
      s.max_nonzero_real = std::max(s.max_nonzero_real, z.real());
    }
  }
  return s;
}

struct SpectralReport {
  std::vector<double> spacing;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  LaplacianSpectrum laplacian;
  PhiSpectrum phi;
  double closed_form_mismatch = 0.0;  // closed-form vs eigensolver spectrum of Phi~
  std::vector<double> left_null_vector;  // p with p^T L^T = 0, p^T 1 = 1

  bool passed() const {
    return laplacian.passed() && phi.passed() && closed_form_mismatch <= 1e-8;
  }
};

/// Null vector of L (equivalently left null vector of L^T), normalized to unit sum.
inline std::vector<double> consensus_weights(const SpacingLaplacian &L) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(L.matrix);
  lu.setThreshold(1e-10);
  const Eigen::MatrixXd ker = lu.kernel();
  Eigen::VectorXd p = ker.col(0);
  p /= p.sum();
  return {p.data(), p.data() + p.size()};
}

inline SpectralReport spectral_report(const std::vector<double> &d, double lambda1, double lambda2) {
  SpectralReport r;
  r.spacing = d;
  r.lambda1 = lambda1;
  r.lambda2 = lambda2;
  const auto L = build_laplacian(d);
  r.laplacian = check_laplacian_spectrum(L);
  r.phi = analyze_phi(build_phi(d, lambda1, lambda2, true));
  r.closed_form_mismatch = spectrum_mismatch(
      phi_eigenvalues_closed_form(r.laplacian.eigenvalues, lambda1, lambda2), r.phi.eigenvalues);
  r.left_null_vector = consensus_weights(L);
  return r;
}

struct ConsensusLimit {
  std::vector<double> spacing;  // limit of alpha_hat
  std::vector<double> rate;     // limit of alpha_hat'
};

inline void check_spacing_state(const std::vector<double> &alpha_hat0,
                                const std::vector<double> &rate0, const std::vector<double> &d) {
  if (alpha_hat0.size() != d.size() || rate0.size() != d.size()) {
    throw std::invalid_argument("spacing state size does not match d");
  }
  const double s = std::accumulate(alpha_hat0.begin(), alpha_hat0.end(), 0.0);
  const double r = std::accumulate(rate0.begin(), rate0.end(), 0.0);
  if (std::abs(s - kTwoPi) > kSpacingSumTolerance) {
    throw std::invalid_argument("sum of spacings must equal 2pi");
  }
  if (std::abs(r) > kSpacingSumTolerance) {
    throw std::invalid_argument("sum of spacing rates must be zero");
  }
}

/// Asymptotic state of the linear spacing subsystem: in normalized variables delta -> 1 p^T
/// (delta(0) + xi(0)) with p = d / 2pi, mapped back through D.
inline ConsensusLimit consensus_limit(const std::vector<double> &alpha_hat0,
                                      const std::vector<double> &rate0,
                                      const std::vector<double> &d) {
  check_spacing_state(alpha_hat0, rate0, d);
  double level = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double p = d[i] / kTwoPi;
    level += p * (alpha_hat0[i] / d[i] + rate0[i] / d[i]);
  }
  ConsensusLimit lim;
  for (double di : d) lim.spacing.push_back(di * level);
  lim.rate.assign(d.size(), 0.0);
  return lim;
}

/// Time series of the linear spacing subsystem [alpha_hat; alpha_hat'] under RK4.
struct LinearSeries {
  double dt = 0.0;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;

  /// State at the sample nearest to t.
  const Eigen::VectorXd &at(double t) const {
    const auto k = static_cast<std::size_t>(std::llround(t / dt));
    return states.at(std::min(k, states.size() - 1));
  }
};

inline LinearSeries simulate_linear_subsystem(const std::vector<double> &alpha_hat0,
                                              const std::vector<double> &rate0,
                                              const std::vector<double> &d, double lambda1,
                                              double lambda2, double t_end, double dt) {
  check_spacing_state(alpha_hat0, rate0, d);
  if (!(dt > 0.0) || !(t_end >= dt)) throw std::invalid_argument("need dt > 0 and t_end >= dt");
  const Eigen::MatrixXd phi = build_phi(d, lambda1, lambda2, false);
  const auto n = static_cast<Eigen::Index>(d.size());
  Eigen::VectorXd x(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x[i] = alpha_hat0[static_cast<std::size_t>(i)];
    x[n + i] = rate0[static_cast<std::size_t>(i)];
  }
  auto field = [&phi](double, const Eigen::VectorXd &s) -> Eigen::VectorXd { return phi * s; };
  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  LinearSeries out;
  out.dt = dt;
  out.times.reserve(steps + 1);
  out.states.reserve(steps + 1);
  out.times.push_back(0.0);
  out.states.push_back(x);
  for (std::size_t k = 0; k < steps; ++k) {
    x = rk4_step(field, static_cast<double>(k) * dt, x, dt);
    out.times.push_back(static_cast<double>(k + 1) * dt);
    out.states.push_back(x);
  }
  return out;
}

}  // namespace lcf
