#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lcformation/controller.hpp"
#include "lcformation/dynamics.hpp"
#include "lcformation/formation.hpp"
#include "lcformation/geometry.hpp"

namespace lcf {

/// Per-agent state in the target-centered polar chart.
struct PolarState {
  double rho = 0.0;
  double vbar = 0.0;
  double beta = 0.0;
  double alpha = 0.0;
};

inline PolarState polar_state(const Vec2 &rel_position, const Vec2 &rel_velocity) {
  const auto pc = to_polar(rel_position, rel_velocity);
  return {pc.rho, pc.vbar, pc.beta, pc.alpha};
}

inline std::vector<PolarState> polar_states(const std::vector<AgentState> &agents,
                                            const TargetState &target) {
  std::vector<PolarState> out;
  out.reserve(agents.size());
  for (const auto &a : agents) out.push_back(polar_state(a.p - target.position, a.v - target.velocity));
  return out;
}

/// Time derivatives of (rho, vbar, beta, alpha) under the closed loop. The beta and alpha rates
/// divide by vbar and rho; they are empty where that divisor vanishes.
struct PolarRates {
  double drho = 0.0;
  double dvbar = 0.0;
  std::optional<double> dbeta;
  std::optional<double> dalpha;
};

inline PolarRates polar_residual(const PolarState &s, double gamma, double E) {
  PolarRates r;
  const double cb = std::cos(s.beta);
  const double sb = std::sin(s.beta);
  r.drho = s.vbar * cb;
  r.dvbar = s.rho * (E * cb + gamma * sb) - s.vbar;
  if (s.rho > 0.0) r.dalpha = (s.vbar / s.rho) * sb;
  if (s.rho > 0.0 && s.vbar > 0.0) {
    r.dbeta = 1.0 - (s.rho / s.vbar) * (E * sb - gamma * cb) - (s.vbar / s.rho) * sb;
  }
  return r;
}

enum class EquilibriumCase { Ia, Ib, II, IIIb11, IIIb10, IIIb2, None };

inline std::string to_string(EquilibriumCase c) {
  switch (c) {
    case EquilibriumCase::Ia: return "Ia";
    case EquilibriumCase::Ib: return "Ib";
    case EquilibriumCase::II: return "II";
    case EquilibriumCase::IIIb11: return "IIIb11";
    case EquilibriumCase::IIIb10: return "IIIb10";
    case EquilibriumCase::IIIb2: return "IIIb2";
    case EquilibriumCase::None: return "none";
  }
  return "none";
}

/// V2: at the target (rho and vbar ~ 0); V1b: at rest away from it; V1a: moving.
enum class Membership { V1a, V1b, V2 };

struct EquilibriumLabel {
  EquilibriumCase equilibrium = EquilibriumCase::None;
  std::vector<Membership> membership;
  double residual = std::numeric_limits<double>::infinity();
};

/// Matches a configuration against the equilibrium catalog. For the Case III families only the
/// structure (who sits at the target, who rests on its circle) is checked; their spacing limits
/// depend on the initial state and are not predicted.
inline EquilibriumLabel classify_equilibrium(const std::vector<PolarState> &states,
                                             const FormationSpec &spec, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("classify_equilibrium: tol must be > 0");
  const auto n = states.size();
  if (n != spec.size()) throw std::invalid_argument("classify_equilibrium: size mismatch");

  EquilibriumLabel label;
  std::size_t n_v2 = 0, n_v1a = 0, n_v1b = 0;
  for (const auto &s : states) {
    if (std::hypot(s.rho, s.vbar) < tol) {
      label.membership.push_back(Membership::V2);
      ++n_v2;
    } else if (s.vbar < tol) {
      label.membership.push_back(Membership::V1b);
      ++n_v1b;
    } else {
      label.membership.push_back(Membership::V1a);
      ++n_v1a;
    }
  }
  auto spacing_residual = [&] {
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = angular_distance(states[i].alpha, states[next_index(i, n)].alpha);
      r = std::max(r, circular_distance(a, spec.spacing[i]));
    }
    return r;
  };
  auto accept = [&](EquilibriumCase c, double residual) {
    label.residual = residual;
    if (residual <= tol) label.equilibrium = c;
    return label;
  };

  const double omega = spec.omega;
  if (n_v2 == n) {
    double r = 0.0;
    for (const auto &s : states) r = std::max(r, std::hypot(s.rho, s.vbar));
    return accept(EquilibriumCase::II, r);
  }
  if (n_v1a == n && omega != 0.0) {
    const double beta_star = omega > 0.0 ? kPi / 2.0 : 3.0 * kPi / 2.0;
    double r = spacing_residual();
    for (std::size_t i = 0; i < n; ++i) {
      r = std::max(r, std::abs(states[i].rho - spec.radius[i]));
      r = std::max(r, std::abs(states[i].vbar - std::abs(omega * spec.radius[i])));
      r = std::max(r, circular_distance(states[i].beta, beta_star));
    }
    return accept(EquilibriumCase::Ia, r);
  }
  if (n_v1b == n && omega == 0.0) {
    double r = spacing_residual();
    for (std::size_t i = 0; i < n; ++i) r = std::max(r, std::abs(states[i].rho - spec.radius[i]));
    return accept(EquilibriumCase::Ib, r);
  }
  if (n_v2 > 0 && n_v1a == 0) {
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (label.membership[i] == Membership::V1b) {
        r = std::max(r, std::abs(states[i].rho - spec.radius[i]));
      }
    }
    if (n_v2 > 1) return accept(EquilibriumCase::IIIb2, r);
    return accept(omega == 0.0 ? EquilibriumCase::IIIb10 : EquilibriumCase::IIIb11, r);
  }
  return label;
}

// ---------------------------------------------------------------------------------------------
// Single-agent characteristic polynomials. Coefficients are stored highest power first.

using Polynomial = std::vector<double>;

/// Linearization at the circling equilibrium (omega != 0).
inline Polynomial single_agent_charpoly_Ia(double omega, double mu, double radius, double sigma) {
  if (omega == 0.0) throw std::invalid_argument("circling equilibrium requires omega != 0");
  if (!(mu > 0.0) || !(radius > 0.0)) throw std::invalid_argument("need mu > 0 and R > 0");
  const double k = mu * std::pow(radius, sigma + 1.0);
  const double w = 2.0 * omega - 1.0;
  return {1.0, 2.0, w * w + 1.0 + k, k};
}

/// a1 a2 - a0 a3 for a cubic a0 s^3 + a1 s^2 + a2 s + a3.
inline double cubic_hurwitz_margin(const Polynomial &c) { return c[1] * c[2] - c[0] * c[3]; }

/// Roots of (s + 1)(s^2 + s + mu R^(sigma+1) cos^2 beta), the rest-equilibrium linearization.
inline std::array<std::complex<double>, 3> single_agent_roots_Ib(double mu, double radius,
                                                                 double sigma, double beta) {
  if (!(mu > 0.0) || !(radius > 0.0)) throw std::invalid_argument("need mu > 0 and R > 0");
  const double cb = std::cos(beta);
  const double k = mu * std::pow(radius, sigma + 1.0) * cb * cb;
  const auto disc = std::sqrt(std::complex<double>(1.0 - 4.0 * k, 0.0));
  return {std::complex<double>(-1.0, 0.0), (-1.0 + disc) / 2.0, (-1.0 - disc) / 2.0};
}

/// Linearization of the Cartesian single-agent loop at the target, sigma = 0:
/// [s(s+1) - mu R + omega(omega-1)]^2 + (s + omega)^2.
inline Polynomial origin_charpoly(double omega, double mu, double radius) {
  if (!(mu > 0.0) || !(radius > 0.0)) throw std::invalid_argument("need mu > 0 and R > 0");
  const double muR = mu * radius;
  const double k = omega * (omega - 1.0) - muR;
  return {1.0, 2.0, 2.0 * (omega * omega - omega - muR + 1.0), 2.0 * (omega * omega - muR),
          k * k + omega * omega};
}

/// Single-agent closed loop in (rho, vbar, beta) with the layout term absent.
inline Eigen::Vector3d single_agent_polar_field(const Eigen::Vector3d &x, double omega, double mu,
                                                double radius, double sigma) {
  ControllerParams params;
  params.mu = mu;
  params.sigma = sigma;
  const double E = gain_E(x[0], radius, omega, params);
  const auto r = polar_residual({x[0], x[1], x[2], 0.0}, omega, E);
  return {r.drho, r.dvbar, r.dbeta.value_or(std::numeric_limits<double>::quiet_NaN())};
}

/// det(sI - A) by the Faddeev-LeVerrier recursion.
inline Polynomial characteristic_polynomial(const Eigen::MatrixXd &A) {
  const auto n = A.rows();
  Polynomial c(static_cast<std::size_t>(n + 1), 0.0);
  c[0] = 1.0;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    M = A * M + c[static_cast<std::size_t>(k - 1)] * I;
    c[static_cast<std::size_t>(k)] = -(A * M).trace() / static_cast<double>(k);
  }
  return c;
}

// ---------------------------------------------------------------------------------------------
// Routh array

struct RouthTable {
  std::vector<std::vector<double>> rows;  // rows[k] is the s^(n-k) row
  bool epsilon_pivot = false;  // a zero leading entry was replaced by a small positive epsilon
  bool boundary = false;       // an all-zero row appeared: roots on (or symmetric about) the axis

  std::vector<double> first_column() const {
    std::vector<double> c;
    for (const auto &r : rows) c.push_back(r.front());
    return c;
  }
};

struct RouthResult {
  RouthTable table;
  int rhp_count = 0;
};

inline RouthResult routh_sign_changes(const Polynomial &coeffs) {
  if (coeffs.empty() || coeffs.front() == 0.0) {
    throw std::invalid_argument("routh_sign_changes: leading coefficient must be nonzero");
  }
  const std::size_t degree = coeffs.size() - 1;
  const std::size_t width = degree / 2 + 1;
  RouthResult res;
  auto &rows = res.table.rows;
  rows.assign(degree + 1, std::vector<double>(width, 0.0));
  for (std::size_t j = 0; j < coeffs.size(); ++j) rows[j % 2][j / 2] = coeffs[j];
  if (degree == 0) return res;

  double scale = 0.0;
  for (double c : coeffs) scale = std::max(scale, std::abs(c));
  const double zero_tol = 1e-12 * scale;
  const double eps = 1e-9 * scale;
  auto is_zero_row = [zero_tol](const std::vector<double> &r) {
    return std::all_of(r.begin(), r.end(), [zero_tol](double x) { return std::abs(x) <= zero_tol; });
  };

  for (std::size_t k = 1; k <= degree; ++k) {
    auto &row = rows[k];
    if (k >= 2) {
      const auto &a = rows[k - 2];
      const auto &b = rows[k - 1];
      for (std::size_t j = 0; j + 1 < width; ++j) {
        row[j] = (b[0] * a[j + 1] - a[0] * b[j + 1]) / b[0];
      }
    }
    if (is_zero_row(row)) {
      // Replace by the derivative of the auxiliary polynomial built from the row above, whose
      // powers are m, m-2, ... with m = degree - (k - 1).
      res.table.boundary = true;
      const auto &above = rows[k - 1];
      const double m = static_cast<double>(degree - (k - 1));
      for (std::size_t j = 0; j < width; ++j) row[j] = above[j] * (m - 2.0 * static_cast<double>(j));
      if (is_zero_row(row)) row[0] = eps;  // constant auxiliary polynomial: root at s = 0
    }
    if (std::abs(row[0]) <= zero_tol) {
      res.table.epsilon_pivot = true;
      row[0] = eps;
    }
  }
  const auto col = res.table.first_column();
  for (std::size_t k = 1; k < col.size(); ++k) {
    if ((col[k] > 0.0) != (col[k - 1] > 0.0)) ++res.rhp_count;
  }
  return res;
}

/// Roots via eigenvalues of the companion matrix; independent of the Routh construction.
inline std::vector<std::complex<double>> polynomial_roots(const Polynomial &coeffs) {
  if (coeffs.empty() || coeffs.front() == 0.0) {
    throw std::invalid_argument("polynomial_roots: leading coefficient must be nonzero");
  }
  const auto n = static_cast<Eigen::Index>(coeffs.size() - 1);
  if (n == 0) return {};
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) C(0, j) = -coeffs[static_cast<std::size_t>(j + 1)] / coeffs[0];
  for (Eigen::Index i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("companion eigensolver failed");
  std::vector<std::complex<double>> roots;
  for (Eigen::Index k = 0; k < n; ++k) roots.push_back(es.eigenvalues()[k]);
  return roots;
}

inline int count_rhp_roots(const std::vector<std::complex<double>> &roots, double tol = 1e-9) {
  return static_cast<int>(std::count_if(roots.begin(), roots.end(),
                                        [tol](const auto &z) { return z.real() > tol; }));
}

}  // namespace lcf
