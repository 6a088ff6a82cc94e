#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lcformation/geometry.hpp"

namespace lcf {

/// Gains of the limit-cycle controller. eps_rho clamps the target distance away from zero so
/// that rho^sigma stays finite for sigma < 0.
struct ControllerParams {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double mu = 1.0;
  double sigma = -1.0;
  double eps_rho = 1e-9;

  /// Throws std::invalid_argument. Pass min_radius > 0 to also enforce eps_rho <= min_i R_i / 100.
  void validate(double min_radius = 0.0) const {
    if (!(lambda1 > 0.0)) throw std::invalid_argument("lambda1 must be > 0");
    if (!(lambda2 > 0.0)) throw std::invalid_argument("lambda2 must be > 0");
    if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");
    if (!std::isfinite(sigma)) throw std::invalid_argument("sigma must be finite");
    if (!(eps_rho > 0.0)) throw std::invalid_argument("eps_rho must be > 0");
    if (min_radius > 0.0 && eps_rho > min_radius / 100.0) {
      throw std::invalid_argument("eps_rho must not exceed min(R)/100");
    }
  }
};

/// Everything agent i needs: its state relative to the target, the target acceleration, and the
/// spacing angles (and their rates) to its two ring neighbors.
struct RelativeObservation {
  Vec2 rel_position;
  Vec2 rel_velocity;
  Vec2 target_accel;
  double spacing_ahead = 0.0;        // alpha_hat_i, agent i -> i+
  double spacing_behind = 0.0;       // alpha_hat_{i-}, agent i- -> i
  double spacing_ahead_rate = 0.0;   // d/dt alpha_hat_i
  double spacing_behind_rate = 0.0;  // d/dt alpha_hat_{i-}
  double desired_ahead = 0.0;        // d_i
  double desired_behind = 0.0;       // d_{i-}
};

/// Counterclockwise angle from the ray through alpha_i to the ray through alpha_next, in [0, 2pi).
inline double angular_distance(double alpha_i, double alpha_next) {
  return wrap_angle(alpha_next - alpha_i);
}

/// Polar-angle rate about the target from the cross product, guarded at the origin.
inline double alpha_rate(const Vec2 &rel_position, const Vec2 &rel_velocity, double eps_rho) {
  const double rho = std::max(norm(rel_position), eps_rho);
  return cross(rel_position, rel_velocity) / (rho * rho);
}

/// Radial (converging) gain E.
inline double gain_E(double rho, double radius, double omega, const ControllerParams &params) {
  const double rc = std::max(rho, params.eps_rho);
  return -params.mu * (rc - radius) * std::pow(rc, params.sigma) - omega * (omega - 1.0);
}

/// Layout term f_i coupling the spacing errors to both neighbors.
inline double layout_f(const RelativeObservation &obs, const ControllerParams &params) {
  const double total = obs.desired_ahead + obs.desired_behind;
  const double ahead = params.lambda1 * obs.spacing_ahead + params.lambda2 * obs.spacing_ahead_rate;
  const double behind =
      params.lambda1 * obs.spacing_behind + params.lambda2 * obs.spacing_behind_rate;
  return (obs.desired_behind / total) * ahead - (obs.desired_ahead / total) * behind;
}

struct ControlTerms {
  Vec2 u;
  double E = 0.0;
  double gamma = 0.0;
  double f = 0.0;
};

inline ControlTerms control_terms(const RelativeObservation &obs, double radius, double omega,
                                  const ControllerParams &params) {
  ControlTerms t;
  t.E = gain_E(norm(obs.rel_position), radius, omega, params);
  t.f = layout_f(obs, params);
  t.gamma = omega + t.f;
  const Vec2 &p = obs.rel_position;
  const Vec2 &v = obs.rel_velocity;
  t.u = {t.E * p.x - t.gamma * p.y - v.x - v.y + obs.target_accel.x,
         t.gamma * p.x + t.E * p.y + v.x - v.y + obs.target_accel.y};
  return t;
}

/// Control input in world coordinates.
inline Vec2 control_input(const RelativeObservation &obs, double radius, double omega,
                          const ControllerParams &params) {
  return control_terms(obs, radius, omega, params).u;
}

/// Control input evaluated in the agent's Frenet-Serret frame, whose x-axis points from the target
/// to the agent. In that frame the relative position is (rho, 0), so only the distance to the
/// target enters; the observation's vectors are expected already rotated into the frame.
inline Vec2 control_input_local(const RelativeObservation &obs_local, double radius, double omega,
                                const ControllerParams &params) {
  const double rho = norm(obs_local.rel_position);
  const double E = gain_E(rho, radius, omega, params);
  const double gamma = omega + layout_f(obs_local, params);
  const Vec2 &v = obs_local.rel_velocity;
  return {E * rho - v.x - v.y + obs_local.target_accel.x,
          gamma * rho + v.x - v.y + obs_local.target_accel.y};
}

/// Rotates the vector parts of an observation into the frame at frame_angle.
inline RelativeObservation observation_in_frame(RelativeObservation obs, double frame_angle) {
  obs.rel_position = rotate_into_frame(obs.rel_position, frame_angle);
  obs.rel_velocity = rotate_into_frame(obs.rel_velocity, frame_angle);
  obs.target_accel = rotate_into_frame(obs.target_accel, frame_angle);
  return obs;
}

}  // namespace lcf
