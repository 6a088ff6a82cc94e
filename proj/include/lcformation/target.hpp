#pragma once

#include <cmath>
#include <string>
#include <type_traits>
#include <variant>

#include "lcformation/geometry.hpp"

namespace lcf {

struct TargetState {
  Vec2 position;
  Vec2 velocity;
  Vec2 accel;
};

struct StaticTarget {
  Vec2 position;
};

struct ConstantVelocityTarget {
  Vec2 position;  // at t = 0
  Vec2 velocity;
};

/// Moves on a circle of `radius` about `center` at angular rate `rate`, starting at angle `phase`.
struct CircularTarget {
  Vec2 center;
  double radius = 1.0;
  double rate = 0.1;
  double phase = 0.0;
};

/// position + velocity*t + amplitude*sin(frequency*t)
struct SinusoidalTarget {
  Vec2 position;
  Vec2 velocity;
  Vec2 amplitude;
  double frequency = 0.5;
};

using TargetModel =
    std::variant<StaticTarget, ConstantVelocityTarget, CircularTarget, SinusoidalTarget>;

/// Closed-form state; velocity and acceleration are the analytic derivatives of position.
inline TargetState target_state(const TargetModel &model, double t) {
  return std::visit(
      [t](const auto &m) -> TargetState {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, StaticTarget>) {
          return {m.position, {}, {}};
        } else if constexpr (std::is_same_v<M, ConstantVelocityTarget>) {
          return {m.position + m.velocity * t, m.velocity, {}};
        } else if constexpr (std::is_same_v<M, CircularTarget>) {
          const double th = m.phase + m.rate * t;
          const Vec2 dir{std::cos(th), std::sin(th)};
          const Vec2 tan{-std::sin(th), std::cos(th)};
          return {m.center + m.radius * dir, (m.radius * m.rate) * tan,
                  (-m.radius * m.rate * m.rate) * dir};
        } else {
          const double w = m.frequency;
          const double s = std::sin(w * t);
          const double c = std::cos(w * t);
          return {m.position + m.velocity * t + m.amplitude * s, m.velocity + m.amplitude * (w * c),
                  m.amplitude * (-w * w * s)};
        }
      },
      model);
}

inline std::string target_kind(const TargetModel &model) {
  switch (model.index()) {
    case 0: return "static";
    case 1: return "constant-velocity";
    case 2: return "circular";
    default: return "sinusoidal";
  }
}

/// Same trajectory shifted by a constant offset.
inline TargetModel translated(TargetModel model, const Vec2 &offset) {
  std::visit(
      [&offset](auto &m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, CircularTarget>) {
          m.center += offset;
        } else {
          m.position += offset;
        }
      },
      model);
  return model;
}

}  // namespace lcf
