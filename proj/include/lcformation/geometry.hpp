#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lcf {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Planar vector in world units.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 &operator+=(const Vec2 &o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2 &operator-=(const Vec2 &o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2 &operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }

  friend constexpr Vec2 operator+(Vec2 a, const Vec2 &b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2 &b) { return a -= b; }
  friend constexpr Vec2 operator-(const Vec2 &a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend constexpr bool operator==(const Vec2 &, const Vec2 &) = default;
};

constexpr double dot(const Vec2 &a, const Vec2 &b) { return a.x * b.x + a.y * b.y; }

/// z-component of a x b.
constexpr double cross(const Vec2 &a, const Vec2 &b) { return a.x * b.y - a.y * b.x; }

inline double norm(const Vec2 &v) { return std::hypot(v.x, v.y); }

inline bool is_finite(const Vec2 &v) { return std::isfinite(v.x) && std::isfinite(v.y); }

/// Reduces an angle to [0, 2pi). Throws std::domain_error on NaN/Inf.
inline double wrap_angle(double theta) {
  if (!std::isfinite(theta)) {
    throw std::domain_error("wrap_angle: non-finite angle " + std::to_string(theta));
  }
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2pi
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Signed difference a - b mapped into (-pi, pi].
inline double signed_angle_difference(double a, double b) {
  double d = wrap_angle(a - b);
  return d > kPi ? d - kTwoPi : d;
}

/// min(|a-b|, 2pi-|a-b|) after wrapping; the only meaningful angle comparison near the seam.
inline double circular_distance(double a, double b) {
  return std::abs(signed_angle_difference(a, b));
}

/// Polar description of a relative state. Zero vectors map to angle 0.
struct PolarCoords {
  double rho = 0.0;
  double vbar = 0.0;
  double alpha = 0.0;
  double theta_bar = 0.0;
  double beta = 0.0;
};

inline double polar_angle(const Vec2 &v) {
  if (v.x == 0.0 && v.y == 0.0) return 0.0;
  return wrap_angle(std::atan2(v.y, v.x));
}

inline PolarCoords to_polar(const Vec2 &rel_position, const Vec2 &rel_velocity) {
  PolarCoords pc;
  pc.rho = norm(rel_position);
  pc.vbar = norm(rel_velocity);
  pc.alpha = polar_angle(rel_position);
  pc.theta_bar = polar_angle(rel_velocity);
  pc.beta = wrap_angle(pc.theta_bar - pc.alpha);
  return pc;
}

/// Counterclockwise rotation by `angle`.
inline Vec2 rotate(const Vec2 &v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Expresses v in a frame whose x-axis points along frame_angle.
inline Vec2 rotate_into_frame(const Vec2 &v, double frame_angle) { return rotate(v, -frame_angle); }

}  // namespace lcf
