#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "lcformation/dynamics.hpp"
#include "lcformation/formation.hpp"
#include "lcformation/geometry.hpp"

namespace lcf {

/// Seeded admissible spacing: uniform weights in [0.5, 1.5] scaled to sum 2pi.
inline std::vector<double> random_spacing(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_spacing: need n >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.5, 1.5);
  std::vector<double> d(n);
  for (auto &x : d) x = uni(rng);
  const double s = std::accumulate(d.begin(), d.end(), 0.0);
  for (auto &x : d) x *= kTwoPi / s;
  return d;
}

/// Six points on the right triangle (-1,-1), (2,-1), (-1,1): its vertices and edge midpoints,
/// taken relative to the centroid and ordered counterclockwise.
inline std::vector<Vec2> right_triangle_points() {
  const Vec2 a{-1.0, -1.0}, b{2.0, -1.0}, c{-1.0, 1.0};
  const Vec2 g = (a + b + c) * (1.0 / 3.0);
  std::vector<Vec2> pts{a, b, c, (a + b) * 0.5, (b + c) * 0.5, (c + a) * 0.5};
  for (auto &p : pts) p = p - g;
  std::sort(pts.begin(), pts.end(),
            [](const Vec2 &p, const Vec2 &q) { return polar_angle(p) < polar_angle(q); });
  return pts;
}

inline FormationSpec right_triangle_formation() {
  const auto pts = right_triangle_points();
  const auto n = pts.size();
  FormationSpec spec;
  spec.omega = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    spec.spacing.push_back(wrap_angle(polar_angle(pts[next_index(i, n)]) - polar_angle(pts[i])));
    spec.radius.push_back(norm(pts[i]));
  }
  return spec;
}

/// The three six-agent demonstrations: 1 circle (omega = -0.2, static target), 2 two concentric
/// circles 0.6 / 1.5 (omega = 1, moving target), 3 right triangle (omega = 0, moving target).
inline SimConfig example_config(int which, std::uint64_t seed = 1) {
  SimConfig cfg;
  cfg.seed = seed;
  cfg.dt = 1e-3;
  cfg.t_end = 60.0;
  const ConstantVelocityTarget moving{{0.0, 0.0}, {0.05, 0.03}};
  switch (which) {
    case 1:
      cfg.spec = equal_spacing(std::vector<double>(6, 1.0), -0.2);
      cfg.target = StaticTarget{};
      break;
    case 2:
      cfg.spec = equal_spacing({0.6, 1.5, 0.6, 1.5, 0.6, 1.5}, 1.0);
      cfg.target = moving;
      break;
    case 3:
      cfg.spec = right_triangle_formation();
      cfg.target = moving;
      break;
    default:
      throw std::invalid_argument("example_config: expected 1, 2 or 3");
  }
  return cfg;
}

}  // namespace lcf
