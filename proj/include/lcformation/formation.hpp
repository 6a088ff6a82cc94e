#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcformation/geometry.hpp"

namespace lcf {

inline constexpr double kSpacingSumTolerance = 1e-9;

/// Desired general formation: angular spacing d_i from agent i to i+, radius R_i, rotation rate omega.
struct FormationSpec {
  std::vector<double> spacing;
  std::vector<double> radius;
  double omega = 0.0;

  std::size_t size() const { return spacing.size(); }
};

/// Equally spaced pattern, d_i = 2pi/n.
inline FormationSpec equal_spacing(std::vector<double> radius, double omega) {
  const auto n = radius.size();
  if (n == 0) throw std::invalid_argument("equal_spacing: empty radius list");
  return {std::vector<double>(n, kTwoPi / static_cast<double>(n)), std::move(radius), omega};
}

struct AdmissibilityReport {
  bool admissible = true;
  std::vector<std::string> violations;

  std::string to_string() const {
    std::ostringstream os;
    for (std::size_t k = 0; k < violations.size(); ++k) {
      if (k) os << "; ";
      os << violations[k];
    }
    return os.str();
  }
};

inline AdmissibilityReport validate(const FormationSpec &spec) {
  AdmissibilityReport rep;
  auto fail = [&rep](std::string msg) {
    rep.admissible = false;
    rep.violations.push_back(std::move(msg));
  };
  const auto n = spec.spacing.size();
  if (n < 2) fail("N=" + std::to_string(n) + " < 2");
  if (spec.radius.size() != n) {
    fail("radius list has " + std::to_string(spec.radius.size()) + " entries, spacing list has " +
         std::to_string(n));
  }
  if (!std::isfinite(spec.omega)) fail("omega is not finite");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(spec.spacing[i] > 0.0) || !std::isfinite(spec.spacing[i])) {
      fail("d_" + std::to_string(i + 1) + "<=0");
    }
  }
  for (std::size_t i = 0; i < spec.radius.size(); ++i) {
    if (!(spec.radius[i] > 0.0) || !std::isfinite(spec.radius[i])) {
      fail("R_" + std::to_string(i + 1) + "<=0");
    }
  }
  const double sum = std::accumulate(spec.spacing.begin(), spec.spacing.end(), 0.0);
  if (!(std::abs(sum - kTwoPi) <= kSpacingSumTolerance)) {
    std::ostringstream os;
    os.precision(17);
    os << "sum(d)=" << sum << " != 2pi";
    fail(os.str());
  }
  return rep;
}

/// Undirected ring over agents labeled 1..n.
class RingTopology {
 public:
  explicit RingTopology(std::size_t n) : n_(n) {
    if (n < 2) throw std::invalid_argument("RingTopology: need at least 2 agents");
  }

  std::size_t size() const { return n_; }

  /// i+ : the neighbor immediately ahead (counterclockwise).
  std::size_t plus(std::size_t label) const {
    check(label);
    return label == n_ ? 1 : label + 1;
  }

  /// i- : the neighbor immediately behind.
  std::size_t minus(std::size_t label) const {
    check(label);
    return label == 1 ? n_ : label - 1;
  }

 private:
  void check(std::size_t label) const {
    if (label < 1 || label > n_) {
      throw std::out_of_range("agent label " + std::to_string(label) + " outside 1.." +
                              std::to_string(n_));
    }
  }
  std::size_t n_;
};

// 0-based index helpers used by the array-oriented code.
inline std::size_t next_index(std::size_t i, std::size_t n) { return i + 1 == n ? 0 : i + 1; }
inline std::size_t prev_index(std::size_t i, std::size_t n) { return i == 0 ? n - 1 : i - 1; }

/// Orders agents by polar angle about the target (counterclockwise from the +x axis), then by
/// distance for agents on a common ray, then by a seeded random key for coincident agents.
/// Returns 0-based original indices in label order.
inline std::vector<std::size_t> assign_labels(const std::vector<Vec2> &positions, const Vec2 &target,
                                              std::uint64_t seed) {
  const auto n = positions.size();
  struct Key {
    std::size_t index;
    Vec2 rel;
    double angle;
    double dist;
    double tie;
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<Key> keys;
  keys.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 rel = positions[i] - target;
    if (rel.x == 0.0 && rel.y == 0.0) {
      throw std::invalid_argument("assign_labels: agent " + std::to_string(i) +
                                  " occupies the target position");
    }
    keys.push_back({i, rel, polar_angle(rel), norm(rel), uni(rng)});
  }
  std::sort(keys.begin(), keys.end(), [](const Key &a, const Key &b) {
    if (a.angle != b.angle) return a.angle < b.angle;
    return a.index < b.index;
  });

  // atan2 of collinear vectors can differ in the last ulp, so rays are grouped geometrically.
  auto same_ray = [](const Key &a, const Key &b) {
    return dot(a.rel, b.rel) > 0.0 && std::abs(cross(a.rel, b.rel)) <= 1e-12 * a.dist * b.dist;
  };
  auto same_point = [](const Key &a, const Key &b) {
    return norm(a.rel - b.rel) <= 1e-12 * std::max(a.dist, b.dist);
  };
  for (std::size_t begin = 0; begin < n;) {
    std::size_t end = begin + 1;
    while (end < n && same_ray(keys[begin], keys[end])) ++end;
    std::sort(keys.begin() + begin, keys.begin() + end, [&](const Key &a, const Key &b) {
      if (!same_point(a, b)) return a.dist < b.dist;
      return a.tie < b.tie;
    });
    begin = end;
  }

  std::vector<std::size_t> order(n);
  std::transform(keys.begin(), keys.end(), order.begin(), [](const Key &k) { return k.index; });
  return order;
}

}  // namespace lcf
