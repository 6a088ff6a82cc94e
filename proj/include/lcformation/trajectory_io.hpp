#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "lcformation/dynamics.hpp"
#include "lcformation/formation.hpp"
#include "lcformation/stability.hpp"

namespace lcf {

// trajectory.csv columns: t, then per agent i = 1..N: x_i, y_i, vx_i, vy_i, rho_i, alpha_i,
// then the target position x0, y0. Every float is written with 17 significant digits, which
// round-trips IEEE doubles exactly.

inline constexpr std::size_t kColumnsPerAgent = 6;

/// Column-oriented copy of what trajectory.csv holds.
struct TrajectoryTable {
  std::size_t agents = 0;
  std::vector<std::vector<double>> rows;

  std::size_t columns() const { return 1 + kColumnsPerAgent * agents + 2; }
  double time(std::size_t k) const { return rows[k][0]; }
  double field(std::size_t k, std::size_t agent, std::size_t offset) const {
    return rows[k][1 + kColumnsPerAgent * agent + offset];
  }
  Vec2 position(std::size_t k, std::size_t agent) const { return {field(k, agent, 0), field(k, agent, 1)}; }
  Vec2 velocity(std::size_t k, std::size_t agent) const { return {field(k, agent, 2), field(k, agent, 3)}; }
  double rho(std::size_t k, std::size_t agent) const { return field(k, agent, 4); }
  double alpha(std::size_t k, std::size_t agent) const { return field(k, agent, 5); }
  Vec2 target(std::size_t k) const {
    const auto base = 1 + kColumnsPerAgent * agents;
    return {rows[k][base], rows[k][base + 1]};
  }
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<std::string> trajectory_header(std::size_t n) {
  std::vector<std::string> h{"t"};
  for (std::size_t i = 1; i <= n; ++i) {
    const auto s = std::to_string(i);
    for (const char *f : {"x_", "y_", "vx_", "vy_", "rho_", "alpha_"}) h.push_back(f + s);
  }
  h.push_back("x0");
  h.push_back("y0");
  return h;
}

inline TrajectoryTable to_table(const Trajectory &traj) {
  TrajectoryTable t;
  t.agents = traj.agent_count();
  t.rows.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    std::vector<double> row;
    row.reserve(t.columns());
    row.push_back(traj.times[k]);
    for (std::size_t i = 0; i < t.agents; ++i) {
      const auto &a = traj.agents[k][i];
      const auto &d = traj.derived[k][i];
      row.insert(row.end(), {a.p.x, a.p.y, a.v.x, a.v.y, d.rho, d.alpha});
    }
    row.push_back(traj.target[k].position.x);
    row.push_back(traj.target[k].position.y);
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline void write_csv_row(std::ostream &os, const std::vector<std::string> &cells) {
  for (std::size_t j = 0; j < cells.size(); ++j) {
    if (j) os << ',';
    os << cells[j];
  }
  os << "\r\n";
}

inline void write_csv_row(std::ostream &os, const std::vector<double> &values) {
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (j) os << ',';
    os << format_double(values[j]);
  }
  os << "\r\n";
}

inline void write_trajectory_csv(std::ostream &os, const TrajectoryTable &table) {
  write_csv_row(os, trajectory_header(table.agents));
  for (const auto &row : table.rows) write_csv_row(os, row);
}

inline std::string trajectory_csv(const Trajectory &traj) {
  std::ostringstream os;
  write_trajectory_csv(os, to_table(traj));
  return os.str();
}

inline TrajectoryTable parse_trajectory_csv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trajectory csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::size_t columns = 1;
  for (char c : line) columns += c == ',';
  if (columns < 1 + kColumnsPerAgent + 2 || (columns - 3) % kColumnsPerAgent != 0) {
    throw std::runtime_error("trajectory csv: unexpected column count " + std::to_string(columns));
  }
  TrajectoryTable t;
  t.agents = (columns - 3) / kColumnsPerAgent;
  std::istringstream hs(line);
  std::vector<std::string> header;
  for (std::string cell; std::getline(hs, cell, ',');) header.push_back(cell);
  if (header != trajectory_header(t.agents)) throw std::runtime_error("trajectory csv: bad header");
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    row.reserve(columns);
    std::size_t start = 0;
    while (start <= line.size()) {
      const auto comma = line.find(',', start);
      const auto cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      row.push_back(std::stod(cell));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (row.size() != columns) throw std::runtime_error("trajectory csv: ragged row");
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline std::string metrics_csv(const MetricSeries &m) {
  std::ostringstream os;
  const auto n = m.radius_error.empty() ? 0 : m.radius_error.front().size();
  std::vector<std::string> header{"t"};
  for (const char *f : {"rho_err_", "rate_err_", "spacing_err_"}) {
    for (std::size_t i = 1; i <= n; ++i) header.push_back(f + std::to_string(i));
  }
  header.push_back("min_pair_dist");
  header.push_back("spacing_sum");
  write_csv_row(os, header);
  for (std::size_t k = 0; k < m.times.size(); ++k) {
    std::vector<double> row{m.times[k]};
    row.insert(row.end(), m.radius_error[k].begin(), m.radius_error[k].end());
    row.insert(row.end(), m.rate_error[k].begin(), m.rate_error[k].end());
    row.insert(row.end(), m.spacing_error[k].begin(), m.spacing_error[k].end());
    row.push_back(m.min_pair_distance[k]);
    row.push_back(m.spacing_sum[k]);
    write_csv_row(os, row);
  }
  return os.str();
}

// ---------------------------------------------------------------------------------------------
// Run report. Everything in it is recomputed from the trajectory table, so a report rebuilt from
// trajectory.csv matches the one written alongside it. Angular rates come from backward
// differences of the logged polar angles (the table carries no target velocity).

inline constexpr double kConvergenceThreshold = 1e-2;

struct RunReport {
  std::size_t agents = 0;
  std::size_t samples = 0;
  double final_time = 0.0;
  double final_radius_error = 0.0;
  double final_rate_error = 0.0;
  double final_spacing_error = 0.0;
  std::vector<double> final_radius;
  std::vector<double> final_spacing;
  std::vector<double> final_rate;
  double radius_convergence_time = -1.0;  // -1: never settled below the threshold
  double rate_convergence_time = -1.0;
  double spacing_convergence_time = -1.0;
  double min_pair_distance = 0.0;
  double min_pair_distance_time = 0.0;
  double spacing_sum_deviation = 0.0;  // max_k |sum alpha_hat - 2pi|
  std::string equilibrium = "none";
  bool converged = false;
};

namespace detail {

inline std::vector<double> table_rates(const TrajectoryTable &t, std::size_t k) {
  const auto k0 = k == 0 ? 0 : k - 1;
  const auto k1 = k == 0 ? std::min<std::size_t>(1, t.rows.size() - 1) : k;
  std::vector<double> r(t.agents, 0.0);
  const double h = t.time(k1) - t.time(k0);
  if (h <= 0.0) return r;
  for (std::size_t i = 0; i < t.agents; ++i) {
    r[i] = signed_angle_difference(t.alpha(k1, i), t.alpha(k0, i)) / h;
  }
  return r;
}

inline double settle_time(const std::vector<double> &series, const TrajectoryTable &t) {
  // first sample after which the series stays below the threshold
  std::size_t k = series.size();
  while (k > 0 && series[k - 1] < kConvergenceThreshold) --k;
  if (k == series.size()) return -1.0;
  return t.time(k);
}

}  // namespace detail

inline RunReport build_report(const TrajectoryTable &t, const FormationSpec &spec) {
  if (t.rows.empty()) throw std::invalid_argument("build_report: empty trajectory");
  if (t.agents != spec.size()) throw std::invalid_argument("build_report: agent count mismatch");
  RunReport r;
  r.agents = t.agents;
  r.samples = t.rows.size();
  const auto n = t.agents;
  std::vector<double> radius_err(r.samples), rate_err(r.samples), spacing_err(r.samples);
  r.min_pair_distance = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < r.samples; ++k) {
    const auto rates = detail::table_rates(t, k);
    double re = 0.0, ra = 0.0, sp = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double gap = angular_distance(t.alpha(k, i), t.alpha(k, next_index(i, n)));
      re = std::max(re, std::abs(t.rho(k, i) - spec.radius[i]));
      ra = std::max(ra, std::abs(rates[i] - spec.omega));
      sp = std::max(sp, circular_distance(gap, spec.spacing[i]));
      sum += gap;
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dist = norm(t.position(k, i) - t.position(k, j));
        if (dist < r.min_pair_distance) {
          r.min_pair_distance = dist;
          r.min_pair_distance_time = t.time(k);
        }
      }
    }
    radius_err[k] = re;
    rate_err[k] = ra;
    spacing_err[k] = sp;
    r.spacing_sum_deviation = std::max(r.spacing_sum_deviation, std::abs(sum - kTwoPi));
  }
  const auto last = r.samples - 1;
  r.final_time = t.time(last);
  r.final_radius_error = radius_err[last];
  r.final_rate_error = rate_err[last];
  r.final_spacing_error = spacing_err[last];
  r.final_rate = detail::table_rates(t, last);
  for (std::size_t i = 0; i < n; ++i) {
    r.final_radius.push_back(t.rho(last, i));
    r.final_spacing.push_back(angular_distance(t.alpha(last, i), t.alpha(last, next_index(i, n))));
  }
  r.radius_convergence_time = detail::settle_time(radius_err, t);
  r.rate_convergence_time = detail::settle_time(rate_err, t);
  r.spacing_convergence_time = detail::settle_time(spacing_err, t);
  r.converged = r.final_radius_error < kConvergenceThreshold &&
                r.final_rate_error < kConvergenceThreshold &&
                r.final_spacing_error < kConvergenceThreshold;

  // final-state classification; target velocity from the last two logged target positions
  Vec2 target_vel{};
  if (last > 0) {
    target_vel = (t.target(last) - t.target(last - 1)) * (1.0 / (t.time(last) - t.time(last - 1)));
  }
  std::vector<PolarState> polar;
  for (std::size_t i = 0; i < n; ++i) {
    polar.push_back(polar_state(t.position(last, i) - t.target(last), t.velocity(last, i) - target_vel));
  }
  r.equilibrium = to_string(classify_equilibrium(polar, spec, kConvergenceThreshold).equilibrium);
  return r;
}

inline nlohmann::ordered_json to_json(const RunReport &r) {
  nlohmann::ordered_json j;
  j["agents"] = r.agents;
  j["samples"] = r.samples;
  j["final_time"] = r.final_time;
  j["final_radius_error"] = r.final_radius_error;
  j["final_rate_error"] = r.final_rate_error;
  j["final_spacing_error"] = r.final_spacing_error;
  j["final_radius"] = r.final_radius;
  j["final_spacing"] = r.final_spacing;
  j["final_rate"] = r.final_rate;
  auto time_or_null = [](double t) { return t < 0.0 ? nlohmann::ordered_json() : nlohmann::ordered_json(t); };
  j["radius_convergence_time"] = time_or_null(r.radius_convergence_time);
  j["rate_convergence_time"] = time_or_null(r.rate_convergence_time);
  j["spacing_convergence_time"] = time_or_null(r.spacing_convergence_time);
  j["min_pair_distance"] = r.min_pair_distance;
  j["min_pair_distance_time"] = r.min_pair_distance_time;
  j["spacing_sum_deviation"] = r.spacing_sum_deviation;
  j["equilibrium"] = r.equilibrium;
  j["converged"] = r.converged;
  return j;
}

}  // namespace lcf
