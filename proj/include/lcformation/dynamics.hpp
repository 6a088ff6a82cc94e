#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "lcformation/controller.hpp"
#include "lcformation/formation.hpp"
#include "lcformation/geometry.hpp"
#include "lcformation/integrator.hpp"
#include "lcformation/target.hpp"

namespace lcf {

struct AgentState {
  Vec2 p;
  Vec2 v;
};

/// Positions area-uniform on an annulus about the target, velocities area-uniform in a disk.
struct RandomAnnulusInit {
  double r_min = 0.5;
  double r_max = 2.5;
  double v_max = 0.5;
};

/// Initial states taken verbatim, already in label order.
struct ExplicitInit {
  std::vector<AgentState> agents;
};

using InitialCondition = std::variant<RandomAnnulusInit, ExplicitInit>;

struct SimConfig {
  FormationSpec spec;
  ControllerParams params;
  TargetModel target = StaticTarget{};
  double dt = 1e-3;
  double t_end = 60.0;
  std::uint64_t seed = 1;
  InitialCondition init = RandomAnnulusInit{};
  std::size_t log_every = 1;  // record every k-th step
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a state component stops being finite.
class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(std::size_t step, std::size_t agent)
      : std::runtime_error("non-finite state at step " + std::to_string(step) + " (agent " +
                           std::to_string(agent + 1) + ")"),
        step_(step),
        agent_(agent) {}
  std::size_t step() const { return step_; }
  std::size_t agent() const { return agent_; }

 private:
  std::size_t step_;
  std::size_t agent_;
};

inline std::size_t step_count(const SimConfig &cfg) {
  return static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
}

inline void validate_config(const SimConfig &cfg) {
  const auto rep = validate(cfg.spec);
  if (!rep.admissible) throw ConfigError("inadmissible formation: " + rep.to_string());
  try {
    cfg.params.validate(*std::min_element(cfg.spec.radius.begin(), cfg.spec.radius.end()));
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("dt must be > 0");
  if (!(cfg.t_end >= cfg.dt) || !std::isfinite(cfg.t_end)) throw ConfigError("t_end must be >= dt");
  if (cfg.log_every == 0) throw ConfigError("log_every must be >= 1");
  if (step_count(cfg) % cfg.log_every != 0) {
    throw ConfigError("number of steps must be a multiple of log_every");
  }
  if (const auto *ann = std::get_if<RandomAnnulusInit>(&cfg.init)) {
    if (!(ann->r_min > 0.0)) throw ConfigError("r_min must be > 0");
    if (!(ann->r_max >= ann->r_min)) throw ConfigError("r_max must be >= r_min");
    if (!(ann->v_max >= 0.0)) throw ConfigError("v_max must be >= 0");
  } else {
    const auto &ex = std::get<ExplicitInit>(cfg.init);
    if (ex.agents.size() != cfg.spec.size()) {
      throw ConfigError("explicit initial state count does not match N");
    }
    for (const auto &a : ex.agents) {
      if (!is_finite(a.p) || !is_finite(a.v)) throw ConfigError("explicit initial state not finite");
    }
  }
}

/// Per-agent quantities observed at one instant.
struct AgentDerived {
  double rho = 0.0;
  double alpha = 0.0;
  double spacing = 0.0;  // alpha_hat_i
  double alpha_rate = 0.0;
  double gamma = 0.0;
  Vec2 u;
};

/// Evaluates the controller for every agent from the ring's relative information.
inline std::vector<AgentDerived> evaluate_agents(const std::vector<AgentState> &agents,
                                                 const TargetState &target,
                                                 const FormationSpec &spec,
                                                 const ControllerParams &params) {
  const auto n = agents.size();
  std::vector<AgentDerived> out(n);
  std::vector<Vec2> rel_p(n), rel_v(n);
  for (std::size_t i = 0; i < n; ++i) {
    rel_p[i] = agents[i].p - target.position;
    rel_v[i] = agents[i].v - target.velocity;
    out[i].rho = norm(rel_p[i]);
    out[i].alpha = polar_angle(rel_p[i]);
    out[i].alpha_rate = alpha_rate(rel_p[i], rel_v[i], params.eps_rho);
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i].spacing = angular_distance(out[i].alpha, out[next_index(i, n)].alpha);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ip = next_index(i, n);
    const std::size_t im = prev_index(i, n);
    RelativeObservation obs;
    obs.rel_position = rel_p[i];
    obs.rel_velocity = rel_v[i];
    obs.target_accel = target.accel;
    obs.spacing_ahead = out[i].spacing;
    obs.spacing_behind = out[im].spacing;
    obs.spacing_ahead_rate = out[ip].alpha_rate - out[i].alpha_rate;
    obs.spacing_behind_rate = out[i].alpha_rate - out[im].alpha_rate;
    obs.desired_ahead = spec.spacing[i];
    obs.desired_behind = spec.spacing[im];
    const auto terms = control_terms(obs, spec.radius[i], spec.omega, params);
    out[i].gamma = terms.gamma;
    out[i].u = terms.u;
  }
  return out;
}

struct AgentDerivative {
  Vec2 dp;
  Vec2 dv;
};

/// Double-integrator closed loop: p' = v, v' = u.
inline std::vector<AgentDerivative> closed_loop_derivative(const std::vector<AgentState> &agents,
                                                           const TargetState &target,
                                                           const FormationSpec &spec,
                                                           const ControllerParams &params) {
  const auto derived = evaluate_agents(agents, target, spec, params);
  std::vector<AgentDerivative> out(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) out[i] = {agents[i].v, derived[i].u};
  return out;
}

// Flat layout: [x, y, vx, vy] per agent.
inline Eigen::VectorXd pack(const std::vector<AgentState> &agents) {
  Eigen::VectorXd x(4 * agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    x.segment<4>(4 * i) << agents[i].p.x, agents[i].p.y, agents[i].v.x, agents[i].v.y;
  }
  return x;
}

inline std::vector<AgentState> unpack(const Eigen::VectorXd &x) {
  std::vector<AgentState> agents(static_cast<std::size_t>(x.size() / 4));
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(4 * i);
    agents[i] = {{x[k], x[k + 1]}, {x[k + 2], x[k + 3]}};
  }
  return agents;
}

/// Closed-loop vector field over the packed state, target sampled analytically at time t.
inline auto make_closed_loop_field(const FormationSpec &spec, const ControllerParams &params,
                                   const TargetModel &target) {
  return [&spec, &params, &target](double t, const Eigen::VectorXd &x) -> Eigen::VectorXd {
    const auto d = closed_loop_derivative(unpack(x), target_state(target, t), spec, params);
    Eigen::VectorXd dx(x.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      dx.segment<4>(4 * i) << d[i].dp.x, d[i].dp.y, d[i].dv.x, d[i].dv.y;
    }
    return dx;
  };
}

/// Converging part only (no ring neighbors): the single-agent closed loop.
inline Vec2 single_agent_input(const AgentState &agent, const TargetState &target, double radius,
                               double omega, const ControllerParams &params) {
  RelativeObservation obs;
  obs.rel_position = agent.p - target.position;
  obs.rel_velocity = agent.v - target.velocity;
  obs.target_accel = target.accel;
  obs.desired_ahead = obs.desired_behind = 1.0;  // f vanishes with zero spacing terms
  return control_input(obs, radius, omega, params);
}

inline auto make_single_agent_field(double radius, double omega, const ControllerParams &params,
                                    const TargetModel &target) {
  return [radius, omega, &params, &target](double t, const Eigen::Vector4d &x) -> Eigen::Vector4d {
    const AgentState a{{x[0], x[1]}, {x[2], x[3]}};
    const Vec2 u = single_agent_input(a, target_state(target, t), radius, omega, params);
    return {x[2], x[3], u.x, u.y};
  };
}

/// Integrates the single-agent loop with fixed-step RK4 and returns the final state.
inline AgentState integrate_single_agent(AgentState initial, double radius, double omega,
                                         const ControllerParams &params, const TargetModel &target,
                                         double dt, double t_end) {
  const auto field = make_single_agent_field(radius, omega, params, target);
  Eigen::Vector4d x{initial.p.x, initial.p.y, initial.v.x, initial.v.y};
  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  for (std::size_t k = 0; k < steps; ++k) {
    x = rk4_step(field, static_cast<double>(k) * dt, x, dt);
  }
  return {{x[0], x[1]}, {x[2], x[3]}};
}

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<AgentState>> agents;
  std::vector<TargetState> target;
  std::vector<std::vector<AgentDerived>> derived;

  std::size_t size() const { return times.size(); }
  std::size_t agent_count() const { return agents.empty() ? 0 : agents.front().size(); }
};

/// Initial agent states in label order.
inline std::vector<AgentState> initial_states(const SimConfig &cfg) {
  if (const auto *ex = std::get_if<ExplicitInit>(&cfg.init)) return ex->agents;
  const auto &ann = std::get<RandomAnnulusInit>(cfg.init);
  const auto n = cfg.spec.size();
  const Vec2 origin = target_state(cfg.target, 0.0).position;
  const Vec2 origin_vel = target_state(cfg.target, 0.0).velocity;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<AgentState> raw(n);
  for (auto &a : raw) {
    const double r2 = ann.r_min * ann.r_min + uni(rng) * (ann.r_max * ann.r_max - ann.r_min * ann.r_min);
    const double th = kTwoPi * uni(rng);
    const double s = ann.v_max * std::sqrt(uni(rng));
    const double ph = kTwoPi * uni(rng);
    a.p = origin + std::sqrt(r2) * Vec2{std::cos(th), std::sin(th)};
    a.v = origin_vel + s * Vec2{std::cos(ph), std::sin(ph)};
  }
  std::vector<Vec2> positions(n);
  std::transform(raw.begin(), raw.end(), positions.begin(), [](const AgentState &a) { return a.p; });
  const auto order = assign_labels(positions, origin, cfg.seed);
  std::vector<AgentState> labeled(n);
  for (std::size_t k = 0; k < n; ++k) labeled[k] = raw[order[k]];
  return labeled;
}

/// Fixed-step RK4 over all agents jointly. Throws ConfigError or NumericalAbort.
inline Trajectory integrate(const SimConfig &cfg) {
  validate_config(cfg);
  const auto steps = step_count(cfg);
  const auto field = make_closed_loop_field(cfg.spec, cfg.params, cfg.target);

  Trajectory traj;
  const std::size_t samples = steps / cfg.log_every + 1;
  traj.times.reserve(samples);
  traj.agents.reserve(samples);
  traj.target.reserve(samples);
  traj.derived.reserve(samples);

  auto record = [&](double t, std::vector<AgentState> agents) {
    const TargetState ts = target_state(cfg.target, t);
    traj.derived.push_back(evaluate_agents(agents, ts, cfg.spec, cfg.params));
    traj.times.push_back(t);
    traj.agents.push_back(std::move(agents));
    traj.target.push_back(ts);
  };

  Eigen::VectorXd x = pack(initial_states(cfg));
  record(0.0, unpack(x));
  for (std::size_t k = 0; k < steps; ++k) {
    x = rk4_step(field, static_cast<double>(k) * cfg.dt, x, cfg.dt);
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      if (!std::isfinite(x[j])) throw NumericalAbort(k + 1, static_cast<std::size_t>(j / 4));
    }
    if ((k + 1) % cfg.log_every == 0) record(static_cast<double>(k + 1) * cfg.dt, unpack(x));
  }
  return traj;
}

/// Per-step error series used for plots, reports and acceptance.
struct MetricSeries {
  std::vector<double> times;
  std::vector<std::vector<double>> radius_error;   // rho_i - R_i
  std::vector<std::vector<double>> rate_error;     // alpha_rate_i - omega
  std::vector<std::vector<double>> spacing_error;  // signed circular alpha_hat_i - d_i
  std::vector<double> min_pair_distance;
  std::vector<double> spacing_sum;  // sum_i alpha_hat_i
};

inline double min_pairwise_distance(const std::vector<AgentState> &agents) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < agents.size(); ++i) {
    for (std::size_t j = i + 1; j < agents.size(); ++j) {
      best = std::min(best, norm(agents[i].p - agents[j].p));
    }
  }
  return best;
}

inline MetricSeries metrics(const Trajectory &traj, const FormationSpec &spec) {
  MetricSeries m;
  m.times = traj.times;
  const auto n = traj.agent_count();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    std::vector<double> re(n), ra(n), sp(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto &d = traj.derived[k][i];
      re[i] = d.rho - spec.radius[i];
      ra[i] = d.alpha_rate - spec.omega;
      sp[i] = signed_angle_difference(d.spacing, spec.spacing[i]);
      sum += d.spacing;
    }
    m.radius_error.push_back(std::move(re));
    m.rate_error.push_back(std::move(ra));
    m.spacing_error.push_back(std::move(sp));
    m.min_pair_distance.push_back(min_pairwise_distance(traj.agents[k]));
    m.spacing_sum.push_back(sum);
  }
  return m;
}

inline double max_abs(const std::vector<double> &v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace lcf
