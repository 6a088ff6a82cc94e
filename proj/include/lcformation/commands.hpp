#pragma once

#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lcformation/config.hpp"
#include "lcformation/dynamics.hpp"
#include "lcformation/scenarios.hpp"
#include "lcformation/spectral.hpp"
#include "lcformation/stability.hpp"
#include "lcformation/svg.hpp"
#include "lcformation/trajectory_io.hpp"

namespace lcf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalAbort = 3;

namespace detail {

inline std::string fmt(double v, const char *spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

inline std::string fmt(std::complex<double> z) {
  if (std::abs(z.imag()) < 1e-12) return fmt(z.real());
  return fmt(z.real()) + (z.imag() < 0 ? " - " : " + ") + fmt(std::abs(z.imag())) + "i";
}

inline std::string fmt_poly(const Polynomial &c) {
  std::string s = "[";
  for (std::size_t k = 0; k < c.size(); ++k) s += (k ? ", " : "") + fmt(c[k]);
  return s + "]";
}

inline void write_file(const std::filesystem::path &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

inline svg::Panel trajectory_panel(const Trajectory &traj) {
  svg::Panel p{"Agent trajectories", "x", "y", {}, true};
  const auto n = traj.agent_count();
  for (std::size_t i = 0; i < n; ++i) {
    svg::Series s{"agent " + std::to_string(i + 1), {}, {}};
    for (const auto &frame : traj.agents) {
      s.x.push_back(frame[i].p.x);
      s.y.push_back(frame[i].p.y);
    }
    p.series.push_back(std::move(s));
  }
  svg::Series t{"target", {}, {}};
  for (const auto &ts : traj.target) {
    t.x.push_back(ts.position.x);
    t.y.push_back(ts.position.y);
  }
  p.series.push_back(std::move(t));
  return p;
}

inline std::vector<svg::Panel> metric_panels(const MetricSeries &m) {
  const auto n = m.radius_error.empty() ? 0 : m.radius_error.front().size();
  auto per_agent = [&](const std::vector<std::vector<double>> &rows, std::string title,
                       std::string ylabel) {
    svg::Panel p{std::move(title), "t", std::move(ylabel), {}, false};
    for (std::size_t i = 0; i < n; ++i) {
      svg::Series s{"agent " + std::to_string(i + 1), m.times, {}};
      for (const auto &r : rows) s.y.push_back(r[i]);
      p.series.push_back(std::move(s));
    }
    return p;
  };
  std::vector<svg::Panel> panels;
  panels.push_back(per_agent(m.radius_error, "Distance to target minus desired radius", "rho - R"));
  panels.push_back(per_agent(m.spacing_error, "Angular spacing error", "spacing - d"));
  panels.push_back({"Minimum inter-agent distance", "t", "distance",
                    {{"min pair", m.times, m.min_pair_distance}}, false});
  return panels;
}

}  // namespace detail

struct RunOptions {
  std::string config;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> t_end;
};

inline int cmd_run(const RunOptions &opt, std::ostream &out, std::ostream &err) {
  SimConfig cfg;
  try {
    cfg = load_config(opt.config);
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.dt) cfg.dt = *opt.dt;
    if (opt.t_end) cfg.t_end = *opt.t_end;
    validate_config(cfg);
  } catch (const std::invalid_argument &e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  Trajectory traj;
  try {
    traj = integrate(cfg);
  } catch (const NumericalAbort &e) {
    err << "numerical abort: non-finite state of agent " << e.agent() + 1 << " at step " << e.step()
        << '\n';
    return kExitNumericalAbort;
  }

  const std::filesystem::path dir(opt.out_dir);
  std::filesystem::create_directories(dir);
  const auto table = to_table(traj);
  const auto m = metrics(traj, cfg.spec);
  const auto report = build_report(table, cfg.spec);
  std::ostringstream csv;
  write_trajectory_csv(csv, table);
  detail::write_file(dir / "trajectory.csv", csv.str());
  detail::write_file(dir / "metrics.csv", metrics_csv(m));
  detail::write_file(dir / "report.json", to_json(report).dump(2) + "\n");
  detail::write_file(dir / "trajectory.svg", svg::emit_svg(detail::trajectory_panel(traj)));
  detail::write_file(dir / "metrics.svg", svg::emit_svg(detail::metric_panels(m)));

  out << "agents " << report.agents << ", samples " << report.samples << ", t_end "
      << detail::fmt(report.final_time) << '\n';
  out << "final |rho-R| " << detail::fmt(report.final_radius_error, "%.3e") << ", |rate-omega| "
      << detail::fmt(report.final_rate_error, "%.3e") << ", spacing "
      << detail::fmt(report.final_spacing_error, "%.3e") << '\n';
  out << "min pair distance " << detail::fmt(report.min_pair_distance, "%.4g") << ", equilibrium "
      << report.equilibrium << ", converged " << (report.converged ? "yes" : "no") << '\n';
  out << "wrote " << dir.string() << "/{trajectory.csv,metrics.csv,report.json,trajectory.svg,metrics.svg}\n";
  return kExitOk;
}

struct SpectrumOptions {
  std::size_t n = 6;
  std::string d = "equal";  // "equal", "random", or a comma-separated list of radians
  std::uint64_t seed = 1;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
};

inline std::vector<double> parse_spacing(const SpectrumOptions &opt) {
  if (opt.d == "equal") {
    if (opt.n < 2) throw std::invalid_argument("n must be >= 2");
    return std::vector<double>(opt.n, kTwoPi / static_cast<double>(opt.n));
  }
  if (opt.d == "random") return random_spacing(opt.n, opt.seed);
  std::vector<double> d;
  std::istringstream in(opt.d);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    d.push_back(lcf::detail::parse_number(lcf::detail::trim(cell), 0));
  }
  return d;
}

inline int cmd_analyze_spectrum(const SpectrumOptions &opt, std::ostream &out, std::ostream &err) {
  std::vector<double> d;
  try {
    d = parse_spacing(opt);
  } catch (const std::exception &e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  const FormationSpec spec{d, std::vector<double>(d.size(), 1.0), 0.0};
  const auto adm = validate(spec);
  if (!adm.admissible || d.size() < 2) {
    err << "inadmissible spacing: " << (d.size() < 2 ? "need N >= 2" : adm.to_string()) << '\n';
    return kExitConfigError;
  }
  if (!(opt.lambda1 > 0.0) || !(opt.lambda2 > 0.0)) {
    err << "config error: lambda1 and lambda2 must be > 0\n";
    return kExitConfigError;
  }

  const auto r = spectral_report(d, opt.lambda1, opt.lambda2);
  const auto &ls = r.laplacian;
  auto flag = [](bool ok) { return ok ? "pass" : "FAIL"; };
  out << "N = " << d.size() << ", lambda1 = " << detail::fmt(opt.lambda1)
      << ", lambda2 = " << detail::fmt(opt.lambda2) << '\n';
  out << "d =";
  for (double x : d) out << ' ' << detail::fmt(x);
  out << '\n';
  out << "L eigenvalues:";
  for (double x : ls.eigenvalues) out << ' ' << detail::fmt(std::abs(x) < 1e-12 ? 0.0 : x);
  out << '\n';
  out << "  real spectrum: " << flag(ls.real) << " (max |imag| " << detail::fmt(ls.max_imag, "%.2e")
      << ")\n";
  out << "  in [0, 2]: " << flag(ls.in_range) << '\n';
  out << "  zero simple: " << flag(ls.zero_simple) << '\n';
  if (ls.two_expected) {
    out << "  2 present (N even): " << flag(ls.two_present) << '\n';
  } else {
    out << "  2 absent (N odd): " << flag(!ls.two_present) << '\n';
  }
  out << "Phi~ eigenvalues:";
  for (const auto &z : r.phi.eigenvalues) out << "\n  " << detail::fmt(z);
  out << '\n';
  out << "  single zero eigenvalue: " << flag(r.phi.zero_count == 1) << " (count "
      << r.phi.zero_count << ")\n";
  out << "  others in open left half-plane: " << flag(r.phi.max_nonzero_real < -kSpectrumTolerance)
      << " (max Re " << detail::fmt(r.phi.max_nonzero_real, "%.3e") << ")\n";
  out << "  closed form matches eigensolver: " << flag(r.closed_form_mismatch < 1e-8) << " ("
      << detail::fmt(r.closed_form_mismatch, "%.2e") << ")\n";
  out << "consensus weights p:";
  for (double p : r.left_null_vector) out << ' ' << detail::fmt(p);
  out << '\n';
  const bool ok = r.passed();
  out << (ok ? "all flags pass" : "some flags FAIL") << '\n';
  return ok ? kExitOk : kExitCheckFailed;
}

struct StabilityOptions {
  double omega = 1.0;
  double mu = 1.0;
  double radius = 1.0;
  double sigma = -1.0;
};

inline void print_routh(const RouthResult &rr, std::ostream &out) {
  const auto degree = rr.table.rows.size() - 1;
  for (std::size_t k = 0; k < rr.table.rows.size(); ++k) {
    out << "  s^" << degree - k << ":";
    for (double x : rr.table.rows[k]) out << ' ' << detail::fmt(x, "%12.6g");
    out << '\n';
  }
  if (rr.table.epsilon_pivot) out << "  (zero pivot replaced by epsilon)\n";
  if (rr.table.boundary) out << "  (all-zero row: roots on or symmetric about the imaginary axis)\n";
}

inline int cmd_stability(const StabilityOptions &opt, std::ostream &out, std::ostream &err) {
  if (!(opt.mu > 0.0) || !(opt.radius > 0.0) || !std::isfinite(opt.omega) ||
      !std::isfinite(opt.sigma)) {
    err << "config error: need mu > 0, R > 0 and finite omega, sigma\n";
    return kExitConfigError;
  }
  out << "omega = " << detail::fmt(opt.omega) << ", mu = " << detail::fmt(opt.mu)
      << ", R = " << detail::fmt(opt.radius) << ", sigma = " << detail::fmt(opt.sigma) << '\n';

  if (opt.omega != 0.0) {
    const auto c = single_agent_charpoly_Ia(opt.omega, opt.mu, opt.radius, opt.sigma);
    const auto roots = polynomial_roots(c);
    const bool positive = std::all_of(c.begin(), c.end(), [](double x) { return x > 0.0; });
    const double margin = cubic_hurwitz_margin(c);
    const bool stable = positive && margin > 0.0 && count_rhp_roots(roots, -1e-9) == 0;
    out << "circling equilibrium: characteristic polynomial " << detail::fmt_poly(c) << '\n';
    out << "  coefficients positive: " << (positive ? "yes" : "no")
        << ", a1*a2 - a0*a3 = " << detail::fmt(margin) << '\n';
    out << "  roots:";
    for (const auto &z : roots) out << "  " << detail::fmt(z);
    out << '\n';
    out << "  verdict: " << (stable ? "stable" : "not asymptotically stable") << '\n';
  } else {
    const auto roots = single_agent_roots_Ib(opt.mu, opt.radius, opt.sigma, 0.0);
    bool stable = true;
    for (const auto &z : roots) stable = stable && z.real() < -1e-9;
    out << "rest equilibrium (beta = 0): (s + 1)(s^2 + s + "
        << detail::fmt(opt.mu * std::pow(opt.radius, opt.sigma + 1.0)) << ")\n";
    out << "  roots:";
    for (const auto &z : roots) out << "  " << detail::fmt(z);
    out << '\n';
    out << "  verdict: " << (stable ? "stable (all Re < 0)" : "not asymptotically stable") << '\n';
  }

  const auto c0 = origin_charpoly(opt.omega, opt.mu, opt.radius);
  const auto rr = routh_sign_changes(c0);
  const int rhp_roots = count_rhp_roots(polynomial_roots(c0));
  out << "target point with sigma = 0: characteristic polynomial " << detail::fmt_poly(c0) << '\n';
  out << "  Routh array:\n";
  print_routh(rr, out);
  out << "  sign changes: " << rr.rhp_count << ", RHP roots (companion matrix): " << rhp_roots << '\n';
  out << "  verdict: "
      << (rr.rhp_count > 0 ? "unstable (" + std::to_string(rr.rhp_count) + " RHP)" : "no RHP roots")
      << '\n';
  return kExitOk;
}

}  // namespace lcf::cli
