#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "lcformation/dynamics.hpp"
#include "lcformation/formation.hpp"
#include "lcformation/target.hpp"

namespace lcf {

// Reader for the TOML subset used by run configs: [section] headers, `key = value` pairs with
// numbers, booleans, double-quoted strings and (possibly multi-line) flat numeric arrays, and
// `#` comments.

using ConfigValue = std::variant<double, bool, std::string, std::vector<double>>;
using ConfigSection = std::map<std::string, ConfigValue>;
using ConfigDocument = std::map<std::string, ConfigSection>;

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::string strip_comment(const std::string &line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

inline double parse_number(const std::string &text, int line) {
  std::string t;
  for (char c : text) {
    if (c != '_') t.push_back(c);  // TOML digit separators
  }
  if (t == "inf" || t == "+inf" || t == "-inf" || t == "nan") {
    throw ConfigError("line " + std::to_string(line) + ": non-finite value '" + text + "'");
  }
  double v = 0.0;
  const char *first = t.data();
  if (!t.empty() && t[0] == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("line " + std::to_string(line) + ": cannot parse value '" + text + "'");
  }
  return v;
}

inline ConfigValue parse_value(const std::string &text, int line) {
  if (text.empty()) throw ConfigError("line " + std::to_string(line) + ": missing value");
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') {
      throw ConfigError("line " + std::to_string(line) + ": unterminated string");
    }
    return text.substr(1, text.size() - 2);
  }
  if (text == "true") return true;
  if (text == "false") return false;
  if (text.front() == '[') {
    if (text.back() != ']') throw ConfigError("line " + std::to_string(line) + ": unterminated array");
    std::vector<double> out;
    std::string body = text.substr(1, text.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto t = trim(item);
      if (t.empty()) continue;  // trailing comma
      if (t.front() == '[' || t.back() == ']') {
        throw ConfigError("line " + std::to_string(line) + ": nested arrays are not supported");
      }
      out.push_back(parse_number(t, line));
    }
    return out;
  }
  return parse_number(text, line);
}

}  // namespace detail

inline ConfigDocument parse_config(const std::string &text) {
  ConfigDocument doc;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  std::string pending_key;
  std::string pending_value;
  int pending_line = 0;
  auto bracket_balance = [](const std::string &s) {
    int b = 0;
    for (char c : s) b += (c == '[') - (c == ']');
    return b;
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(detail::strip_comment(raw));
    if (!pending_key.empty()) {
      pending_value += " " + line;
      if (bracket_balance(pending_value) == 0) {
        doc[section][pending_key] = detail::parse_value(pending_value, pending_line);
        pending_key.clear();
      }
      continue;
    }
    if (line.empty()) continue;
    if (line.front() == '[' && line.find('=') == std::string::npos) {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": bad section");
      section = detail::trim(line.substr(1, line.size() - 2));
      doc[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    auto key = detail::trim(line.substr(0, eq));
    auto value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (doc[section].count(key)) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    if (!value.empty() && value.front() == '[' && bracket_balance(value) > 0) {
      pending_key = key;
      pending_value = value;
      pending_line = line_no;
      continue;
    }
    doc[section][key] = detail::parse_value(value, line_no);
  }
  if (!pending_key.empty()) {
    throw ConfigError("line " + std::to_string(pending_line) + ": unterminated array");
  }
  return doc;
}

namespace detail {

class SectionReader {
 public:
  SectionReader(const ConfigDocument &doc, std::string name,
                std::set<std::string> allowed)
      : name_(std::move(name)) {
    if (auto it = doc.find(name_); it != doc.end()) section_ = &it->second;
    if (section_) {
      for (const auto &[k, v] : *section_) {
        if (!allowed.count(k)) throw ConfigError("[" + name_ + "]: unknown key '" + k + "'");
      }
    }
  }

  bool has(const std::string &key) const { return section_ && section_->count(key); }

  const ConfigValue &get(const std::string &key) const { return section_->at(key); }

  double number(const std::string &key, double fallback) const {
    if (!has(key)) return fallback;
    if (const auto *v = std::get_if<double>(&get(key))) return *v;
    throw ConfigError("[" + name_ + "] " + key + ": expected a number");
  }

  std::string string(const std::string &key, const std::string &fallback) const {
    if (!has(key)) return fallback;
    if (const auto *v = std::get_if<std::string>(&get(key))) return *v;
    throw ConfigError("[" + name_ + "] " + key + ": expected a string");
  }

  std::vector<double> list(const std::string &key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    if (const auto *v = std::get_if<std::vector<double>>(&get(key))) return *v;
    throw ConfigError("[" + name_ + "] " + key + ": expected an array");
  }

  Vec2 vec2(const std::string &key, Vec2 fallback) const {
    if (!has(key)) return fallback;
    const auto v = list(key, {});
    if (v.size() != 2) throw ConfigError("[" + name_ + "] " + key + ": expected [x, y]");
    return {v[0], v[1]};
  }

 private:
  std::string name_;
  const ConfigSection *section_ = nullptr;
};

inline std::size_t as_count(double v, const std::string &what) {
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) {
    throw ConfigError(what + ": expected a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace detail

/// Builds a SimConfig from a parsed document and validates it (including formation
/// admissibility). Throws ConfigError.
inline SimConfig sim_config_from(const ConfigDocument &doc) {
  for (const auto &[name, sec] : doc) {
    if (name != "formation" && name != "controller" && name != "target" && name != "sim") {
      throw ConfigError("unknown section [" + name + "]");
    }
  }
  SimConfig cfg;

  const detail::SectionReader formation(doc, "formation", {"n", "d", "R", "omega"});
  std::size_t n = 0;
  if (formation.has("n")) n = detail::as_count(formation.number("n", 0), "[formation] n");
  std::vector<double> d;
  bool equal = true;
  if (formation.has("d")) {
    const auto &v = formation.get("d");
    if (const auto *s = std::get_if<std::string>(&v)) {
      if (*s != "equal") throw ConfigError("[formation] d: expected a list or \"equal\"");
    } else if (const auto *l = std::get_if<std::vector<double>>(&v)) {
      d = *l;
      equal = false;
    } else {
      throw ConfigError("[formation] d: expected a list or \"equal\"");
    }
  }
  std::vector<double> radius;
  double radius_scalar = 1.0;
  bool radius_is_list = false;
  if (formation.has("R")) {
    const auto &v = formation.get("R");
    if (const auto *x = std::get_if<double>(&v)) {
      radius_scalar = *x;
    } else if (const auto *l = std::get_if<std::vector<double>>(&v)) {
      radius = *l;
      radius_is_list = true;
    } else {
      throw ConfigError("[formation] R: expected a number or a list");
    }
  }
  if (n == 0) n = !equal ? d.size() : radius.size();
  if (n == 0) throw ConfigError("[formation]: cannot infer N (set n, d or R)");
  if (!radius_is_list) radius.assign(n, radius_scalar);
  if (equal) d.assign(n, kTwoPi / static_cast<double>(n));
  cfg.spec = {std::move(d), std::move(radius), formation.number("omega", 0.0)};
  if (cfg.spec.spacing.size() != n || cfg.spec.radius.size() != n) {
    throw ConfigError("[formation]: d and R must both have N entries");
  }

  const detail::SectionReader controller(doc, "controller",
                                         {"lambda1", "lambda2", "mu", "sigma", "eps_rho"});
  cfg.params.lambda1 = controller.number("lambda1", cfg.params.lambda1);
  cfg.params.lambda2 = controller.number("lambda2", cfg.params.lambda2);
  cfg.params.mu = controller.number("mu", cfg.params.mu);
  cfg.params.sigma = controller.number("sigma", cfg.params.sigma);
  cfg.params.eps_rho = controller.number("eps_rho", cfg.params.eps_rho);

  const detail::SectionReader target(doc, "target", {"kind", "position", "velocity", "center",
                                                     "radius", "rate", "phase", "amplitude",
                                                     "frequency"});
  const auto kind = target.string("kind", "static");
  if (kind == "static") {
    cfg.target = StaticTarget{target.vec2("position", {})};
  } else if (kind == "constant-velocity") {
    cfg.target = ConstantVelocityTarget{target.vec2("position", {}), target.vec2("velocity", {0.05, 0.03})};
  } else if (kind == "circular") {
    cfg.target = CircularTarget{target.vec2("center", {}), target.number("radius", 1.0),
                                target.number("rate", 0.1), target.number("phase", 0.0)};
  } else if (kind == "sinusoidal") {
    cfg.target = SinusoidalTarget{target.vec2("position", {}), target.vec2("velocity", {0.05, 0.0}),
                                  target.vec2("amplitude", {0.0, 0.5}),
                                  target.number("frequency", 0.5)};
  } else {
    throw ConfigError("[target] kind: unknown target kind '" + kind + "'");
  }

  const detail::SectionReader sim(doc, "sim", {"dt", "t_end", "seed", "log_every", "init", "r_min",
                                               "r_max", "v_max", "positions", "velocities"});
  cfg.dt = sim.number("dt", cfg.dt);
  cfg.t_end = sim.number("t_end", cfg.t_end);
  cfg.seed = detail::as_count(sim.number("seed", static_cast<double>(cfg.seed)), "[sim] seed");
  cfg.log_every = detail::as_count(sim.number("log_every", 1.0), "[sim] log_every");
  const auto init = sim.string("init", "random-annulus");
  if (init == "random-annulus") {
    RandomAnnulusInit ann;
    ann.r_min = sim.number("r_min", ann.r_min);
    ann.r_max = sim.number("r_max", ann.r_max);
    ann.v_max = sim.number("v_max", ann.v_max);
    cfg.init = ann;
  } else if (init == "explicit") {
    const auto pos = sim.list("positions", {});
    const auto vel = sim.list("velocities", std::vector<double>(pos.size(), 0.0));
    if (pos.size() != 2 * n || vel.size() != 2 * n) {
      throw ConfigError("[sim]: explicit positions/velocities need 2N numbers each");
    }
    ExplicitInit ex;
    for (std::size_t i = 0; i < n; ++i) {
      ex.agents.push_back({{pos[2 * i], pos[2 * i + 1]}, {vel[2 * i], vel[2 * i + 1]}});
    }
    cfg.init = ex;
  } else {
    throw ConfigError("[sim] init: expected \"random-annulus\" or \"explicit\"");
  }

  validate_config(cfg);
  return cfg;
}

inline SimConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return sim_config_from(parse_config(ss.str()));
}

}  // namespace lcf
