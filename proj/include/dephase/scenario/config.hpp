#pragma once

// Scenario configuration: a JSON document with four blocks.
//
//   {
//     "scenario": "ons1",
//     "physics": {"T": 0.1 | [..], "mu": 0 | [..], "lambda": 0.05 | [..], "g": 1,
//                 "delta_T": 0, "delta_mu": 0, "statistics": "FD" | "Boltzmann",
//                 "n_eq": 0.5, "delta_n": 0.1, "linear_response_threshold": 0.05,
//                 "ft_convention": "algebraic" | "as_printed"},
//     "grids": {"t": [..] | {"start": 0, "stop": 10, "count": 101},
//               "mu": [..] | {...},
//               "quadrature": {"abs_tol": .., "rel_tol": .., "max_panels": ..,
//                              "nodes_per_panel": .., "base_panels": ..}},
//     "output": {"path": "out", "precision": 12},
//     "tolerance": 0.05
//   }
//
// Unknown keys anywhere are rejected. Scalars given where a list is accepted
// are promoted to one-element lists; each list entry is one output panel.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dephase/error.hpp"
#include "dephase/fluctuation.hpp"
#include "dephase/quadrature.hpp"
#include "dephase/transport.hpp"

namespace dephase::scenario {

enum class ScenarioId { ons1, onsevo1, onsevo2, entroevo, entroprod, mutint, onsteste1, onsteste2, custom };

inline constexpr std::string_view kScenarioNames[] = {"ons1",      "onsevo1",   "onsevo2",
                                                      "entroevo",  "entroprod", "mutint",
                                                      "onsteste1", "onsteste2", "custom"};

inline std::string to_string(ScenarioId id) { return std::string(kScenarioNames[static_cast<int>(id)]); }

inline ScenarioId scenario_from_string(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kScenarioNames); ++i) {
    if (kScenarioNames[i] == name) return static_cast<ScenarioId>(i);
  }
  throw ConfigError("scenario: unknown id '" + std::string(name) + "'");
}

struct PhysicsParams {
  std::vector<double> temperatures{0.1};
  std::vector<double> chemical_potentials{0.0};
  std::vector<double> dephasing{0.05};
  double coupling = 1.0;
  double delta_t = 0.0;
  double delta_mu = 0.0;
  Statistics statistics = Statistics::fermi_dirac;
  double n_eq = 0.5;
  double delta_n = 0.1;
  double linear_response_threshold = 0.05;
  FtConvention ft_convention = FtConvention::algebraic;
};

struct Grids {
  std::vector<double> t;
  std::vector<double> mu;
  QuadratureSpec quadrature{};
};

struct OutputSpec {
  std::string path = ".";
  int precision = 12;
};

struct ScenarioConfig {
  ScenarioId id = ScenarioId::custom;
  PhysicsParams physics{};
  Grids grids{};
  OutputSpec output{};
  double tolerance = 0.05;
  std::vector<std::string> warnings;
};

/// Evenly spaced grid with `count` points including both ends.
inline std::vector<double> linspace(double start, double stop, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {start};
  std::vector<double> out(count);
  const double step = (stop - start) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = start + step * static_cast<double>(i);
  out.back() = stop;
  return out;
}

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& obj, std::string_view where,
                           std::initializer_list<std::string_view> known) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (const auto& item : obj.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw ConfigError(std::string(where) + ": unknown key '" + item.key() + "'");
    }
  }
}

inline std::string field(std::string_view block, std::string_view key) {
  return std::string(block) + "." + std::string(key);
}

inline double number(const json& v, const std::string& name) {
  if (!v.is_number()) throw ConfigError(name + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(name + ": must be finite");
  return x;
}

inline std::size_t count(const json& v, const std::string& name) {
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw ConfigError(name + ": expected a positive integer");
  }
  return static_cast<std::size_t>(v.get<long long>());
}

inline void require_increasing(const std::vector<double>& xs, const std::string& name) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) {
      throw ConfigError(name + ": grid must be strictly increasing (entry " + std::to_string(i) + ")");
    }
  }
}

inline std::vector<double> number_list(const json& v, const std::string& name) {
  std::vector<double> out;
  if (v.is_array()) {
    if (v.empty()) throw ConfigError(name + ": list must not be empty");
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], name + "[" + std::to_string(i) + "]"));
  } else {
    out.push_back(number(v, name));
  }
  return out;
}

inline std::vector<double> grid(const json& v, const std::string& name) {
  std::vector<double> out;
  if (v.is_object()) {
    reject_unknown(v, name, {"start", "stop", "count"});
    for (const char* key : {"start", "stop", "count"}) {
      if (!v.contains(key)) throw ConfigError(name + ": range needs '" + key + "'");
    }
    out = linspace(number(v["start"], name + ".start"), number(v["stop"], name + ".stop"),
                   count(v["count"], name + ".count"));
  } else {
    if (!v.is_array()) throw ConfigError(name + ": expected a list or {start, stop, count}");
    out = number_list(v, name);
  }
  require_increasing(out, name);
  return out;
}

inline Statistics statistics(const json& v, const std::string& name) {
  if (!v.is_string()) throw ConfigError(name + ": expected \"FD\" or \"Boltzmann\"");
  std::string s = v.get<std::string>();
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "fd" || s == "fermi_dirac") return Statistics::fermi_dirac;
  if (s == "boltzmann") return Statistics::boltzmann;
  throw ConfigError(name + ": expected \"FD\" or \"Boltzmann\", got '" + v.get<std::string>() + "'");
}

inline FtConvention convention(const json& v, const std::string& name) {
  if (v == "algebraic") return FtConvention::algebraic;
  if (v == "as_printed") return FtConvention::as_printed;
  throw ConfigError(name + ": expected \"algebraic\" or \"as_printed\"");
}

inline void parse_physics(const json& p, PhysicsParams& out) {
  reject_unknown(p, "physics",
                 {"T", "mu", "lambda", "g", "delta_T", "delta_mu", "statistics", "n_eq", "delta_n",
                  "linear_response_threshold", "ft_convention"});
  const auto f = [](std::string_view k) { return field("physics", k); };
  if (p.contains("T")) out.temperatures = number_list(p["T"], f("T"));
  if (p.contains("mu")) out.chemical_potentials = number_list(p["mu"], f("mu"));
  if (p.contains("lambda")) out.dephasing = number_list(p["lambda"], f("lambda"));
  if (p.contains("g")) out.coupling = number(p["g"], f("g"));
  if (p.contains("delta_T")) out.delta_t = number(p["delta_T"], f("delta_T"));
  if (p.contains("delta_mu")) out.delta_mu = number(p["delta_mu"], f("delta_mu"));
  if (p.contains("statistics")) out.statistics = statistics(p["statistics"], f("statistics"));
  if (p.contains("n_eq")) out.n_eq = number(p["n_eq"], f("n_eq"));
  if (p.contains("delta_n")) out.delta_n = number(p["delta_n"], f("delta_n"));
  if (p.contains("linear_response_threshold")) {
    out.linear_response_threshold = number(p["linear_response_threshold"], f("linear_response_threshold"));
  }
  if (p.contains("ft_convention")) out.ft_convention = convention(p["ft_convention"], f("ft_convention"));

  for (double temp : out.temperatures) {
    if (!(temp > 0.0)) throw ConfigError("physics.T: must be > 0");
  }
  for (double lambda : out.dephasing) {
    if (!(lambda >= 0.0)) throw ConfigError("physics.lambda: must be >= 0");
  }
  if (!(out.n_eq > 0.0 && out.n_eq < 1.0)) throw ConfigError("physics.n_eq: must lie in (0, 1)");
  if (!(out.delta_n >= 0.0 && out.n_eq - 0.5 * out.delta_n >= 0.0 && out.n_eq + 0.5 * out.delta_n <= 1.0)) {
    throw ConfigError("physics.delta_n: n_eq +- delta_n/2 must stay in [0, 1]");
  }
  if (!(out.linear_response_threshold > 0.0)) {
    throw ConfigError("physics.linear_response_threshold: must be > 0");
  }
}

inline void parse_quadrature(const json& q, QuadratureSpec& out) {
  reject_unknown(q, "grids.quadrature", {"abs_tol", "rel_tol", "max_panels", "nodes_per_panel", "base_panels"});
  const auto f = [](std::string_view k) { return field("grids.quadrature", k); };
  if (q.contains("abs_tol")) out.abs_tol = number(q["abs_tol"], f("abs_tol"));
  if (q.contains("rel_tol")) out.rel_tol = number(q["rel_tol"], f("rel_tol"));
  if (q.contains("max_panels")) out.max_panels = count(q["max_panels"], f("max_panels"));
  if (q.contains("nodes_per_panel")) out.nodes_per_panel = count(q["nodes_per_panel"], f("nodes_per_panel"));
  if (q.contains("base_panels")) out.base_panels = count(q["base_panels"], f("base_panels"));
  if (!(out.abs_tol > 0.0)) throw ConfigError("grids.quadrature.abs_tol: must be > 0");
  if (!(out.rel_tol >= 0.0)) throw ConfigError("grids.quadrature.rel_tol: must be >= 0");
  if (out.nodes_per_panel < 2) throw ConfigError("grids.quadrature.nodes_per_panel: must be >= 2");
}

inline void linear_response_warnings(ScenarioConfig& cfg) {
  const PhysicsParams& p = cfg.physics;
  for (double temp : p.temperatures) {
    if (std::abs(p.delta_t / temp) > p.linear_response_threshold) {
      cfg.warnings.push_back("|delta_T / T| = " + std::to_string(std::abs(p.delta_t / temp)) +
                             " exceeds the linear-response threshold " +
                             std::to_string(p.linear_response_threshold));
    }
  }
  for (double mu : p.chemical_potentials) {
    if (mu != 0.0 && std::abs(p.delta_mu / mu) > p.linear_response_threshold) {
      cfg.warnings.push_back("|delta_mu / mu| = " + std::to_string(std::abs(p.delta_mu / mu)) +
                             " exceeds the linear-response threshold " +
                             std::to_string(p.linear_response_threshold));
    }
  }
}

}  // namespace detail

/// Default grids for a scenario when the config leaves them out.
inline void fill_default_grids(ScenarioConfig& cfg) {
  if (cfg.grids.t.empty()) {
    switch (cfg.id) {
      case ScenarioId::onsteste2: cfg.grids.t = linspace(0.0, 10.0, 101); break;
      case ScenarioId::entroevo:
      case ScenarioId::entroprod:
      case ScenarioId::mutint: cfg.grids.t = linspace(0.0, 20.0, 401); break;
      default: cfg.grids.t = linspace(0.0, 100.0, 201); break;
    }
  }
  if (cfg.grids.mu.empty()) {
    cfg.grids.mu = cfg.id == ScenarioId::onsteste1 ? linspace(-1.9, 1.9, 191) : linspace(-4.0, 4.0, 401);
  }
}

/// Parses a JSON config, filling defaults and validating ranges. Throws
/// ConfigError naming the offending field.
inline ScenarioConfig parse_config(const nlohmann::json& doc) {
  using detail::json;
  detail::reject_unknown(doc, "config", {"scenario", "physics", "grids", "output", "tolerance"});
  ScenarioConfig cfg;
  if (!doc.contains("scenario") || !doc["scenario"].is_string()) {
    throw ConfigError("scenario: required string naming the scenario");
  }
  cfg.id = scenario_from_string(doc["scenario"].get<std::string>());
  if (doc.contains("physics")) detail::parse_physics(doc["physics"], cfg.physics);
  if (doc.contains("grids")) {
    const json& g = doc["grids"];
    detail::reject_unknown(g, "grids", {"t", "mu", "quadrature"});
    if (g.contains("t")) cfg.grids.t = detail::grid(g["t"], "grids.t");
    if (g.contains("mu")) cfg.grids.mu = detail::grid(g["mu"], "grids.mu");
    if (g.contains("quadrature")) detail::parse_quadrature(g["quadrature"], cfg.grids.quadrature);
    for (double t : cfg.grids.t) {
      if (!(t >= 0.0)) throw ConfigError("grids.t: times must be >= 0");
    }
  }
  if (doc.contains("output")) {
    const json& o = doc["output"];
    detail::reject_unknown(o, "output", {"path", "precision"});
    if (o.contains("path")) {
      if (!o["path"].is_string()) throw ConfigError("output.path: expected a string");
      cfg.output.path = o["path"].get<std::string>();
    }
    if (o.contains("precision")) {
      if (!o["precision"].is_number_integer()) throw ConfigError("output.precision: expected an integer");
      cfg.output.precision = o["precision"].get<int>();
    }
  }
  if (cfg.output.precision < 6 || cfg.output.precision > 17) {
    throw ConfigError("output.precision: must be between 6 and 17 significant digits");
  }
  if (doc.contains("tolerance")) {
    cfg.tolerance = detail::number(doc["tolerance"], "tolerance");
    if (!(cfg.tolerance > 0.0)) throw ConfigError("tolerance: must be > 0");
  }
  fill_default_grids(cfg);
  detail::linear_response_warnings(cfg);
  return cfg;
}

inline ScenarioConfig parse_config(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

// String literals would otherwise be ambiguous between json and string_view.
inline ScenarioConfig parse_config(const char* text) { return parse_config(std::string_view(text)); }

/// The parameter set of each figure, as given in its caption.
inline nlohmann::json figure_preset(ScenarioId id) {
  using nlohmann::json;
  json doc = {{"scenario", to_string(id)}};
  switch (id) {
    case ScenarioId::ons1:
      doc["physics"] = {{"T", {0.1, 0.5}}, {"lambda", 0.05}, {"g", 1.0}};
      doc["grids"] = {{"mu", {{"start", -4.0}, {"stop", 4.0}, {"count", 401}}}};
      break;
    case ScenarioId::onsevo1:
      doc["physics"] = {{"T", 0.005}, {"lambda", 0.05}, {"mu", {0.0, 1.0, 1.9}}, {"g", 1.0}};
      break;
    case ScenarioId::onsevo2:
      doc["physics"] = {{"T", 0.005}, {"lambda", {0.05, 0.0}}, {"mu", {0.0, 1.0, 1.9}}, {"g", 1.0}};
      break;
    case ScenarioId::entroevo:
      doc["physics"] = {{"n_eq", 0.1}, {"delta_n", 0.01}, {"lambda", {0.2, 0.0}}, {"g", 1.0}};
      break;
    case ScenarioId::entroprod:
    case ScenarioId::mutint:
      doc["physics"] = {{"n_eq", 0.5}, {"delta_n", 0.1}, {"lambda", {0.2, 0.0}}, {"g", 1.0}};
      break;
    case ScenarioId::onsteste1:
      doc["physics"] = {{"T", {0.1, 0.25}}, {"lambda", 0.35}, {"g", 1.0}};
      break;
    case ScenarioId::onsteste2:
      doc["physics"] = {{"T", 0.1}, {"lambda", 0.35}, {"g", 1.0}, {"mu", {-1.5, -0.75, 0.0, 0.75, 1.5}}};
      break;
    case ScenarioId::custom: break;
  }
  return doc;
}

/// Applies a dotted-path override such as "physics.T=[0.1,0.2]". The value
/// is read as JSON, falling back to a plain string.
inline void apply_override(nlohmann::json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(assignment) + "': expected key=value");
  }
  const std::string path(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  nlohmann::json value = nlohmann::json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  nlohmann::json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("override '" + path + "': empty key segment");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    if (!node->contains(key)) (*node)[key] = nlohmann::json::object();
    node = &(*node)[key];
    if (!node->is_object()) throw ConfigError("override '" + path + "': '" + key + "' is not a block");
    start = dot + 1;
  }
}

}  // namespace dephase::scenario
