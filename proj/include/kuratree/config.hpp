#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kuratree/dynamics.hpp"
#include "kuratree/errors.hpp"
#include "kuratree/events.hpp"
#include "kuratree/graph.hpp"

namespace kuratree {

/// Optional event-controller block of an experiment.
struct EventSettings {
  double delta_gain = 1.0;
  double epsilon = 0.0;
  bool enabled = true;

  bool operator==(const EventSettings&) const = default;
};

/// Output destinations; dir falls back to the KURATREE_OUT_DIR environment
/// variable and then to the working directory.
struct OutputSettings {
  std::string dir;
  std::string prefix = "run";

  bool operator==(const OutputSettings&) const = default;
};

/// One experiment as described by a config file. Node labels in the file are
/// index_base-based (default 1); edges and theta indices are stored 0-based
/// internally and mapped back on re-serialization.
struct ExperimentConfig {
  std::string name;
  int n = 0;
  int index_base = 1;
  std::vector<std::pair<int, int>> edges;  // 0-based
  Vec omega;
  std::optional<double> kappa;
  double epsilon = 0.0;
  std::optional<Vec> theta0;
  SimConfig integrator;
  std::optional<EventSettings> events;
  OutputSettings output;

  bool operator==(const ExperimentConfig&) const = default;

  [[nodiscard]] TreeGraph graph() const { return build_tree(n, edges); }
  [[nodiscard]] FrequencyAssignment frequencies() const { return make_frequencies(omega); }

  [[nodiscard]] double require_kappa() const {
    if (!kappa) throw ConfigError("config needs a 'kappa' field for this command");
    return *kappa;
  }

  [[nodiscard]] Vec require_theta0() const {
    if (!theta0) throw ConfigError("config needs a 'theta0' field for this command");
    return *theta0;
  }

  [[nodiscard]] EventConfig event_config() const {
    if (!events) throw ConfigError("config needs an 'events' block for this command");
    return make_event_config(require_kappa(), events->delta_gain, events->epsilon,
                             events->enabled);
  }
};

namespace detail {

using nlohmann::json;

inline void reject_unknown_fields(const json& obj, const std::string& ctx,
                                  std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* name : allowed)
      if (item.key() == name) {
        known = true;
        break;
      }
    if (!known) throw ConfigError("unknown field '" + ctx + item.key() + "'");
  }
}

inline double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  return v.get<double>();
}

inline int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return v.get<int>();
}

inline Vec as_vector(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array of numbers");
  Vec out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(as_number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace detail

/// Parses and validates a config document. Unknown fields are rejected;
/// messages name the offending field, edge, or node label.
inline ExperimentConfig config_from_json(const nlohmann::json& doc) {
  using detail::as_int;
  using detail::as_number;
  using detail::as_vector;

  if (!doc.is_object()) throw ConfigError("config root must be an object");
  detail::reject_unknown_fields(doc, "",
                                {"name", "n", "index_base", "edges", "omega", "kappa",
                                 "epsilon", "theta0", "integrator", "events", "output"});

  ExperimentConfig cfg;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ConfigError("name: expected a string");
    cfg.name = doc["name"].get<std::string>();
  }
  if (!doc.contains("n")) throw ConfigError("missing required field 'n'");
  cfg.n = as_int(doc["n"], "n");
  if (cfg.n < 2) throw ConfigError("n must be at least 2");

  if (doc.contains("index_base")) {
    cfg.index_base = as_int(doc["index_base"], "index_base");
    if (cfg.index_base != 0 && cfg.index_base != 1)
      throw ConfigError("index_base must be 0 or 1");
  }

  if (!doc.contains("edges")) throw ConfigError("missing required field 'edges'");
  if (!doc["edges"].is_array()) throw ConfigError("edges: expected an array of pairs");
  for (std::size_t k = 0; k < doc["edges"].size(); ++k) {
    const auto& e = doc["edges"][k];
    const std::string where = "edges[" + std::to_string(k) + "]";
    if (!e.is_array() || e.size() != 2)
      throw ConfigError(where + ": expected a [tail, head] pair");
    const int a = as_int(e[0], where);
    const int b = as_int(e[1], where);
    const int lo = cfg.index_base;
    const int hi = cfg.n - 1 + cfg.index_base;
    if (a < lo || a > hi || b < lo || b > hi)
      throw ConfigError(where + " = [" + std::to_string(a) + ", " + std::to_string(b) +
                        "]: node labels must lie in " + std::to_string(lo) + ".." +
                        std::to_string(hi));
    cfg.edges.emplace_back(a - cfg.index_base, b - cfg.index_base);
  }

  if (!doc.contains("omega")) throw ConfigError("missing required field 'omega'");
  cfg.omega = as_vector(doc["omega"], "omega");
  if (cfg.omega.size() != static_cast<std::size_t>(cfg.n))
    throw ConfigError("omega must list exactly n frequencies");

  if (doc.contains("kappa")) cfg.kappa = as_number(doc["kappa"], "kappa");
  if (doc.contains("epsilon")) cfg.epsilon = as_number(doc["epsilon"], "epsilon");
  if (doc.contains("theta0")) {
    cfg.theta0 = as_vector(doc["theta0"], "theta0");
    if (cfg.theta0->size() != static_cast<std::size_t>(cfg.n))
      throw ConfigError("theta0 must list exactly n phases");
  }

  if (doc.contains("integrator")) {
    const auto& integ = doc["integrator"];
    if (!integ.is_object()) throw ConfigError("integrator: expected an object");
    detail::reject_unknown_fields(integ, "integrator.", {"dt", "t_end", "sample_stride"});
    if (integ.contains("dt")) cfg.integrator.dt = as_number(integ["dt"], "integrator.dt");
    if (integ.contains("t_end"))
      cfg.integrator.t_end = as_number(integ["t_end"], "integrator.t_end");
    if (integ.contains("sample_stride"))
      cfg.integrator.sample_stride = as_int(integ["sample_stride"], "integrator.sample_stride");
    try {
      validate(cfg.integrator);
    } catch (const Error& e) {
      throw ConfigError(std::string("integrator: ") + e.what());
    }
  }

  if (doc.contains("events")) {
    const auto& ev = doc["events"];
    if (!ev.is_object()) throw ConfigError("events: expected an object");
    detail::reject_unknown_fields(ev, "events.", {"delta_gain", "epsilon", "eta", "enabled"});
    EventSettings es;
    if (!ev.contains("delta_gain")) throw ConfigError("events.delta_gain is required");
    es.delta_gain = as_number(ev["delta_gain"], "events.delta_gain");
    if (!ev.contains("epsilon")) throw ConfigError("events.epsilon is required");
    es.epsilon = as_number(ev["epsilon"], "events.epsilon");
    if (ev.contains("eta")) {
      // eta is derived from epsilon; an explicit value must agree.
      const double eta = as_number(ev["eta"], "events.eta");
      if (std::abs(eta - (1.5707963267948966 - es.epsilon)) > 1e-9)
        throw ConfigError("events.eta must equal pi/2 - events.epsilon");
    }
    if (ev.contains("enabled")) {
      if (!ev["enabled"].is_boolean()) throw ConfigError("events.enabled: expected a boolean");
      es.enabled = ev["enabled"].get<bool>();
    }
    cfg.events = es;
  }

  if (doc.contains("output")) {
    const auto& out = doc["output"];
    if (!out.is_object()) throw ConfigError("output: expected an object");
    detail::reject_unknown_fields(out, "output.", {"dir", "prefix"});
    if (out.contains("dir")) {
      if (!out["dir"].is_string()) throw ConfigError("output.dir: expected a string");
      cfg.output.dir = out["dir"].get<std::string>();
    }
    if (out.contains("prefix")) {
      if (!out["prefix"].is_string()) throw ConfigError("output.prefix: expected a string");
      cfg.output.prefix = out["prefix"].get<std::string>();
    }
  }

  // Surface graph and frequency problems at load time with config context.
  try {
    static_cast<void>(cfg.graph());
    static_cast<void>(cfg.frequencies());
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (cfg.theta0)
    for (double v : *cfg.theta0)
      if (!std::isfinite(v)) throw ConfigError("theta0 entries must be finite");
  return cfg;
}

/// Re-serializes a config; parsing the result yields an equal config.
inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json doc;
  if (!cfg.name.empty()) doc["name"] = cfg.name;
  doc["n"] = cfg.n;
  doc["index_base"] = cfg.index_base;
  auto edges = nlohmann::json::array();
  for (const auto& [a, b] : cfg.edges)
    edges.push_back({a + cfg.index_base, b + cfg.index_base});
  doc["edges"] = std::move(edges);
  doc["omega"] = cfg.omega;
  if (cfg.kappa) doc["kappa"] = *cfg.kappa;
  doc["epsilon"] = cfg.epsilon;
  if (cfg.theta0) doc["theta0"] = *cfg.theta0;
  doc["integrator"] = {{"dt", cfg.integrator.dt},
                       {"t_end", cfg.integrator.t_end},
                       {"sample_stride", cfg.integrator.sample_stride}};
  if (cfg.events)
    doc["events"] = {{"delta_gain", cfg.events->delta_gain},
                     {"epsilon", cfg.events->epsilon},
                     {"enabled", cfg.events->enabled}};
  doc["output"] = {{"dir", cfg.output.dir}, {"prefix", cfg.output.prefix}};
  return doc;
}

/// Loads a config file from disk.
inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("parse error in " + path + ": " + e.what());
  }
  return config_from_json(doc);
}

}  // namespace kuratree
