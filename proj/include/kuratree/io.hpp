#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "kuratree/bounds.hpp"
#include "kuratree/dynamics.hpp"
#include "kuratree/errors.hpp"
#include "kuratree/events.hpp"

namespace kuratree {

/// Shortest round-trippable decimal form; identical configs yield
/// byte-identical output files.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Comma-separated trajectory, one row per sample:
/// time, theta_1..theta_n, theta_dot_1..theta_dot_n, delta_1..delta_m, V.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "time";
  for (int i = 1; i <= traj.node_count; ++i) out << ",theta_" << i;
  for (int i = 1; i <= traj.node_count; ++i) out << ",theta_dot_" << i;
  for (int k = 1; k <= traj.edge_count; ++k) out << ",delta_" << k;
  out << ",V\n";
  for (std::size_t s = 0; s < traj.samples(); ++s) {
    out << format_double(traj.times[s]);
    for (double v : traj.thetas[s]) out << ',' << format_double(v);
    for (double v : traj.theta_dots[s]) out << ',' << format_double(v);
    for (double v : traj.relative_phases[s]) out << ',' << format_double(v);
    out << ',' << format_double(traj.lyapunov[s]) << '\n';
  }
}

/// Event log as CSV; leaf labels are shifted by index_base to match the
/// config's node naming.
inline void write_event_log_csv(std::ostream& out, const EventLog& log, int index_base = 1) {
  out << "time,leaf,type,alpha_before,alpha_after\n";
  for (const EventRecord& rec : log.entries) {
    out << format_double(rec.time) << ',' << (rec.leaf + index_base) << ','
        << to_string(rec.type) << ',' << format_double(rec.alpha_before) << ','
        << format_double(rec.alpha_after) << '\n';
  }
}

inline nlohmann::json to_json(const BoundsReport& r) {
  return {{"lambda_min_exact", r.lambda_min_exact},
          {"lower_bound_spectral", r.lower_bound_spectral},
          {"lower_bound_degree", r.lower_bound_degree},
          {"lower_bound_best", r.lower_bound_best},
          {"upper_bound", r.upper_bound},
          {"delta_omega_max", r.delta_omega_max},
          {"epsilon", r.epsilon},
          {"kappa_sufficient", r.kappa_sufficient}};
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

inline void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  write_trajectory_csv(out, traj);
}

inline void write_event_log_csv(const std::string& path, const EventLog& log,
                                int index_base = 1) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  write_event_log_csv(out, log, index_base);
}

}  // namespace kuratree
