// Command-line front end: coupling-bound analysis, network simulation, the
// event-triggered hub controller, and the bundled reference experiments.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "kuratree/kuratree.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitAcceptance = 3;

constexpr double kSyncThreshold = 1e-3;
constexpr double kSyncWindow = 1.0;

struct Overrides {
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<double> epsilon;
};

kuratree::ExperimentConfig load_with_overrides(const std::string& path,
                                               const Overrides& ov) {
  kuratree::ExperimentConfig cfg = kuratree::load_config(path);
  if (ov.dt) cfg.integrator.dt = *ov.dt;
  if (ov.t_end) cfg.integrator.t_end = *ov.t_end;
  if (ov.epsilon) cfg.epsilon = *ov.epsilon;
  try {
    kuratree::validate(cfg.integrator);
  } catch (const kuratree::Error& e) {
    throw kuratree::ConfigError(std::string("integrator overrides: ") + e.what());
  }
  return cfg;
}

fs::path resolve_out_dir(const kuratree::ExperimentConfig& cfg) {
  if (!cfg.output.dir.empty()) return cfg.output.dir;
  if (const char* env = std::getenv("KURATREE_OUT_DIR"); env != nullptr && *env != '\0')
    return env;
  return ".";
}

void write_echo(const fs::path& dir, const kuratree::ExperimentConfig& cfg) {
  kuratree::write_text_file((dir / (cfg.output.prefix + "_config_echo.json")).string(),
                            kuratree::config_to_json(cfg).dump(2) + "\n");
}

int cmd_analyze(const kuratree::ExperimentConfig& cfg) {
  const kuratree::TreeGraph g = cfg.graph();
  const kuratree::BoundsReport report =
      kuratree::bounds_report(g, cfg.frequencies(), cfg.epsilon);
  const json doc = kuratree::to_json(report);

  const fs::path dir = resolve_out_dir(cfg);
  fs::create_directories(dir);
  kuratree::write_text_file((dir / (cfg.output.prefix + "_bounds.json")).string(),
                            doc.dump(2) + "\n");
  write_echo(dir, cfg);
  std::cout << doc.dump(2) << "\n";
  return kExitOk;
}

json sync_summary(const kuratree::TreeGraph& g, const kuratree::Trajectory& traj) {
  const auto start = kuratree::sustained_sync_start(g, traj, kSyncThreshold, kSyncWindow);
  json doc;
  doc["sync_threshold"] = kSyncThreshold;
  doc["sync_window_seconds"] = kSyncWindow;
  doc["sync_achieved"] = start.has_value();
  doc["sync_time"] = start ? json(*start) : json(nullptr);
  doc["final_relative_phases"] = traj.relative_phases.back();
  doc["max_abs_relative_phase"] = kuratree::max_abs_relative_phase(traj);
  doc["final_sync_metric"] = kuratree::sync_metric_series(g, traj).back();
  return doc;
}

int cmd_simulate(const kuratree::ExperimentConfig& cfg) {
  const kuratree::TreeGraph g = cfg.graph();
  const kuratree::Trajectory traj = kuratree::integrate(
      g, cfg.frequencies(), cfg.require_kappa(), cfg.require_theta0(), cfg.integrator);

  const fs::path dir = resolve_out_dir(cfg);
  fs::create_directories(dir);
  kuratree::write_trajectory_csv((dir / (cfg.output.prefix + "_trajectory.csv")).string(),
                                 traj);
  const json summary = sync_summary(g, traj);
  kuratree::write_text_file((dir / (cfg.output.prefix + "_summary.json")).string(),
                            summary.dump(2) + "\n");
  write_echo(dir, cfg);
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

int cmd_eventsim(const kuratree::ExperimentConfig& cfg) {
  const kuratree::TreeGraph g = cfg.graph();
  const kuratree::HybridResult run = kuratree::simulate_hybrid(
      g, cfg.frequencies(), cfg.event_config(), cfg.require_theta0(), cfg.integrator);

  json summary = sync_summary(g, run.trajectory);
  const kuratree::DwellStats stats = kuratree::dwell_time_stats(run.log);
  summary["event_count"] = stats.event_count;
  summary["min_event_gap"] =
      std::isfinite(stats.min_gap) ? json(stats.min_gap) : json(nullptr);
  summary["per_leaf_event_counts"] = stats.per_leaf_counts;

  // Post-settling verdict: sync metric below threshold and cohesiveness at
  // eta on every sample later than one second after the last event.
  const double settle = run.log.entries.empty() ? 0.0 : run.log.entries.back().time;
  const kuratree::Vec metric = kuratree::sync_metric_series(g, run.trajectory);
  const double eta = cfg.event_config().eta;
  bool post_ok = true;
  for (std::size_t s = 0; s < run.trajectory.samples(); ++s) {
    if (run.trajectory.times[s] <= settle + 1.0) continue;
    bool cohesive = true;
    for (double d : run.trajectory.relative_phases[s])
      if (std::abs(d) > eta) cohesive = false;
    if (metric[s] >= kSyncThreshold || !cohesive) post_ok = false;
  }
  summary["settle_time"] = settle;
  summary["post_settling_sync"] = post_ok;

  const fs::path dir = resolve_out_dir(cfg);
  fs::create_directories(dir);
  kuratree::write_trajectory_csv((dir / (cfg.output.prefix + "_trajectory.csv")).string(),
                                 run.trajectory);
  kuratree::write_event_log_csv((dir / (cfg.output.prefix + "_events.csv")).string(),
                                run.log, cfg.index_base);
  kuratree::write_text_file((dir / (cfg.output.prefix + "_summary.json")).string(),
                            summary.dump(2) + "\n");
  write_echo(dir, cfg);
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

int cmd_reproduce(const std::string& out_dir, bool parallel) {
  const kuratree::ReproductionReport report =
      kuratree::run_reference_checks(out_dir, parallel);
  std::cout << report.comparison_table << "\n";
  int failures = 0;
  for (const auto& c : report.checks) {
    std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << "criterion " << c.id << ": "
              << c.name << "\n        " << c.detail << "\n";
    if (!c.passed) ++failures;
  }
  if (failures > 0) {
    std::cout << failures << " reference check(s) failed\n";
    return kExitAcceptance;
  }
  std::cout << "all reference checks passed\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequency-dependent Kuramoto oscillators on tree networks"};
  app.require_subcommand(1);

  Overrides ov;
  std::string config_path;
  std::string out_dir = "reproduction";
  bool parallel = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "experiment config file (JSON)")->required();
    cmd->add_option("--dt", ov.dt, "override integrator step size");
    cmd->add_option("--t-end", ov.t_end, "override integration horizon");
    cmd->add_option("--epsilon", ov.epsilon, "override the cohesiveness margin");
  };

  CLI::App* analyze = app.add_subcommand(
      "analyze", "coupling bounds and sufficient kappa for a (tree, omega) pair");
  add_common(analyze);
  CLI::App* simulate =
      app.add_subcommand("simulate", "integrate the network and report synchronization");
  add_common(simulate);
  CLI::App* eventsim = app.add_subcommand(
      "eventsim", "hybrid simulation with the event-triggered hub controller");
  add_common(eventsim);
  CLI::App* reproduce =
      app.add_subcommand("reproduce", "run the bundled reference experiments");
  reproduce->add_option("out_dir", out_dir, "directory for result files");
  reproduce->add_flag("--parallel", parallel, "run independent experiments concurrently");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(load_with_overrides(config_path, ov));
    if (simulate->parsed()) return cmd_simulate(load_with_overrides(config_path, ov));
    if (eventsim->parsed()) return cmd_eventsim(load_with_overrides(config_path, ov));
    if (reproduce->parsed()) return cmd_reproduce(out_dir, parallel);
  } catch (const kuratree::NonFiniteState& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const kuratree::NoConvergence& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const kuratree::SandwichViolation& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const kuratree::AlternationViolation& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const kuratree::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
