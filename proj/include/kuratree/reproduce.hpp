#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include "kuratree/bounds.hpp"
#include "kuratree/dynamics.hpp"
#include "kuratree/events.hpp"
#include "kuratree/graph.hpp"
#include "kuratree/io.hpp"

namespace kuratree {

/// Outcome of one bundled reference check.
struct CriterionCheck {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Reference experiments: two 4-node topologies, two frequency sets, and the
/// event-controller scenario, together with the published values they are
/// compared against.
namespace reference {

inline constexpr double kPi = 3.141592653589793;

inline TreeGraph star4() { return build_tree(4, {{0, 1}, {0, 2}, {0, 3}}); }
inline TreeGraph line4() { return build_tree(4, {{0, 1}, {1, 2}, {2, 3}}); }

inline Vec omega_a() { return {20.0, 3.0, 2.0, 1.0}; }
inline Vec omega_b() { return {1.0, 10.0, 5.0, 6.0}; }
inline Vec omega_event() { return {20.0, 18.0, 16.0, 6.0}; }

inline Vec theta0() { return {kPi / 4.0, kPi / 10.0, kPi / 2.0, kPi / 5.0}; }

struct TableRow {
  const char* label;
  bool star;
  Vec omega;
  double lambda_ref;
  double estimate_ref;
  double kappa_ref;
};

inline const std::vector<TableRow>& table() {
  static const std::vector<TableRow> rows = {
      {"star/omega_a", true, omega_a(), 1.42, 1.0, 13.4},
      {"star/omega_b", true, omega_b(), 5.36, 4.0, 1.68},
      {"line/omega_a", false, omega_a(), 1.64, 0.58, 10.36},
      {"line/omega_b", false, omega_b(), 1.64, 0.58, 5.48},
  };
  return rows;
}

inline constexpr double kLambdaTol = 0.01;
inline constexpr double kEstimateTol = 0.01;
inline constexpr double kKappaTol = 0.05;  // reference values are rounded

inline constexpr double kSyncKappa = 5.0;
inline constexpr double kSyncThreshold = 1e-3;
inline constexpr double kSyncWindow = 1.0;

inline constexpr double kEventKappa = 1.1;
inline constexpr double kEventDelta = 1.1;
inline double event_epsilon() { return kPi / 10.0; }

}  // namespace reference

namespace detail {

inline std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(prec);
  os << v;
  return os.str();
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

}  // namespace detail

/// Reference table rows evaluated against the implementation.
struct TableComparison {
  std::string label;
  double lambda_computed = 0.0, lambda_ref = 0.0;
  double estimate_computed = 0.0, estimate_ref = 0.0;
  double kappa_computed = 0.0, kappa_ref = 0.0;
};

inline std::vector<TableComparison> compare_reference_table() {
  std::vector<TableComparison> out;
  for (const auto& row : reference::table()) {
    const TreeGraph g = row.star ? reference::star4() : reference::line4();
    const FrequencyAssignment w = make_frequencies(row.omega);
    const BoundsReport r = bounds_report(g, w, 0.0);
    TableComparison c;
    c.label = row.label;
    c.lambda_computed = r.lambda_min_exact;
    c.lambda_ref = row.lambda_ref;
    c.estimate_computed = r.lower_bound_best;
    c.estimate_ref = row.estimate_ref;
    c.kappa_computed = r.kappa_sufficient;
    c.kappa_ref = row.kappa_ref;
    out.push_back(c);
  }
  return out;
}

inline std::string render_comparison_table(const std::vector<TableComparison>& rows) {
  std::ostringstream os;
  os << "case           lambda_min (ref, |dev|)      estimate (ref, |dev|)      "
        "kappa (ref, |dev|)\n";
  for (const auto& r : rows) {
    os << r.label << "   " << detail::fmt(r.lambda_computed) << " (" << detail::fmt(r.lambda_ref, 2)
       << ", " << detail::fmt(std::abs(r.lambda_computed - r.lambda_ref)) << ")   "
       << detail::fmt(r.estimate_computed) << " (" << detail::fmt(r.estimate_ref, 2) << ", "
       << detail::fmt(std::abs(r.estimate_computed - r.estimate_ref)) << ")   "
       << detail::fmt(r.kappa_computed) << " (" << detail::fmt(r.kappa_ref, 2) << ", "
       << detail::fmt(std::abs(r.kappa_computed - r.kappa_ref)) << ")\n";
  }
  return os.str();
}

/// Everything run_reference_checks produces.
struct ReproductionReport {
  std::vector<CriterionCheck> checks;
  std::string comparison_table;

  [[nodiscard]] bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

/// Runs the bundled reference experiments (criteria 1-6). When out_dir is
/// nonempty, trajectory and event files plus the comparison table are written
/// there; with parallel set, the independent simulations run concurrently.
inline ReproductionReport run_reference_checks(const std::string& out_dir = "",
                                               bool parallel = false) {
  namespace ref = reference;
  namespace fs = std::filesystem;

  if (!out_dir.empty()) fs::create_directories(out_dir);
  auto out_path = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };

  ReproductionReport report;
  const auto rows = compare_reference_table();
  report.comparison_table = render_comparison_table(rows);
  if (!out_dir.empty())
    write_text_file(out_path("reference_table.txt"), report.comparison_table);

  // criteria 1-3: the static table values
  {
    detail::Timer timer;
    auto check_columns = [&](int id, const std::string& name, auto computed, auto refv,
                             double tol) {
      CriterionCheck c;
      c.id = id;
      c.name = name;
      c.passed = true;
      std::ostringstream os;
      for (const auto& r : rows) {
        const double dev = std::abs(computed(r) - refv(r));
        if (dev > tol) c.passed = false;
        os << r.label << " dev " << detail::fmt(dev) << "; ";
      }
      c.detail = os.str();
      c.seconds = timer.seconds();
      if (c.seconds >= 1.0) {
        c.passed = false;
        c.detail += "exceeded 1 s runtime";
      }
      report.checks.push_back(std::move(c));
    };
    check_columns(
        1, "reference lambda_min column within 0.01",
        [](const TableComparison& r) { return r.lambda_computed; },
        [](const TableComparison& r) { return r.lambda_ref; }, ref::kLambdaTol);
    check_columns(
        2, "reference estimate column within 0.01",
        [](const TableComparison& r) { return r.estimate_computed; },
        [](const TableComparison& r) { return r.estimate_ref; }, ref::kEstimateTol);
    check_columns(
        3, "reference kappa column within 0.05",
        [](const TableComparison& r) { return r.kappa_computed; },
        [](const TableComparison& r) { return r.kappa_ref; }, ref::kKappaTol);
  }

  // criterion 4: the four synchronization runs
  auto sync_check = [&]() {
    detail::Timer timer;
    CriterionCheck c;
    c.id = 4;
    c.name = "sync runs reach a sustained 1 s sync window by t=10 with nonzero "
             "final relative phases";
    c.passed = true;
    std::ostringstream os;
    const SimConfig sim{1e-3, 10.0, 10};
    for (const bool star : {true, false}) {
      for (const bool variant_b : {false, true}) {
        const TreeGraph g = star ? ref::star4() : ref::line4();
        const FrequencyAssignment w =
            make_frequencies(variant_b ? ref::omega_b() : ref::omega_a());
        detail::Timer run_timer;
        const Trajectory traj = integrate(g, w, ref::kSyncKappa, ref::theta0(), sim);
        const auto start =
            sustained_sync_start(g, traj, ref::kSyncThreshold, ref::kSyncWindow);
        double final_max_delta = 0.0;
        for (double d : traj.relative_phases.back())
          final_max_delta = std::max(final_max_delta, std::abs(d));
        const std::string label =
            std::string(star ? "star" : "line") + (variant_b ? "/omega_b" : "/omega_a");
        const bool ok = start.has_value() && final_max_delta > 1e-3 &&
                        run_timer.seconds() < 5.0;
        if (!ok) c.passed = false;
        os << label << ": sync_start="
           << (start ? detail::fmt(*start, 3) : std::string("none"))
           << " max|delta_final|=" << detail::fmt(final_max_delta, 3) << "; ";
        if (!out_dir.empty())
          write_trajectory_csv(out_path(label.substr(0, 4) + "_" +
                                        (variant_b ? "omega_b" : "omega_a") + ".csv"),
                               traj);
      }
    }
    c.detail = os.str();
    c.seconds = timer.seconds();
    return c;
  };

  // criterion 5: the de-synchronization reference run
  auto desync_check = [&]() {
    detail::Timer timer;
    CriterionCheck c;
    c.id = 5;
    c.name = "uncontrolled run de-synchronizes (some |theta_h - theta_i| > pi/2, "
             "no sustained sync window below 0.1)";
    const TreeGraph g = ref::star4();
    const FrequencyAssignment w = make_frequencies(ref::omega_event());
    const SimConfig sim{1e-3, 20.0, 10};
    const Trajectory traj = integrate(g, w, ref::kEventKappa, ref::theta0(), sim);
    const double max_gap = max_abs_relative_phase(traj);
    const auto window = sustained_sync_start(g, traj, 0.1, 1.0);
    const bool exceeded = max_gap > ref::kPi / 2.0;
    const bool never_syncs = !window.has_value();
    c.passed = exceeded && never_syncs && timer.seconds() < 5.0;
    c.detail = "max|theta_h-theta_i| = " + detail::fmt(max_gap, 4) +
               (exceeded ? " (> pi/2)" : " (never exceeds pi/2)") +
               ", sustained window below 0.1 " +
               (window ? "starts at t=" + detail::fmt(*window, 3) : "never found");
    if (!out_dir.empty()) write_trajectory_csv(out_path("uncontrolled_star.csv"), traj);
    c.seconds = timer.seconds();
    return c;
  };

  // criterion 6: the event-controlled reference run
  auto event_check = [&]() {
    detail::Timer timer;
    CriterionCheck c;
    c.id = 6;
    c.name = "event-controlled run: events trigger, dwell >= dt, per-leaf "
             "alternation, post-settling sync and cohesiveness";
    const TreeGraph g = ref::star4();
    const FrequencyAssignment w = make_frequencies(ref::omega_event());
    const SimConfig sim{1e-3, 20.0, 10};
    const EventConfig ecfg =
        make_event_config(ref::kEventKappa, ref::kEventDelta, ref::event_epsilon());
    const HybridResult run = simulate_hybrid(g, w, ecfg, ref::theta0(), sim);
    if (!out_dir.empty()) {
      write_trajectory_csv(out_path("controlled_star.csv"), run.trajectory);
      std::ostringstream ev;
      write_event_log_csv(ev, run.log);
      write_text_file(out_path("controlled_star_events.csv"), ev.str());
    }

    std::ostringstream os;
    if (run.log.entries.empty()) {
      // The controller never engages: the network synchronizes on its own at
      // these parameters, so the triggering behavior this check certifies is
      // unobservable.
      c.passed = false;
      os << "no events triggered (the configuration synchronizes without "
            "control; max|delta| = "
         << detail::fmt(max_abs_relative_phase(run.trajectory), 4) << " stays below eta = "
         << detail::fmt(ecfg.eta, 4) << ")";
    } else {
      const DwellStats stats = dwell_time_stats(run.log);  // alternation enforced here
      const double settle = run.log.entries.back().time;
      bool post_ok = true;
      const Vec metric = sync_metric_series(g, run.trajectory);
      for (std::size_t s = 0; s < run.trajectory.samples(); ++s) {
        if (run.trajectory.times[s] <= settle + 1.0) continue;
        bool cohesive = true;
        for (double d : run.trajectory.relative_phases[s])
          if (std::abs(d) > ecfg.eta) cohesive = false;
        if (metric[s] >= ref::kSyncThreshold || !cohesive) post_ok = false;
      }
      const bool dwell_ok = stats.min_gap >= sim.dt;
      c.passed = dwell_ok && post_ok && timer.seconds() < 5.0;
      os << stats.event_count << " events, min gap "
         << (std::isfinite(stats.min_gap) ? detail::fmt(stats.min_gap, 4) : std::string("inf"))
         << ", settle t=" << detail::fmt(settle, 3) << ", post-settling "
         << (post_ok ? "sync+cohesive" : "NOT synced/cohesive");
    }
    c.detail = os.str();
    c.seconds = timer.seconds();
    return c;
  };

  if (parallel) {
    auto f4 = std::async(std::launch::async, sync_check);
    auto f5 = std::async(std::launch::async, desync_check);
    auto f6 = std::async(std::launch::async, event_check);
    report.checks.push_back(f4.get());
    report.checks.push_back(f5.get());
    report.checks.push_back(f6.get());
  } else {
    report.checks.push_back(sync_check());
    report.checks.push_back(desync_check());
    report.checks.push_back(event_check());
  }

  if (!out_dir.empty()) {
    std::ostringstream os;
    for (const auto& c : report.checks)
      os << (c.passed ? "[PASS] " : "[FAIL] ") << "criterion " << c.id << ": " << c.name
         << " -- " << c.detail << " (" << detail::fmt(c.seconds, 2) << " s)\n";
    write_text_file(out_path("reference_checks.txt"), os.str());
  }
  return report;
}

}  // namespace kuratree
