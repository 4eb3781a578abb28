#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "kuratree/dynamics.hpp"
#include "kuratree/errors.hpp"
#include "kuratree/graph.hpp"

namespace kuratree {

/// Hub controller event kinds. E1 raises a leaf's effective frequency when
/// its phase gap to the hub exceeds eta; E2 re-arms E1 once the gap has
/// fallen back below eta - epsilon (hysteresis against chattering).
enum class EventType { e1, e2 };

inline const char* to_string(EventType t) { return t == EventType::e1 ? "E1" : "E2"; }

/// Settings of the event-triggered hub controller for star networks.
/// eta = pi/2 - epsilon is the phase-cohesiveness threshold sensed by the
/// hub; delta_gain scales the retarget frequency
/// omega_star = omega_h (1 + delta_gain * cos(2 epsilon)).
struct EventConfig {
  double kappa = 1.0;
  double delta_gain = 1.0;
  double epsilon = 0.0;
  double eta = 0.0;
  bool enabled = true;

  bool operator==(const EventConfig&) const = default;
};

/// Builds a validated config with eta derived as pi/2 - epsilon.
inline EventConfig make_event_config(double kappa, double delta_gain, double epsilon,
                                     bool enabled = true) {
  constexpr double half_pi = 1.5707963267948966;
  if (!(epsilon > 0.0) || epsilon >= half_pi)
    throw DegenerateEpsilon("event epsilon must lie in (0, pi/2)");
  if (!(kappa > 0.0)) throw Error("event kappa must be positive");
  return EventConfig{kappa, delta_gain, epsilon, half_pi - epsilon, enabled};
}

inline void validate(const EventConfig& cfg) {
  constexpr double half_pi = 1.5707963267948966;
  if (!(cfg.epsilon > 0.0) || cfg.epsilon >= half_pi)
    throw DegenerateEpsilon("event epsilon must lie in (0, pi/2)");
  if (!(cfg.kappa > 0.0)) throw Error("event kappa must be positive");
  if (std::abs(cfg.eta - (half_pi - cfg.epsilon)) > 1e-9)
    throw Error("eta must equal pi/2 - epsilon");
}

/// Retarget frequency omega_star = omega_h (1 + delta cos(2 epsilon)). The
/// margin argument needs cos(2 epsilon) > 0, so epsilon must stay below pi/4.
inline double omega_star(double omega_h, double delta_gain, double epsilon) {
  constexpr double quarter_pi = 0.7853981633974483;
  if (epsilon < 0.0 || epsilon >= quarter_pi)
    throw DegenerateEpsilon("omega_star needs epsilon in [0, pi/4)");
  if (!(omega_h > 0.0)) throw NonPositiveFrequency("hub frequency must be positive");
  return omega_h * (1.0 + delta_gain * std::cos(2.0 * epsilon));
}

/// Correction jump at an E1 event. Applied as an increment on top of the
/// current correction, so the post-update effective frequency
/// omega_i + alpha_i equals omega_star; an already exact correction is a
/// fixed point.
inline double alpha_update(double alpha_i, double omega_i, double omega_star) {
  return alpha_i + (omega_star - (omega_i + alpha_i));
}

/// Which trigger each leaf is currently armed for.
enum class TriggerArm { e1, e2 };

/// Mutable controller state: per-node correction (hub entry stays zero),
/// per-node armed trigger, and the time of the last event per node.
/// Corrections change only at E1 events; phases are continuous across jumps.
struct HubControllerState {
  Vec alpha;
  std::vector<TriggerArm> arm;
  Vec last_event_time;
  int hub = 0;

  static HubControllerState initial(const TreeGraph& g) {
    HubControllerState s;
    const auto n = static_cast<std::size_t>(g.node_count());
    s.alpha.assign(n, 0.0);
    s.arm.assign(n, TriggerArm::e1);
    s.last_event_time.assign(n, -std::numeric_limits<double>::infinity());
    s.hub = g.hub();
    return s;
  }
};

/// One logged controller event.
struct EventRecord {
  double time = 0.0;
  int leaf = 0;
  EventType type = EventType::e1;
  double alpha_before = 0.0;
  double alpha_after = 0.0;
};

/// Ordered record of all triggers of one hybrid run. Times are
/// non-decreasing and consecutive events on the same leaf alternate E1/E2.
struct EventLog {
  std::vector<EventRecord> entries;
  int node_count = 0;
  int hub = 0;
};

/// Leaves whose armed trigger condition holds at `theta`: an E1-armed leaf i
/// fires when |theta_h - theta_i| > eta, an E2-armed leaf when the gap has
/// dropped below eta - epsilon. A single leaf can never satisfy both.
inline std::vector<std::pair<int, EventType>> detect_events(
    const TreeGraph& g, const HubControllerState& state, const Vec& theta,
    const EventConfig& cfg) {
  const int hub = g.hub();  // throws NotAStar on anything else
  if (theta.size() != static_cast<std::size_t>(g.node_count()))
    throw DimensionMismatch("theta length does not match node count");

  std::vector<std::pair<int, EventType>> out;
  for (int leaf = 0; leaf < g.node_count(); ++leaf) {
    if (leaf == hub) continue;
    const double gap = std::abs(theta[static_cast<std::size_t>(hub)] -
                                theta[static_cast<std::size_t>(leaf)]);
    if (state.arm[static_cast<std::size_t>(leaf)] == TriggerArm::e1) {
      if (gap > cfg.eta) out.emplace_back(leaf, EventType::e1);
    } else {
      if (gap < cfg.eta - cfg.epsilon) out.emplace_back(leaf, EventType::e2);
    }
  }
  return out;
}

/// Full result of one hybrid run.
struct HybridResult {
  Trajectory trajectory;
  EventLog log;
  HubControllerState final_state;
  Vec effective_omega;  ///< exogenous frequencies plus final corrections
};

/// Simulates the star network under the event-triggered hub controller:
/// fixed-step flow between events, event times refined by bisection to
/// dt/100, corrections applied at the refined instant with the phase state
/// unchanged. With the controller disabled the trigger machinery is off and
/// the flow reduces to the plain network dynamics.
///
/// If the initial state already violates a threshold the corresponding E1
/// fires at t = 0 before the first step.
// TODO: optionally estimate omega_h and omega_i from the first two
// derivatives of theta_h - theta_i instead of reading them from the
// configuration.
inline HybridResult simulate_hybrid(const TreeGraph& g, const FrequencyAssignment& w,
                                    const EventConfig& cfg, const Vec& theta0,
                                    const SimConfig& sim) {
  validate(cfg);
  validate(sim);
  detail::check_sizes(g, w.omega, theta0);

  HybridResult result;
  HubControllerState state = HubControllerState::initial(g);  // NotAStar here
  const int hub = state.hub;
  const auto n = static_cast<std::size_t>(g.node_count());

  result.log.node_count = g.node_count();
  result.log.hub = hub;

  Vec eff = w.omega;
  const double retarget =
      cfg.enabled ? omega_star(w.omega[static_cast<std::size_t>(hub)], cfg.delta_gain,
                               cfg.epsilon)
                  : 0.0;

  Trajectory& traj = result.trajectory;
  traj.node_count = g.node_count();
  traj.edge_count = g.edge_count();

  auto record = [&](double t, const Vec& theta) {
    Vec dot = detail::phase_derivative(g, eff, cfg.kappa, theta);
    detail::check_state(theta, dot, t);
    traj.times.push_back(t);
    traj.thetas.push_back(theta);
    traj.relative_phases.push_back(relative_phases(g, theta));
    traj.lyapunov.push_back(lyapunov_v(g, theta));
    traj.theta_dots.push_back(std::move(dot));
  };

  // Applies every armed trigger satisfied at theta, ascending leaf order.
  // Returns whether anything fired.
  auto process_events = [&](const Vec& theta, double t) {
    if (!cfg.enabled) return false;
    bool fired = false;
    for (const auto& [leaf, type] : detect_events(g, state, theta, cfg)) {
      const auto li = static_cast<std::size_t>(leaf);
      EventRecord rec;
      rec.time = t;
      rec.leaf = leaf;
      rec.type = type;
      rec.alpha_before = state.alpha[li];
      if (type == EventType::e1) {
        state.alpha[li] = alpha_update(state.alpha[li], w.omega[li], retarget);
        eff[li] = w.omega[li] + state.alpha[li];
        state.arm[li] = TriggerArm::e2;
      } else {
        state.arm[li] = TriggerArm::e1;
      }
      rec.alpha_after = state.alpha[li];
      state.last_event_time[li] = t;
      result.log.entries.push_back(rec);
      fired = true;
    }
    return fired;
  };

  auto any_event = [&](const Vec& theta) {
    return cfg.enabled && !detect_events(g, state, theta, cfg).empty();
  };

  Vec theta = theta0;
  process_events(theta, 0.0);
  record(0.0, theta);

  const auto steps = static_cast<std::size_t>(std::ceil(sim.t_end / sim.dt - 1e-9));
  const double bisect_tol = sim.dt / 100.0;

  for (std::size_t k = 1; k <= steps; ++k) {
    const double step_start = static_cast<double>(k - 1) * sim.dt;
    double consumed = 0.0;
    int cascades = 0;
    while (consumed < sim.dt) {
      const double remaining = sim.dt - consumed;
      Vec candidate = detail::rk4_step(g, eff, cfg.kappa, theta, remaining);
      if (!any_event(candidate)) {
        theta = std::move(candidate);
        consumed = sim.dt;
        break;
      }
      // First activation lies in (0, remaining]; shrink the bracket until
      // the activation instant is known to dt/100.
      double lo = 0.0;
      double hi = remaining;
      while (hi - lo > bisect_tol) {
        const double mid = 0.5 * (lo + hi);
        if (any_event(detail::rk4_step(g, eff, cfg.kappa, theta, mid)))
          hi = mid;
        else
          lo = mid;
      }
      theta = detail::rk4_step(g, eff, cfg.kappa, theta, hi);
      consumed += hi;
      process_events(theta, step_start + consumed);
      if (++cascades > 1000)
        throw NonFiniteState("event cascade did not settle within one step at t = " +
                             std::to_string(step_start));
    }
    const double t = static_cast<double>(k) * sim.dt;
    if (k % static_cast<std::size_t>(sim.sample_stride) == 0 || k == steps)
      record(t, theta);
  }

  result.effective_omega.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) result.effective_omega[i] = eff[i];
  result.final_state = std::move(state);
  return result;
}

/// Inter-event timing summary.
struct DwellStats {
  double min_gap = std::numeric_limits<double>::infinity();
  std::size_t event_count = 0;
  std::vector<std::size_t> per_leaf_counts;
};

/// Minimum positive gap between consecutive distinct event times (infinite
/// for fewer than two events) plus per-leaf counts. Verifies that every
/// leaf's events strictly alternate E1, E2, E1, ...; a violation means a
/// controller bug.
inline DwellStats dwell_time_stats(const EventLog& log) {
  DwellStats stats;
  stats.event_count = log.entries.size();
  stats.per_leaf_counts.assign(static_cast<std::size_t>(std::max(log.node_count, 0)), 0);

  std::vector<int> last_type(static_cast<std::size_t>(std::max(log.node_count, 0)), -1);
  double prev_time = -std::numeric_limits<double>::infinity();
  for (const EventRecord& rec : log.entries) {
    if (rec.time < prev_time)
      throw AlternationViolation("event times decrease at t = " + std::to_string(rec.time));
    const auto li = static_cast<std::size_t>(rec.leaf);
    if (li >= stats.per_leaf_counts.size())
      throw AlternationViolation("event names leaf outside the graph");
    ++stats.per_leaf_counts[li];
    const int t = rec.type == EventType::e1 ? 0 : 1;
    const int expected = last_type[li] < 0 ? 0 : 1 - last_type[li];
    if (t != expected)
      throw AlternationViolation("leaf " + std::to_string(rec.leaf) +
                                 " repeats " + to_string(rec.type));
    last_type[li] = t;
    if (prev_time > -std::numeric_limits<double>::infinity() && rec.time > prev_time)
      stats.min_gap = std::min(stats.min_gap, rec.time - prev_time);
    prev_time = rec.time;
  }
  return stats;
}

}  // namespace kuratree
