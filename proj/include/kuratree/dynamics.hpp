#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "kuratree/errors.hpp"
#include "kuratree/graph.hpp"

namespace kuratree {

// Any instantaneous |theta_dot_i| beyond this aborts the integration.
inline constexpr double kDivergenceGuard = 1e6;

/// Fixed-step integrator settings.
struct SimConfig {
  double dt = 1e-3;       ///< step size (s)
  double t_end = 10.0;    ///< horizon (s)
  int sample_stride = 1;  ///< record every this many steps

  bool operator==(const SimConfig&) const = default;
};

inline void validate(const SimConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw Error("dt must be positive");
  if (!(cfg.t_end >= cfg.dt)) throw Error("t_end must be at least dt");
  if (cfg.sample_stride < 1) throw Error("sample_stride must be >= 1");
}

/// Time-sampled run of the network. Row s of theta_dots is the vector field
/// re-evaluated at thetas[s]; relative_phases holds B^T theta per sample.
struct Trajectory {
  Vec times;
  std::vector<Vec> thetas;
  std::vector<Vec> theta_dots;
  std::vector<Vec> relative_phases;
  Vec lyapunov;
  int node_count = 0;
  int edge_count = 0;

  [[nodiscard]] std::size_t samples() const { return times.size(); }
};

namespace detail {

// theta_dot_i = omega_i (1 - kappa * sum_{j in N_i} sin(theta_i - theta_j)),
// accumulated per edge. `omega` is the effective frequency vector, which the
// event controller may shift away from the exogenous one.
inline void phase_derivative_into(const TreeGraph& g, const Vec& omega, double kappa,
                                  const Vec& theta, Vec& out) {
  const std::size_t n = theta.size();
  out.assign(n, 0.0);
  for (const Edge& e : g.edges()) {
    const auto i = static_cast<std::size_t>(e.tail);
    const auto j = static_cast<std::size_t>(e.head);
    const double s = std::sin(theta[i] - theta[j]);
    out[i] += s;
    out[j] -= s;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = omega[i] * (1.0 - kappa * out[i]);
}

inline Vec phase_derivative(const TreeGraph& g, const Vec& omega, double kappa,
                            const Vec& theta) {
  Vec out;
  phase_derivative_into(g, omega, kappa, theta, out);
  return out;
}

// One classical 4th-order step of size h (h may be negative).
inline Vec rk4_step(const TreeGraph& g, const Vec& omega, double kappa,
                    const Vec& theta, double h) {
  const std::size_t n = theta.size();
  Vec k1 = phase_derivative(g, omega, kappa, theta);
  Vec tmp(n);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = theta[i] + 0.5 * h * k1[i];
  Vec k2 = phase_derivative(g, omega, kappa, tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = theta[i] + 0.5 * h * k2[i];
  Vec k3 = phase_derivative(g, omega, kappa, tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = theta[i] + h * k3[i];
  Vec k4 = phase_derivative(g, omega, kappa, tmp);
  Vec next(n);
  for (std::size_t i = 0; i < n; ++i)
    next[i] = theta[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return next;
}

inline void check_state(const Vec& theta, const Vec& theta_dot, double t) {
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!std::isfinite(theta[i]) || !std::isfinite(theta_dot[i]) ||
        std::abs(theta_dot[i]) > kDivergenceGuard)
      throw NonFiniteState("state diverged at t = " + std::to_string(t) +
                           " (node " + std::to_string(i) + ")");
  }
}

inline void check_sizes(const TreeGraph& g, const Vec& omega, const Vec& theta) {
  const auto n = static_cast<std::size_t>(g.node_count());
  if (omega.size() != n) throw DimensionMismatch("omega length does not match node count");
  if (theta.size() != n) throw DimensionMismatch("theta length does not match node count");
}

}  // namespace detail

/// Vector field of the frequency-dependent network,
/// theta_dot = diag(omega) (1 - kappa B sin(B^T theta)).
inline Vec phase_derivative(const TreeGraph& g, const FrequencyAssignment& w,
                            double kappa, const Vec& theta) {
  detail::check_sizes(g, w.omega, theta);
  return detail::phase_derivative(g, w.omega, kappa, theta);
}

/// B^T theta: entry k is theta at the positive end minus theta at the
/// negative end of edge k.
inline Vec relative_phases(const TreeGraph& g, const Vec& theta) {
  if (theta.size() != static_cast<std::size_t>(g.node_count()))
    throw DimensionMismatch("theta length does not match node count");
  Vec delta(g.edges().size());
  for (std::size_t k = 0; k < delta.size(); ++k)
    delta[k] = theta[static_cast<std::size_t>(g.edges()[k].tail)] -
               theta[static_cast<std::size_t>(g.edges()[k].head)];
  return delta;
}

/// V(theta) = 2 sum_k sin^2(delta_k / 2); zero exactly when every edge
/// difference is a multiple of 2 pi.
inline double lyapunov_v(const TreeGraph& g, const Vec& theta) {
  double v = 0.0;
  for (double d : relative_phases(g, theta)) {
    const double s = std::sin(0.5 * d);
    v += 2.0 * s * s;
  }
  return v;
}

/// Largest level c(epsilon) = 2 sin^2(eta / 2), eta = pi/2 - epsilon, such
/// that {V <= c} keeps every edge difference within [-eta, eta]: a single
/// term reaching c already forces its |delta_k| to eta, and the state with
/// one edge at eta and the rest at zero sits on the boundary.
inline double level_set_c(double epsilon) {
  constexpr double half_pi = 1.5707963267948966;
  if (epsilon < 0.0 || epsilon >= half_pi)
    throw DegenerateEpsilon("epsilon must lie in [0, pi/2)");
  const double s = std::sin(0.5 * (half_pi - epsilon));
  return 2.0 * s * s;
}

/// sup-norm of B^T theta_dot: zero exactly at frequency synchronization
/// (equal instantaneous frequencies across every edge, hence across the
/// connected tree).
inline double frequency_sync_metric(const TreeGraph& g, const FrequencyAssignment& w,
                                    double kappa, const Vec& theta) {
  detail::check_sizes(g, w.omega, theta);
  const Vec dot = detail::phase_derivative(g, w.omega, kappa, theta);
  double m = 0.0;
  for (const Edge& e : g.edges())
    m = std::max(m, std::abs(dot[static_cast<std::size_t>(e.tail)] -
                             dot[static_cast<std::size_t>(e.head)]));
  return m;
}

/// True when every edge difference satisfies |delta_k| <= eta. Phases are
/// never wrapped; raw differences keep de-synchronization visible.
inline bool cohesiveness_check(const TreeGraph& g, const Vec& theta, double eta) {
  for (double d : relative_phases(g, theta))
    if (std::abs(d) > eta) return false;
  return true;
}

/// Integrates the network with the classical fixed-step 4th-order scheme,
/// recording every sample_stride steps (plus the initial and final states).
inline Trajectory integrate(const TreeGraph& g, const FrequencyAssignment& w,
                            double kappa, const Vec& theta0, const SimConfig& cfg) {
  detail::check_sizes(g, w.omega, theta0);
  validate(cfg);
  if (kappa < 0.0) throw Error("kappa must be nonnegative");

  const auto steps = static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  Trajectory traj;
  traj.node_count = g.node_count();
  traj.edge_count = g.edge_count();

  auto record = [&](double t, const Vec& theta) {
    Vec dot = detail::phase_derivative(g, w.omega, kappa, theta);
    detail::check_state(theta, dot, t);
    traj.times.push_back(t);
    traj.thetas.push_back(theta);
    traj.relative_phases.push_back(relative_phases(g, theta));
    traj.lyapunov.push_back(lyapunov_v(g, theta));
    traj.theta_dots.push_back(std::move(dot));
  };

  Vec theta = theta0;
  record(0.0, theta);
  for (std::size_t k = 1; k <= steps; ++k) {
    theta = detail::rk4_step(g, w.omega, kappa, theta, cfg.dt);
    const double t = static_cast<double>(k) * cfg.dt;
    if (k % static_cast<std::size_t>(cfg.sample_stride) == 0 || k == steps)
      record(t, theta);
  }
  return traj;
}

/// Consistency check of the edge-frequency dynamics: with z = B^T theta_dot,
/// compares the closed form z_dot = -kappa A diag(cos delta) z against a
/// central finite difference of z along the flow, and returns the sup-norm
/// discrepancy.
inline double edge_dynamics_residual(const TreeGraph& g, const FrequencyAssignment& w,
                                     double kappa, const Vec& theta,
                                     double fd_step = 1e-6) {
  detail::check_sizes(g, w.omega, theta);
  if (!(fd_step > 0.0)) throw Error("fd_step must be positive");

  const Matrix a = weighted_edge_laplacian(g, w);
  const Vec delta = relative_phases(g, theta);

  auto edge_velocity = [&](const Vec& th) {
    const Vec dot = detail::phase_derivative(g, w.omega, kappa, th);
    Vec z(g.edges().size());
    for (std::size_t k = 0; k < z.size(); ++k)
      z[k] = dot[static_cast<std::size_t>(g.edges()[k].tail)] -
             dot[static_cast<std::size_t>(g.edges()[k].head)];
    return z;
  };

  const Vec z = edge_velocity(theta);
  Vec weighted(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) weighted[k] = std::cos(delta[k]) * z[k];
  Vec closed = a.apply(weighted);
  for (double& v : closed) v *= -kappa;

  const Vec zp = edge_velocity(detail::rk4_step(g, w.omega, kappa, theta, fd_step));
  const Vec zm = edge_velocity(detail::rk4_step(g, w.omega, kappa, theta, -fd_step));
  double resid = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k)
    resid = std::max(resid, std::abs(closed[k] - (zp[k] - zm[k]) / (2.0 * fd_step)));
  return resid;
}

// -- trajectory analysis --------------------------------------------------

/// Frequency-sync metric per recorded sample, from the stored derivatives.
inline Vec sync_metric_series(const TreeGraph& g, const Trajectory& traj) {
  Vec out(traj.samples(), 0.0);
  for (std::size_t s = 0; s < traj.samples(); ++s) {
    const Vec& dot = traj.theta_dots[s];
    double m = 0.0;
    for (const Edge& e : g.edges())
      m = std::max(m, std::abs(dot[static_cast<std::size_t>(e.tail)] -
                               dot[static_cast<std::size_t>(e.head)]));
    out[s] = m;
  }
  return out;
}

/// Earliest sample time t* such that the sync metric stays below `threshold`
/// for the whole window [t*, t* + window] within the recorded horizon.
inline std::optional<double> sustained_sync_start(const TreeGraph& g,
                                                  const Trajectory& traj,
                                                  double threshold, double window) {
  const Vec metric = sync_metric_series(g, traj);
  std::optional<double> run_start;
  for (std::size_t s = 0; s < metric.size(); ++s) {
    if (metric[s] < threshold) {
      if (!run_start) run_start = traj.times[s];
      if (traj.times[s] - *run_start >= window) return run_start;
    } else {
      run_start.reset();
    }
  }
  return std::nullopt;
}

/// Largest |delta_k| seen over the whole recorded run.
inline double max_abs_relative_phase(const Trajectory& traj) {
  double m = 0.0;
  for (const Vec& row : traj.relative_phases)
    for (double d : row) m = std::max(m, std::abs(d));
  return m;
}

}  // namespace kuratree
