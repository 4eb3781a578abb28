#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "kuratree/errors.hpp"
#include "kuratree/graph.hpp"
#include "kuratree/spectral.hpp"

namespace kuratree {

// Slack applied before declaring the lower <= exact <= upper bracket broken;
// absorbs eigensolver round-off only.
inline constexpr double kSandwichSlack = 1e-9;

/// Everything the coupling analysis produces for one (tree, omega, epsilon)
/// triple. Invariant: lower_bound_best <= lambda_min_exact <= upper_bound.
struct BoundsReport {
  double lambda_min_exact = 0.0;
  double lower_bound_spectral = 0.0;  ///< omega_min * lambda_2(B B^T)
  double lower_bound_degree = 0.0;    ///< degree-corrected row bound, may be negative
  double lower_bound_best = 0.0;      ///< max of the two lower bounds
  double upper_bound = 0.0;           ///< min over edges of the endpoint sum
  double delta_omega_max = 0.0;       ///< max |omega_i - omega_j| across edges
  double epsilon = 0.0;               ///< phase-cohesiveness margin (rad)
  double kappa_sufficient = 0.0;      ///< coupling strength that certifies sync
};

/// Largest exogenous-frequency gap across the edges of the tree (not across
/// all node pairs).
inline double delta_omega_max(const TreeGraph& g, const FrequencyAssignment& w) {
  if (w.omega.size() != static_cast<std::size_t>(g.node_count()))
    throw DimensionMismatch("omega length does not match node count");
  double d = 0.0;
  for (const Edge& e : g.edges())
    d = std::max(d, std::abs(w.omega[static_cast<std::size_t>(e.tail)] -
                             w.omega[static_cast<std::size_t>(e.head)]));
  return d;
}

/// Lower bound (i): omega_min * lambda_2(B B^T).
inline double lower_bound_spectral(const TreeGraph& g, const FrequencyAssignment& w) {
  double omega_min = w.omega.front();
  for (double v : w.omega) omega_min = std::min(omega_min, v);
  return omega_min * algebraic_connectivity(g);
}

/// Lower bound (ii): min over edges k = (i, j) of
/// (2 - d_i) omega_i + (2 - d_j) omega_j. Negative on hubs of high degree,
/// in which case it simply loses to bound (i) in the max.
inline double lower_bound_degree(const TreeGraph& g, const FrequencyAssignment& w) {
  if (w.omega.size() != static_cast<std::size_t>(g.node_count()))
    throw DimensionMismatch("omega length does not match node count");
  const auto& deg = g.degrees();
  double best = std::numeric_limits<double>::infinity();
  for (const Edge& e : g.edges()) {
    const auto i = static_cast<std::size_t>(e.tail);
    const auto j = static_cast<std::size_t>(e.head);
    best = std::min(best, (2.0 - deg[i]) * w.omega[i] + (2.0 - deg[j]) * w.omega[j]);
  }
  return best;
}

/// Upper bound: min over edges of omega_i + omega_j (a Rayleigh-quotient
/// bound attained with a canonical basis vector).
inline double upper_bound(const TreeGraph& g, const FrequencyAssignment& w) {
  if (w.omega.size() != static_cast<std::size_t>(g.node_count()))
    throw DimensionMismatch("omega length does not match node count");
  double best = std::numeric_limits<double>::infinity();
  for (const Edge& e : g.edges())
    best = std::min(best, w.omega[static_cast<std::size_t>(e.tail)] +
                              w.omega[static_cast<std::size_t>(e.head)]);
  return best;
}

/// Which lambda_min estimate the sufficient coupling uses.
enum class KappaEstimate {
  exact,         ///< exact smallest eigenvalue of B^T diag(omega) B
  conservative,  ///< best structural lower bound instead of the exact value
};

/// Sufficient coupling strength delta_omega_max / (lambda_1 * cos(epsilon))
/// for phase cohesiveness at eta = pi/2 - epsilon. Identical frequencies give
/// 0: any positive coupling synchronizes. The conservative variant divides by
/// the best lower bound and returns infinity when that bound is not positive.
inline double sufficient_kappa(const TreeGraph& g, const FrequencyAssignment& w,
                               double epsilon,
                               KappaEstimate estimate = KappaEstimate::exact) {
  constexpr double half_pi = 1.5707963267948966;
  if (epsilon < 0.0 || epsilon >= half_pi)
    throw DegenerateEpsilon("epsilon must lie in [0, pi/2)");
  const double gap = delta_omega_max(g, w);
  if (gap == 0.0) return 0.0;
  double lam;
  if (estimate == KappaEstimate::exact) {
    lam = lambda_min(weighted_edge_laplacian(g, w));
  } else {
    lam = std::max(lower_bound_spectral(g, w), lower_bound_degree(g, w));
    if (lam <= 0.0) return std::numeric_limits<double>::infinity();
  }
  return gap / (lam * std::cos(epsilon));
}

/// Assembles the full report and asserts the bound bracket; a
/// SandwichViolation here means an eigensolver or formula bug.
inline BoundsReport bounds_report(const TreeGraph& g, const FrequencyAssignment& w,
                                  double epsilon) {
  BoundsReport r;
  r.lambda_min_exact = lambda_min(weighted_edge_laplacian(g, w));
  r.lower_bound_spectral = lower_bound_spectral(g, w);
  r.lower_bound_degree = lower_bound_degree(g, w);
  r.lower_bound_best = std::max(r.lower_bound_spectral, r.lower_bound_degree);
  r.upper_bound = upper_bound(g, w);
  r.delta_omega_max = delta_omega_max(g, w);
  r.epsilon = epsilon;
  r.kappa_sufficient = sufficient_kappa(g, w, epsilon);

  if (r.lower_bound_best > r.lambda_min_exact + kSandwichSlack ||
      r.lambda_min_exact > r.upper_bound + kSandwichSlack)
    throw SandwichViolation("bound bracket failed: " +
                            std::to_string(r.lower_bound_best) + " <= " +
                            std::to_string(r.lambda_min_exact) + " <= " +
                            std::to_string(r.upper_bound));
  return r;
}

/// Entry v is lambda_min(B^T diag(omega) B) when node v carries
/// special_omega and every other node carries base_omega. Used to rank
/// where a deviant frequency hurts the spectral gap least.
inline Vec placement_sweep(const TreeGraph& g, double base_omega, double special_omega) {
  if (base_omega <= 0.0 || special_omega <= 0.0)
    throw NonPositiveFrequency("sweep frequencies must be strictly positive");
  const auto n = static_cast<std::size_t>(g.node_count());
  Vec out(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    Vec omega(n, base_omega);
    omega[v] = special_omega;
    out[v] = lambda_min(weighted_edge_laplacian(g, make_frequencies(std::move(omega))));
  }
  return out;
}

}  // namespace kuratree
