#pragma once

// Test-only helpers: independent closed-form eigenvalue oracles and random
// instance generators. Deliberately separate from the library so the checks
// do not share code with the implementation they verify.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "kuratree/graph.hpp"
#include "kuratree/matrix.hpp"

namespace testsupport {

// Roots of the characteristic polynomial of [[a, b], [b, c]], ascending.
inline std::array<double, 2> sym2x2_eigenvalues(double a, double b, double c) {
  const double mean = 0.5 * (a + c);
  const double disc = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  return {mean - disc, mean + disc};
}

// Trigonometric closed form for the characteristic polynomial of a symmetric
// 3x3 matrix, ascending.
inline std::array<double, 3> sym3x3_eigenvalues(const kuratree::Matrix& m) {
  const double a11 = m(0, 0), a22 = m(1, 1), a33 = m(2, 2);
  const double a12 = m(0, 1), a13 = m(0, 2), a23 = m(1, 2);
  const double p1 = a12 * a12 + a13 * a13 + a23 * a23;
  if (p1 == 0.0) {
    std::array<double, 3> d = {a11, a22, a33};
    std::sort(d.begin(), d.end());
    return d;
  }
  const double q = (a11 + a22 + a33) / 3.0;
  const double p2 = (a11 - q) * (a11 - q) + (a22 - q) * (a22 - q) +
                    (a33 - q) * (a33 - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  // r = det((M - qI) / p) / 2
  const double b11 = (a11 - q) / p, b22 = (a22 - q) / p, b33 = (a33 - q) / p;
  const double b12 = a12 / p, b13 = a13 / p, b23 = a23 / p;
  double r = b11 * (b22 * b33 - b23 * b23) - b12 * (b12 * b33 - b23 * b13) +
             b13 * (b12 * b23 - b22 * b13);
  r *= 0.5;
  r = std::clamp(r, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double hi = q + 2.0 * p * std::cos(phi);
  const double lo = q + 2.0 * p * std::cos(phi + 2.0 * 3.141592653589793 / 3.0);
  return {lo, 3.0 * q - hi - lo, hi};
}

// Uniform random attachment tree: node v joins a uniformly chosen earlier
// node, which covers paths, stars, and everything between.
inline kuratree::TreeGraph random_tree(std::mt19937& rng, int n) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(n - 1));
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> pick(0, v - 1);
    edges.emplace_back(pick(rng), v);
  }
  return kuratree::build_tree(n, edges);
}

inline kuratree::Vec random_omega(std::mt19937& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  kuratree::Vec omega(static_cast<std::size_t>(n));
  for (double& v : omega) v = dist(rng);
  return omega;
}

inline kuratree::Vec random_theta(std::mt19937& rng, int n, double amplitude) {
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  kuratree::Vec theta(static_cast<std::size_t>(n));
  for (double& v : theta) v = dist(rng);
  return theta;
}

// Random phases contracted toward their mean until V(theta) <= budget.
template <typename LyapunovFn>
inline kuratree::Vec random_theta_in_level_set(std::mt19937& rng, int n, double budget,
                                               LyapunovFn&& lyapunov) {
  kuratree::Vec theta = random_theta(rng, n, 0.9);
  double mean = 0.0;
  for (double v : theta) mean += v;
  mean /= static_cast<double>(n);
  while (lyapunov(theta) > budget) {
    for (double& v : theta) v = mean + 0.5 * (v - mean);
  }
  return theta;
}

}  // namespace testsupport
