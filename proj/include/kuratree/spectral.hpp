#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kuratree/errors.hpp"
#include "kuratree/graph.hpp"
#include "kuratree/matrix.hpp"

namespace kuratree {

inline constexpr double kDefaultEigenTol = 1e-10;
inline constexpr int kMaxJacobiSweeps = 100;

/// Full eigenvalue spectrum of a symmetric matrix.
struct Spectrum {
  Vec eigenvalues;   ///< sorted ascending, one per dimension
  double tolerance;  ///< off-diagonal Frobenius norm actually reached
};

namespace detail {

inline double off_diagonal_frobenius(const Matrix& a) {
  const std::size_t n = a.rows();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace detail

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations. Sweeps stop
/// once the off-diagonal Frobenius norm drops below tol; exceeding the sweep
/// cap throws NoConvergence. A 1x1 matrix returns its single entry directly.
inline Spectrum sym_eigenvalues(const Matrix& m, double tol = kDefaultEigenTol) {
  if (!m.is_square()) throw NotSymmetric("matrix is not square");
  if (tol <= 0.0) throw Error("eigensolver tolerance must be positive");

  const std::size_t n = m.rows();
  if (n == 0) return Spectrum{{}, 0.0};
  if (n == 1) return Spectrum{{m(0, 0)}, 0.0};

  const double scale = std::max(1.0, m.max_abs());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale)
        throw NotSymmetric("entries (" + std::to_string(i) + "," + std::to_string(j) +
                           ") and transpose differ");

  Matrix a = m;
  double off = detail::off_diagonal_frobenius(a);
  int sweeps = 0;
  // NaN compares false, so non-finite inputs spin until the sweep cap fires.
  while (!(off < tol)) {
    if (++sweeps > kMaxJacobiSweeps)
      throw NoConvergence("Jacobi sweep cap exceeded (off-diagonal norm " +
                          std::to_string(off) + ")");
    for (std::size_t p = 0; p < n - 1; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        const double app = a(p, p);
        const double aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const double aip = a(i, p);
          const double aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(p, i) = a(i, p);
          a(i, q) = s * aip + c * aiq;
          a(q, i) = a(i, q);
        }
      }
    }
    off = detail::off_diagonal_frobenius(a);
  }

  Spectrum result;
  result.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) result.eigenvalues[i] = a(i, i);
  std::sort(result.eigenvalues.begin(), result.eigenvalues.end());
  result.tolerance = off;
  return result;
}

/// Smallest eigenvalue of a symmetric matrix.
inline double lambda_min(const Matrix& m, double tol = kDefaultEigenTol) {
  return sym_eigenvalues(m, tol).eigenvalues.front();
}

/// Second-smallest eigenvalue of the graph Laplacian B B^T. For a tree this
/// equals the smallest eigenvalue of the edge Laplacian B^T B.
inline double algebraic_connectivity(const TreeGraph& g) {
  return sym_eigenvalues(g.graph_laplacian()).eigenvalues[1];
}

/// Row-sum bound min_i(|m_ii| - sum_{j != i} |m_ij|). A lower bound on the
/// smallest singular value; for matrices with nonnegative diagonal it bounds
/// the smallest eigenvalue from below. May be negative (then uninformative).
inline double gershgorin_lower_bound(const Matrix& m) {
  if (!m.is_square()) throw Error("gershgorin_lower_bound needs a square matrix");
  const std::size_t n = m.rows();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(m(i, i));
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) row -= std::abs(m(i, j));
    best = std::min(best, row);
  }
  return best;
}

}  // namespace kuratree
