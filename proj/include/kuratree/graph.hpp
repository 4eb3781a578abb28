#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "kuratree/errors.hpp"
#include "kuratree/matrix.hpp"

namespace kuratree {

/// Oriented edge of a tree. The tail node carries the +1 entry of the
/// incidence matrix column, the head node the -1 entry.
struct Edge {
  int tail = 0;
  int head = 0;

  bool operator==(const Edge&) const = default;
};

/// How build_tree orients the edges it is given.
enum class EdgeOrientation {
  /// Positive end is the lower node index, regardless of input order.
  lower_index_positive,
  /// Keep the caller's (tail, head) order as given.
  as_given,
};

/// Immutable tree over nodes 0..n-1 with a fixed edge orientation and
/// deterministic edge ordering (input order is preserved). Construction
/// validates the tree invariants: no self-loops, no duplicate edges,
/// acyclic, connected, m = n - 1.
class TreeGraph {
 public:
  [[nodiscard]] int node_count() const { return n_; }
  [[nodiscard]] int edge_count() const { return static_cast<int>(edges_.size()); }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }

  /// Degree of each node; the degree sum is 2m.
  [[nodiscard]] const std::vector<int>& degrees() const { return degrees_; }

  /// n x m matrix with exactly one +1 (tail) and one -1 (head) per column.
  [[nodiscard]] Matrix incidence_matrix() const {
    Matrix b(static_cast<std::size_t>(n_), edges_.size());
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      b(static_cast<std::size_t>(edges_[k].tail), k) = 1.0;
      b(static_cast<std::size_t>(edges_[k].head), k) = -1.0;
    }
    return b;
  }

  /// n x n Laplacian B * B^T: degree diagonal, -1 per adjacent pair,
  /// zero row sums.
  [[nodiscard]] Matrix graph_laplacian() const {
    Matrix l(static_cast<std::size_t>(n_), static_cast<std::size_t>(n_));
    for (const Edge& e : edges_) {
      const auto i = static_cast<std::size_t>(e.tail);
      const auto j = static_cast<std::size_t>(e.head);
      l(i, i) += 1.0;
      l(j, j) += 1.0;
      l(i, j) -= 1.0;
      l(j, i) -= 1.0;
    }
    return l;
  }

  /// True when one node is adjacent to all others.
  [[nodiscard]] bool is_star() const {
    return std::any_of(degrees_.begin(), degrees_.end(),
                       [this](int d) { return d == n_ - 1; });
  }

  /// Center node of a star; throws NotAStar otherwise. For n = 2 both nodes
  /// qualify and node 0 is returned.
  [[nodiscard]] int hub() const {
    for (int v = 0; v < n_; ++v)
      if (degrees_[static_cast<std::size_t>(v)] == n_ - 1) return v;
    throw NotAStar("no node has degree n - 1");
  }

 private:
  friend TreeGraph build_tree(int, const std::vector<std::pair<int, int>>&,
                              EdgeOrientation);

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> degrees_;
};

namespace detail {

// Union-find over node indices, used only during tree validation.
class DisjointSet {
 public:
  explicit DisjointSet(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int v) {
    while (parent_[static_cast<std::size_t>(v)] != v) {
      parent_[static_cast<std::size_t>(v)] =
          parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])];
      v = parent_[static_cast<std::size_t>(v)];
    }
    return v;
  }

  // Returns false when both nodes were already connected.
  bool unite(int a, int b) {
    const int ra = find(a);
    const int rb = find(b);
    if (ra == rb) return false;
    parent_[static_cast<std::size_t>(ra)] = rb;
    return true;
  }

 private:
  std::vector<int> parent_;
};

inline std::string edge_str(int i, int j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

}  // namespace detail

/// Builds and validates a tree. Errors name the offending edge or node:
/// SelfLoop, DuplicateEdge, CycleDetected, Disconnected.
inline TreeGraph build_tree(
    int n, const std::vector<std::pair<int, int>>& edges,
    EdgeOrientation orientation = EdgeOrientation::lower_index_positive) {
  if (n < 2) throw Error("a tree needs at least 2 nodes, got " + std::to_string(n));

  TreeGraph g;
  g.n_ = n;
  g.edges_.reserve(edges.size());
  g.degrees_.assign(static_cast<std::size_t>(n), 0);

  detail::DisjointSet dsu(n);
  std::vector<std::vector<bool>> seen(static_cast<std::size_t>(n));

  for (const auto& [a, b] : edges) {
    if (a < 0 || a >= n || b < 0 || b >= n)
      throw Error("edge " + detail::edge_str(a, b) + " uses a node outside 0.." +
                  std::to_string(n - 1));
    if (a == b) throw SelfLoop("edge " + detail::edge_str(a, b) + " is a self-loop");

    const int lo = std::min(a, b);
    const int hi = std::max(a, b);
    auto& row = seen[static_cast<std::size_t>(lo)];
    if (row.empty()) row.assign(static_cast<std::size_t>(n), false);
    if (row[static_cast<std::size_t>(hi)])
      throw DuplicateEdge("edge " + detail::edge_str(a, b) + " appears twice");
    row[static_cast<std::size_t>(hi)] = true;

    if (!dsu.unite(a, b))
      throw CycleDetected("edge " + detail::edge_str(a, b) + " closes a cycle");

    Edge e;
    if (orientation == EdgeOrientation::lower_index_positive) {
      e.tail = lo;
      e.head = hi;
    } else {
      e.tail = a;
      e.head = b;
    }
    g.edges_.push_back(e);
    ++g.degrees_[static_cast<std::size_t>(a)];
    ++g.degrees_[static_cast<std::size_t>(b)];
  }

  for (int v = 1; v < n; ++v)
    if (dsu.find(v) != dsu.find(0))
      throw Disconnected("node " + std::to_string(v) + " is not reachable from node 0");

  return g;
}

/// Strictly positive exogenous frequency per node, with a witness zeta such
/// that omega_i >= zeta > 0 for all i.
struct FrequencyAssignment {
  Vec omega;
  double zeta = 0.0;

  bool operator==(const FrequencyAssignment&) const = default;
};

/// Validates strict positivity; zeta defaults to min(omega).
inline FrequencyAssignment make_frequencies(Vec omega) {
  if (omega.empty()) throw NonPositiveFrequency("empty frequency vector");
  double lo = omega.front();
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (!std::isfinite(omega[i]) || omega[i] <= 0.0)
      throw NonPositiveFrequency("omega[" + std::to_string(i) +
                                 "] = " + std::to_string(omega[i]) +
                                 " is not strictly positive");
    lo = std::min(lo, omega[i]);
  }
  return FrequencyAssignment{std::move(omega), lo};
}

inline FrequencyAssignment make_frequencies(Vec omega, double zeta) {
  FrequencyAssignment w = make_frequencies(std::move(omega));
  if (zeta <= 0.0 || zeta > w.zeta)
    throw NonPositiveFrequency("zeta = " + std::to_string(zeta) +
                               " is not a positive lower bound of omega");
  w.zeta = zeta;
  return w;
}

/// Weighted edge Laplacian A = B^T diag(omega) B. For edge k joining (i, j)
/// the diagonal entry is omega_i + omega_j; two edges sharing node l meet in
/// an off-diagonal entry of magnitude omega_l; disjoint edge pairs give 0.
inline Matrix weighted_edge_laplacian(const TreeGraph& g, const FrequencyAssignment& w) {
  const auto n = static_cast<std::size_t>(g.node_count());
  if (w.omega.size() != n)
    throw DimensionMismatch("omega has " + std::to_string(w.omega.size()) +
                            " entries for " + std::to_string(n) + " nodes");

  const auto& edges = g.edges();
  const std::size_t m = edges.size();
  Matrix a(m, m);

  // incident edge lists, with the incidence sign of the shared node
  std::vector<std::vector<std::pair<std::size_t, double>>> incident(n);
  for (std::size_t k = 0; k < m; ++k) {
    a(k, k) = w.omega[static_cast<std::size_t>(edges[k].tail)] +
              w.omega[static_cast<std::size_t>(edges[k].head)];
    incident[static_cast<std::size_t>(edges[k].tail)].push_back({k, 1.0});
    incident[static_cast<std::size_t>(edges[k].head)].push_back({k, -1.0});
  }
  for (std::size_t node = 0; node < n; ++node) {
    const auto& inc = incident[node];
    for (std::size_t p = 0; p < inc.size(); ++p)
      for (std::size_t q = p + 1; q < inc.size(); ++q) {
        const double v = inc[p].second * inc[q].second * w.omega[node];
        a(inc[p].first, inc[q].first) = v;
        a(inc[q].first, inc[p].first) = v;
      }
  }
  return a;
}

}  // namespace kuratree
