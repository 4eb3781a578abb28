#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kuratree/graph.hpp"
#include "kuratree/spectral.hpp"
#include "support/oracles.hpp"

using namespace kuratree;
using Catch::Approx;

TEST_CASE("build_tree accepts valid trees and keeps edge order", "[graph]") {
  const TreeGraph two = build_tree(2, {{0, 1}});
  CHECK(two.node_count() == 2);
  CHECK(two.edge_count() == 1);

  const TreeGraph star = build_tree(4, {{0, 1}, {0, 2}, {0, 3}});
  CHECK(star.edge_count() == 3);
  CHECK(star.is_star());
  CHECK(star.hub() == 0);
  CHECK(star.edges()[1] == Edge{0, 2});

  const TreeGraph path = build_tree(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK_FALSE(path.is_star());
  CHECK_THROWS_AS(path.hub(), NotAStar);
}

TEST_CASE("build_tree rejects malformed inputs with named edges", "[graph]") {
  CHECK_THROWS_AS(build_tree(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}), CycleDetected);
  CHECK_THROWS_AS(build_tree(4, {{0, 1}, {1, 2}}), Disconnected);
  CHECK_THROWS_AS(build_tree(3, {{0, 0}, {1, 2}}), SelfLoop);
  CHECK_THROWS_AS(build_tree(3, {{0, 1}, {1, 0}}), DuplicateEdge);
  CHECK_THROWS_AS(build_tree(1, {}), Error);
  CHECK_THROWS_AS(build_tree(3, {{0, 1}, {1, 5}}), Error);

  try {
    build_tree(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    FAIL("expected CycleDetected");
  } catch (const CycleDetected& e) {
    CHECK(std::string(e.what()).find("(3, 0)") != std::string::npos);
  }
}

TEST_CASE("incidence matrix has one +1 and one -1 per column", "[graph]") {
  const TreeGraph two = build_tree(2, {{0, 1}});
  const Matrix b2 = two.incidence_matrix();
  CHECK(b2(0, 0) == 1.0);
  CHECK(b2(1, 0) == -1.0);

  const TreeGraph star = build_tree(4, {{0, 1}, {0, 2}, {0, 3}});
  const Matrix bs = star.incidence_matrix();
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(bs(0, k) == 1.0);
    CHECK(bs(k + 1, k) == -1.0);
  }

  const TreeGraph path3 = build_tree(3, {{0, 1}, {1, 2}});
  const Matrix bp = path3.incidence_matrix();
  CHECK(bp(0, 0) == 1.0);
  CHECK(bp(1, 0) == -1.0);
  CHECK(bp(1, 1) == 1.0);
  CHECK(bp(2, 1) == -1.0);
  CHECK(bp(0, 1) == 0.0);
  CHECK(bp(2, 0) == 0.0);
}

TEST_CASE("degrees sum to twice the edge count", "[graph]") {
  CHECK(build_tree(4, {{0, 1}, {0, 2}, {0, 3}}).degrees() == std::vector<int>{3, 1, 1, 1});
  CHECK(build_tree(4, {{0, 1}, {1, 2}, {2, 3}}).degrees() == std::vector<int>{1, 2, 2, 1});
  CHECK(build_tree(2, {{0, 1}}).degrees() == std::vector<int>{1, 1});

  std::mt19937 rng(20240811);
  for (int trial = 0; trial < 20; ++trial) {
    const TreeGraph g = testsupport::random_tree(rng, 2 + trial);
    int sum = 0;
    for (int d : g.degrees()) sum += d;
    CHECK(sum == 2 * g.edge_count());
  }
}

TEST_CASE("graph laplacian equals B B^T with zero row sums", "[graph]") {
  const TreeGraph two = build_tree(2, {{0, 1}});
  const Matrix l2 = two.graph_laplacian();
  CHECK(l2(0, 0) == 1.0);
  CHECK(l2(0, 1) == -1.0);
  CHECK(l2(1, 0) == -1.0);
  CHECK(l2(1, 1) == 1.0);

  std::mt19937 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const TreeGraph g = testsupport::random_tree(rng, 3 + trial);
    const Matrix l = g.graph_laplacian();
    const Matrix b = g.incidence_matrix();
    const Matrix prod = b * b.transposed();
    const auto n = static_cast<std::size_t>(g.node_count());
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(l(i, j) == Approx(prod(i, j)).margin(1e-14));
        row += l(i, j);
      }
      CHECK(row == Approx(0.0).margin(1e-14));
      CHECK(l(i, i) == Approx(g.degrees()[i]));
    }
  }
}

TEST_CASE("weighted edge laplacian matches the dense triple product", "[graph]") {
  const TreeGraph star = build_tree(4, {{0, 1}, {0, 2}, {0, 3}});
  const FrequencyAssignment w = make_frequencies({20.0, 3.0, 2.0, 1.0});
  const Matrix a = weighted_edge_laplacian(star, w);
  const double expected[3][3] = {{23, 20, 20}, {20, 22, 20}, {20, 20, 21}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(a(i, j) == Approx(expected[i][j]));

  const TreeGraph path = build_tree(4, {{0, 1}, {1, 2}, {2, 3}});
  const Matrix ap = weighted_edge_laplacian(path, w);
  CHECK(ap(0, 0) == Approx(23.0));
  CHECK(ap(1, 1) == Approx(5.0));
  CHECK(ap(2, 2) == Approx(3.0));
  CHECK(std::abs(ap(0, 1)) == Approx(3.0));
  CHECK(std::abs(ap(1, 2)) == Approx(2.0));
  CHECK(ap(0, 2) == 0.0);

  // identity weights reduce to the unweighted edge Laplacian B^T B
  std::mt19937 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const TreeGraph g = testsupport::random_tree(rng, 3 + trial);
    const auto n = static_cast<std::size_t>(g.node_count());
    const Matrix a1 = weighted_edge_laplacian(g, make_frequencies(Vec(n, 1.0)));
    const Matrix b = g.incidence_matrix();
    const Matrix btb = b.transposed() * b;
    for (std::size_t i = 0; i < a1.rows(); ++i)
      for (std::size_t j = 0; j < a1.cols(); ++j)
        CHECK(a1(i, j) == Approx(btb(i, j)).margin(1e-14));
  }

  // random weights against the explicit B^T diag(omega) B product
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + trial;
    const TreeGraph g = testsupport::random_tree(rng, n);
    const Vec omega = testsupport::random_omega(rng, n, 0.1, 20.0);
    const Matrix a = weighted_edge_laplacian(g, make_frequencies(omega));
    const Matrix b = g.incidence_matrix();
    Matrix wb = b;
    for (std::size_t i = 0; i < wb.rows(); ++i)
      for (std::size_t j = 0; j < wb.cols(); ++j) wb(i, j) *= omega[i];
    const Matrix full = b.transposed() * wb;
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j)
        CHECK(a(i, j) == Approx(full(i, j)).margin(1e-12));
  }

  CHECK_THROWS_AS(weighted_edge_laplacian(star, make_frequencies({1.0, 2.0})),
                  DimensionMismatch);
}

TEST_CASE("frequency assignments require strict positivity", "[graph]") {
  const FrequencyAssignment w = make_frequencies({2.0, 0.5, 3.0});
  CHECK(w.zeta == Approx(0.5));
  CHECK_THROWS_AS(make_frequencies({1.0, 0.0}), NonPositiveFrequency);
  CHECK_THROWS_AS(make_frequencies({1.0, -2.0}), NonPositiveFrequency);
  CHECK_THROWS_AS(make_frequencies({1.0, 2.0}, 1.5), NonPositiveFrequency);
  CHECK(make_frequencies({1.0, 2.0}, 0.5).zeta == Approx(0.5));
}

TEST_CASE("edge laplacian of a tree is positive definite", "[graph][property]") {
  std::mt19937 rng(20180101);

  // unweighted: lambda_min(B^T B) stays clear of zero
  for (int trial = 0; trial < 40; ++trial) {
    std::uniform_int_distribution<int> size(2, 20);
    const TreeGraph g = testsupport::random_tree(rng, size(rng));
    const auto n = static_cast<std::size_t>(g.node_count());
    const Matrix btb = weighted_edge_laplacian(g, make_frequencies(Vec(n, 1.0)));
    CHECK(lambda_min(btb) > 1e-9);
  }

  // weighted: 200 random (tree, omega) pairs
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> size(2, 12);
    const int n = size(rng);
    const TreeGraph g = testsupport::random_tree(rng, n);
    const Vec omega = testsupport::random_omega(rng, n, 0.1, 20.0);
    CHECK(lambda_min(weighted_edge_laplacian(g, make_frequencies(omega))) > 0.0);
  }
}

TEST_CASE("spectrum is invariant under edge orientation flips", "[graph][property]") {
  std::mt19937 rng(5150);
  for (int trial = 0; trial < 30; ++trial) {
    std::uniform_int_distribution<int> size(2, 10);
    const int n = size(rng);

    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < n; ++v) {
      std::uniform_int_distribution<int> pick(0, v - 1);
      edges.emplace_back(pick(rng), v);
    }
    std::vector<std::pair<int, int>> flipped = edges;
    std::bernoulli_distribution coin(0.5);
    for (auto& [a, b] : flipped)
      if (coin(rng)) std::swap(a, b);

    const TreeGraph g1 = build_tree(n, edges);
    const TreeGraph g2 = build_tree(n, flipped, EdgeOrientation::as_given);
    const Vec omega = testsupport::random_omega(rng, n, 0.1, 20.0);
    const Spectrum s1 = sym_eigenvalues(weighted_edge_laplacian(g1, make_frequencies(omega)));
    const Spectrum s2 = sym_eigenvalues(weighted_edge_laplacian(g2, make_frequencies(omega)));
    for (std::size_t i = 0; i < s1.eigenvalues.size(); ++i)
      CHECK(s1.eigenvalues[i] == Approx(s2.eigenvalues[i]).margin(1e-9));
  }
}

TEST_CASE("nonzero laplacian eigenvalues equal the edge laplacian spectrum",
          "[graph][property]") {
  std::mt19937 rng(31415);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> size(2, 12);
    const int n = size(rng);
    const TreeGraph g = testsupport::random_tree(rng, n);
    const Spectrum node_side = sym_eigenvalues(g.graph_laplacian());
    const Matrix b = g.incidence_matrix();
    const Spectrum edge_side = sym_eigenvalues(b.transposed() * b);

    CHECK(std::abs(node_side.eigenvalues.front()) < 1e-9);  // connected: one zero mode
    for (std::size_t k = 0; k < edge_side.eigenvalues.size(); ++k)
      CHECK(node_side.eigenvalues[k + 1] == Approx(edge_side.eigenvalues[k]).margin(1e-9));
  }
}
