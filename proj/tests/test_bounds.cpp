#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "kuratree/bounds.hpp"
#include "kuratree/graph.hpp"
#include "support/oracles.hpp"

using namespace kuratree;
using Catch::Approx;

namespace {

constexpr double kPi = 3.141592653589793;

TreeGraph star4() { return build_tree(4, {{0, 1}, {0, 2}, {0, 3}}); }
TreeGraph line4() { return build_tree(4, {{0, 1}, {1, 2}, {2, 3}}); }

}  // namespace

TEST_CASE("delta_omega_max ranges over edges, not node pairs", "[bounds]") {
  CHECK(delta_omega_max(star4(), make_frequencies({20, 3, 2, 1})) == Approx(19.0));
  CHECK(delta_omega_max(line4(), make_frequencies({1, 10, 5, 6})) == Approx(9.0));
  CHECK(delta_omega_max(line4(), make_frequencies(Vec(4, 3.5))) == 0.0);
}

TEST_CASE("spectral lower bound (i)", "[bounds]") {
  CHECK(lower_bound_spectral(star4(), make_frequencies({20, 3, 2, 1})) == Approx(1.0));
  CHECK(lower_bound_spectral(line4(), make_frequencies({20, 3, 2, 1})) ==
        Approx(0.585786437626905).margin(1e-9));
  CHECK(lower_bound_spectral(star4(), make_frequencies(Vec(4, 7.0))) ==
        Approx(7.0).margin(1e-9));
}

TEST_CASE("degree-corrected lower bound (ii)", "[bounds]") {
  // hub degree 3 makes the hub term negative; the slowest leaf decides
  CHECK(lower_bound_degree(star4(), make_frequencies({1, 10, 5, 6})) == Approx(4.0));
  CHECK(lower_bound_degree(line4(), make_frequencies({20, 3, 2, 1})) == Approx(0.0));
  CHECK(lower_bound_degree(build_tree(2, {{0, 1}}), make_frequencies({3.0, 4.5})) ==
        Approx(7.5));

  // a fast hub drives the bound negative; it is reported as-is and simply
  // loses to bound (i) in the report
  CHECK(lower_bound_degree(star4(), make_frequencies({20, 3, 2, 1})) == Approx(-19.0));
  const BoundsReport r = bounds_report(star4(), make_frequencies({20, 3, 2, 1}), 0.0);
  CHECK(r.lower_bound_degree == Approx(-19.0));
  CHECK(r.lower_bound_best == Approx(1.0));
}

TEST_CASE("endpoint-sum upper bound", "[bounds]") {
  CHECK(upper_bound(star4(), make_frequencies({20, 3, 2, 1})) == Approx(21.0));
  CHECK(upper_bound(star4(), make_frequencies({1, 10, 5, 6})) == Approx(6.0));
  CHECK(upper_bound(build_tree(2, {{0, 1}}), make_frequencies({3.0, 4.5})) == Approx(7.5));
}

TEST_CASE("sufficient kappa", "[bounds]") {
  CHECK(sufficient_kappa(star4(), make_frequencies({20, 3, 2, 1}), 0.0) ==
        Approx(13.4).margin(0.05));
  CHECK(sufficient_kappa(star4(), make_frequencies({1, 10, 5, 6}), 0.0) ==
        Approx(1.68).margin(0.05));
  CHECK(sufficient_kappa(line4(), make_frequencies(Vec(4, 2.0)), 0.3) == 0.0);
  CHECK_THROWS_AS(sufficient_kappa(star4(), make_frequencies({20, 3, 2, 1}), kPi / 2),
                  DegenerateEpsilon);
  CHECK_THROWS_AS(sufficient_kappa(star4(), make_frequencies({20, 3, 2, 1}), -0.1),
                  DegenerateEpsilon);

  // a positive margin inflates kappa by 1 / cos(epsilon)
  const double k0 = sufficient_kappa(star4(), make_frequencies({20, 3, 2, 1}), 0.0);
  const double k1 = sufficient_kappa(star4(), make_frequencies({20, 3, 2, 1}), kPi / 10);
  CHECK(k1 == Approx(k0 / std::cos(kPi / 10)).margin(1e-9));

  // conservative variant divides by the best structural bound instead
  const double kc =
      sufficient_kappa(star4(), make_frequencies({20, 3, 2, 1}), 0.0, KappaEstimate::conservative);
  CHECK(kc == Approx(19.0 / 1.0).margin(1e-9));
  CHECK(kc >= k0);
}

TEST_CASE("bounds_report assembles every field", "[bounds]") {
  const BoundsReport r = bounds_report(line4(), make_frequencies({20, 3, 2, 1}), 0.0);
  CHECK(r.lambda_min_exact == Approx(1.64).margin(0.01));
  CHECK(r.lower_bound_best == Approx(0.585786437626905).margin(1e-9));
  CHECK(r.upper_bound == Approx(3.0));
  CHECK(r.delta_omega_max == Approx(17.0));
  CHECK(r.kappa_sufficient == Approx(10.36).margin(0.05));

  const BoundsReport r2 = bounds_report(build_tree(2, {{0, 1}}), make_frequencies({5, 5}), 0.0);
  CHECK(r2.lower_bound_best == Approx(10.0).margin(1e-9));
  CHECK(r2.upper_bound == Approx(10.0));
  CHECK(r2.lambda_min_exact == Approx(10.0).margin(1e-9));
  CHECK(r2.kappa_sufficient == 0.0);

  const BoundsReport r3 = bounds_report(star4(), make_frequencies({1, 10, 5, 6}), 0.0);
  CHECK(r3.lambda_min_exact == Approx(5.36).margin(0.01));
  CHECK(r3.lower_bound_best == Approx(4.0));
  CHECK(r3.kappa_sufficient == Approx(1.68).margin(0.05));
}

TEST_CASE("bound bracket holds on random instances", "[bounds][property]") {
  std::mt19937 rng(20181216);
  for (int trial = 0; trial < 500; ++trial) {
    std::uniform_int_distribution<int> size(2, 12);
    const int n = size(rng);
    const TreeGraph g = testsupport::random_tree(rng, n);
    const FrequencyAssignment w =
        make_frequencies(testsupport::random_omega(rng, n, 0.1, 20.0));
    const BoundsReport r = bounds_report(g, w, 0.0);  // throws on a broken bracket
    CHECK(r.lower_bound_best <= r.lambda_min_exact + 1e-9);
    CHECK(r.lambda_min_exact <= r.upper_bound + 1e-9);
  }
}

TEST_CASE("uniform frequency scaling", "[bounds][property]") {
  std::mt19937 rng(55);
  for (int trial = 0; trial < 25; ++trial) {
    std::uniform_int_distribution<int> size(2, 10);
    const int n = size(rng);
    const TreeGraph g = testsupport::random_tree(rng, n);
    const Vec omega = testsupport::random_omega(rng, n, 0.5, 10.0);
    std::uniform_real_distribution<double> cdist(0.1, 8.0);
    const double c = cdist(rng);
    Vec scaled = omega;
    for (double& v : scaled) v *= c;

    const FrequencyAssignment w = make_frequencies(omega);
    const FrequencyAssignment wc = make_frequencies(scaled);
    const BoundsReport r = bounds_report(g, w, 0.1);
    const BoundsReport rc = bounds_report(g, wc, 0.1);

    CHECK(rc.lambda_min_exact == Approx(c * r.lambda_min_exact).margin(1e-7));
    CHECK(rc.lower_bound_spectral == Approx(c * r.lower_bound_spectral).margin(1e-7));
    CHECK(rc.lower_bound_degree == Approx(c * r.lower_bound_degree).margin(1e-7));
    CHECK(rc.upper_bound == Approx(c * r.upper_bound).margin(1e-9));
    CHECK(rc.delta_omega_max == Approx(c * r.delta_omega_max).margin(1e-9));
    CHECK(rc.kappa_sufficient == Approx(r.kappa_sufficient).margin(1e-6));
  }
}

TEST_CASE("spectral bound closed form on paths", "[bounds][property]") {
  std::mt19937 rng(606);
  for (int n = 2; n <= 12; ++n) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v < n - 1; ++v) edges.emplace_back(v, v + 1);
    const TreeGraph path = build_tree(n, edges);
    const Vec omega = testsupport::random_omega(rng, n, 0.2, 15.0);
    double omega_min = omega[0];
    for (double v : omega) omega_min = std::min(omega_min, v);
    const double expected = omega_min * 2.0 * (1.0 - std::cos(kPi / n));
    CHECK(lower_bound_spectral(path, make_frequencies(omega)) ==
          Approx(expected).margin(1e-9));
  }
}

TEST_CASE("identical frequencies need no coupling", "[bounds][property]") {
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> size(2, 10);
    const int n = size(rng);
    std::uniform_real_distribution<double> level(0.1, 30.0);
    const TreeGraph g = testsupport::random_tree(rng, n);
    CHECK(sufficient_kappa(g, make_frequencies(Vec(static_cast<std::size_t>(n), level(rng))),
                           0.2) == 0.0);
  }
}

TEST_CASE("placement sweep ranks candidate nodes", "[bounds]") {
  // a deviant frequency parked on the hub leaves lambda_min at the base level
  for (int leaves : {3, 5, 8}) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
    const TreeGraph star = build_tree(leaves + 1, edges);
    const Vec sweep = placement_sweep(star, 10.0, 1.0);
    CHECK(sweep[0] == Approx(10.0).margin(1e-8));
    for (std::size_t v = 1; v < sweep.size(); ++v) CHECK(sweep[v] < sweep[0]);
  }

  // identical base and special frequencies flatten the sweep
  const Vec flat = placement_sweep(line4(), 3.0, 3.0);
  for (double v : flat) CHECK(v == Approx(flat[0]).margin(1e-9));

  // on an odd path the center placement wins and the ranking decays outwards
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < 6; ++v) edges.emplace_back(v, v + 1);
  const TreeGraph path7 = build_tree(7, edges);
  const Vec sweep = placement_sweep(path7, 10.0, 1.0);
  for (int v = 0; v < 3; ++v) CHECK(sweep[static_cast<std::size_t>(v)] <
                                    sweep[static_cast<std::size_t>(v) + 1]);
  for (int v = 3; v < 6; ++v) CHECK(sweep[static_cast<std::size_t>(v)] >
                                    sweep[static_cast<std::size_t>(v) + 1]);
  CHECK(sweep[3] == Approx(1.980622641951615).margin(1e-9));
  CHECK(sweep[0] == Approx(0.859162495685489).margin(1e-9));

  CHECK_THROWS_AS(placement_sweep(path7, -1.0, 2.0), NonPositiveFrequency);
}

TEST_CASE("placement sweep on an 8-node star and a joined star pair", "[bounds]") {
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v <= 7; ++v) edges.emplace_back(0, v);
  const TreeGraph star8 = build_tree(8, edges);
  const Vec sweep = placement_sweep(star8, 10.0, 1.0);
  CHECK(sweep[0] == Approx(10.0).margin(1e-8));
  CHECK(sweep[1] == Approx(2.156160859924318).margin(1e-9));

  // two 4-node stars joined hub to hub
  const TreeGraph twin =
      build_tree(8, {{0, 1}, {0, 2}, {0, 3}, {4, 5}, {4, 6}, {4, 7}, {0, 4}});
  const Vec tsweep = placement_sweep(twin, 10.0, 1.0);
  CHECK(tsweep[0] == Approx(2.672534881303223).margin(1e-9));   // hub placement
  CHECK(tsweep[7] == Approx(1.539932023130956).margin(1e-9));   // leaf placement
  CHECK(tsweep[0] > tsweep[7]);
}
