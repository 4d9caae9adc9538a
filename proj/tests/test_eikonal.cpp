#include <cmath>

#include "doctest.h"
#include "test_helpers.hpp"

using namespace cardiotwin;
using namespace cardiotwin::testing;

namespace {

MeshGraph path_graph(int n, double length) {
  MeshGraph g;
  g.node_count = n;
  for (int i = 0; i + 1 < n; ++i) {
    MeshGraph::Edge e;
    e.a = i;
    e.b = i + 1;
    e.length = length;
    e.unit = {1, 0, 0};
    e.tag = EdgeTag::Myocardium;
    e.tet = 0;
    g.edges.push_back(e);
  }
  finalize_adjacency(g);
  return g;
}

}  // namespace

TEST_CASE("path graph with isotropic speed gives hand-computed times") {
  const MeshGraph g = path_graph(3, 1.0);
  const std::vector<double> w = {1.0 / 100.0, 1.0 / 100.0};  // unit edges at 100 cm/s
  const RootNodeSet::Root root{0, 0.0};
  const auto atm = solve_activation(g, w, std::span{&root, 1});
  CHECK(atm.times[0] == doctest::Approx(0.0));
  CHECK(atm.times[1] == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(atm.times[2] == doctest::Approx(0.02).epsilon(1e-14));
  CHECK(atm.max_time == doctest::Approx(0.02).epsilon(1e-14));
  CHECK(atm.visited == 3);
}

TEST_CASE("doubling all speeds exactly halves all times") {
  const auto& [mesh, frame] = coarse_phantom();
  const MeshGraph g = build_graph(mesh);
  const RootNodeSet roots = place_root_nodes(mesh);
  const ConductionVelocities cv{80, 40, 30, 150};
  const auto base = solve_activation(g, cv, frame, roots);
  const auto doubled = solve_activation(g, cv.scaled(2.0), frame, roots);
  for (std::size_t i = 0; i < base.times.size(); ++i)
    CHECK(doubled.times[i] == doctest::Approx(base.times[i] / 2.0).epsilon(1e-12));
}

TEST_CASE("speed scaling law holds for k in {0.5, 2, 10}") {
  const auto& [mesh, frame] = coarse_phantom();
  const MeshGraph g = build_graph(mesh);
  const RootNodeSet roots = place_root_nodes(mesh);
  const ConductionVelocities cv{70, 45, 31, 160};
  const auto base = solve_activation(g, cv, frame, roots);
  for (double k : {0.5, 2.0, 10.0}) {
    const auto scaled = solve_activation(g, cv.scaled(k), frame, roots);
    for (std::size_t i = 0; i < base.times.size(); ++i) {
      const double expect = base.times[i] / k;
      CHECK(std::abs(scaled.times[i] - expect) <= 1e-12 * std::max(expect, 1e-30));
    }
  }
}

TEST_CASE("Dijkstra equals Bellman-Ford on random graphs, both directions") {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 198));
    auto [g, w] = random_connected_graph(rng, n, n / 2);
    std::vector<RootNodeSet::Root> roots;
    const int n_roots = 1 + static_cast<int>(rng.uniform_int(0, 2));
    for (int r = 0; r < n_roots; ++r)
      roots.push_back({static_cast<int>(rng.uniform_int(0, n - 1)), rng.uniform(0.0, 0.1)});
    const auto dj = solve_activation(g, w, roots);
    const auto bf = oracle_bellman_ford(g, w, roots);
    REQUIRE(dj.times.size() == bf.times.size());
    for (std::size_t i = 0; i < dj.times.size(); ++i)
      CHECK(std::abs(dj.times[i] - bf.times[i]) <= 1e-12);
  }
}

TEST_CASE("Bellman-Ford basics") {
  MeshGraph g;
  g.node_count = 1;
  finalize_adjacency(g);
  const RootNodeSet::Root root{0, 0.0};
  const auto atm = oracle_bellman_ford(g, {}, std::span{&root, 1});
  CHECK(atm.times == std::vector<double>{0.0});

  // Two roots, equidistant middle node takes the common distance.
  const MeshGraph p = path_graph(3, 1.0);
  const std::vector<double> w = {0.5, 0.5};
  const std::vector<RootNodeSet::Root> roots = {{0, 0.0}, {2, 0.0}};
  const auto two = oracle_bellman_ford(p, w, roots);
  CHECK(two.times[1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("unreachable nodes produce an explicit error naming the node") {
  MeshGraph g;
  g.node_count = 3;
  MeshGraph::Edge e;
  e.a = 0;
  e.b = 1;
  e.length = 1;
  e.unit = {1, 0, 0};
  e.tag = EdgeTag::Myocardium;
  e.tet = 0;
  g.edges.push_back(e);
  finalize_adjacency(g);
  const std::vector<double> w = {1.0};
  const RootNodeSet::Root root{0, 0.0};
  CHECK_THROWS_WITH_AS(solve_activation(g, w, std::span{&root, 1}),
                       doctest::Contains("node 2 is unreachable"), std::runtime_error);
  CHECK_THROWS_WITH_AS(oracle_bellman_ford(g, w, std::span{&root, 1}),
                       doctest::Contains("node 2 is unreachable"), std::runtime_error);
}

TEST_CASE("adding a root never increases any activation time") {
  Rng rng(99);
  auto [g, w] = random_connected_graph(rng, 120, 80);
  std::vector<RootNodeSet::Root> roots = {{5, 0.0}, {40, 0.01}};
  const auto base = solve_activation(g, w, roots);
  roots.push_back({77, 0.002});
  const auto more = solve_activation(g, w, roots);
  for (std::size_t i = 0; i < base.times.size(); ++i) CHECK(more.times[i] <= base.times[i] + 1e-15);
}

TEST_CASE("edge feasibility |t_i - t_j| <= w(i,j)") {
  const auto& [mesh, frame] = coarse_phantom();
  const MeshGraph g = build_graph(mesh);
  const RootNodeSet roots = place_root_nodes(mesh);
  const ConductionVelocities cv{65, 42, 33, 125};
  const std::vector<double> w = compute_edge_weights(g, frame, cv);
  const auto atm = solve_activation(g, w, roots.roots);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const double diff = std::abs(atm.times[static_cast<std::size_t>(g.edges[e].a)] -
                                 atm.times[static_cast<std::size_t>(g.edges[e].b)]);
    CHECK(diff <= w[e] + 1e-12);
  }
}

TEST_CASE("activation indicator") {
  ActivationTimeMap atm;
  atm.times = {0.0, 0.02, 0.05, 0.01, 0.0};
  atm.max_time = 0.05;

  SUBCASE("t = 0 marks exactly the onset-zero roots") {
    const auto vm = activation_indicator(atm, 0.0);
    CHECK(vm == std::vector<std::uint8_t>{1, 0, 0, 0, 1});
  }
  SUBCASE("t >= max marks everything") {
    const auto vm = activation_indicator(atm, 0.05);
    CHECK(vm == std::vector<std::uint8_t>{1, 1, 1, 1, 1});
  }
  SUBCASE("popcount equals a direct count at the median") {
    Rng rng(5);
    ActivationTimeMap big;
    for (int i = 0; i < 501; ++i) big.times.push_back(rng.uniform(0.0, 0.2));
    std::vector<double> sorted = big.times;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    const auto vm = activation_indicator(big, median);
    std::size_t pop = 0, direct = 0;
    for (auto v : vm) pop += v;
    for (double t : big.times) direct += t <= median ? 1 : 0;
    CHECK(pop == direct);
  }
  SUBCASE("negative query times are rejected") {
    CHECK_THROWS_AS(activation_indicator(atm, -1.0), input_error);
  }
}

TEST_CASE("root node set validation") {
  const auto& [mesh, frame] = coarse_phantom();
  RootNodeSet roots = place_root_nodes(mesh);
  CHECK_NOTHROW(roots.validate(mesh));

  RootNodeSet too_few = roots;
  too_few.roots.pop_back();
  CHECK_THROWS_WITH_AS(too_few.validate(mesh), doctest::Contains("exactly 7"), input_error);

  RootNodeSet wrong_label = roots;
  std::swap(wrong_label.roots[0], wrong_label.roots[4]);  // RV node in an LV slot
  CHECK_THROWS_AS(wrong_label.validate(mesh), input_error);

  RootNodeSet negative = roots;
  negative.roots[2].onset = -0.1;
  CHECK_THROWS_AS(negative.validate(mesh), input_error);
}
