#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "cardiotwin/cohort.hpp"
#include "cardiotwin/eikonal.hpp"
#include "cardiotwin/graph.hpp"
#include "cardiotwin/phantom.hpp"
#include "cardiotwin/rng.hpp"

namespace cardiotwin::testing {

// Single positively oriented tet with all-interior labels.
inline TetMesh single_tet_mesh() {
  TetMesh m;
  m.nodes = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  m.tets = {{0, 1, 2, 3}};
  m.node_labels.assign(4, NodeLabel::Interior);
  m.part_labels.assign(4, PartLabel::Lv);
  return m;
}

// Two tets sharing face (0,1,2).
inline TetMesh two_tet_mesh() {
  TetMesh m;
  m.nodes = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1.0 / 3, 1.0 / 3, -1}};
  m.tets = {{0, 1, 2, 3}, {0, 2, 1, 4}};
  m.node_labels.assign(5, NodeLabel::Interior);
  m.part_labels.assign(5, PartLabel::Lv);
  return m;
}

inline FiberFrame axis_aligned_frame(std::size_t n_tets) {
  FiberFrame f;
  f.per_tet.assign(n_tets, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  return f;
}

// Random connected graph: spanning tree plus extra edges, weights in
// [0.001, 1). Geometry fields are synthetic (tests use explicit weights).
inline std::pair<MeshGraph, std::vector<double>> random_connected_graph(Rng& rng, int n_nodes,
                                                                        int extra_edges) {
  MeshGraph g;
  g.node_count = n_nodes;
  std::set<std::pair<int, int>> seen;
  std::vector<double> weights;
  auto add_edge = [&](int a, int b, double w) {
    if (a > b) std::swap(a, b);
    if (a == b || seen.count({a, b})) return;
    seen.insert({a, b});
    MeshGraph::Edge e;
    e.a = a;
    e.b = b;
    e.length = w;
    e.unit = {1, 0, 0};
    e.tag = EdgeTag::Myocardium;
    e.tet = 0;
    g.edges.push_back(e);
    weights.push_back(w);
  };
  for (int v = 1; v < n_nodes; ++v)
    add_edge(static_cast<int>(rng.uniform_int(0, v - 1)), v, rng.uniform(0.001, 1.0));
  for (int k = 0; k < extra_edges; ++k)
    add_edge(static_cast<int>(rng.uniform_int(0, n_nodes - 1)),
             static_cast<int>(rng.uniform_int(0, n_nodes - 1)), rng.uniform(0.001, 1.0));
  finalize_adjacency(g);
  return {g, weights};
}

// Small phantom used across suites; cached because construction is not free.
inline const std::pair<TetMesh, FiberFrame>& default_phantom() {
  static const std::pair<TetMesh, FiberFrame> phantom = build_phantom(PhantomConfig{});
  return phantom;
}

inline PhantomConfig coarse_phantom_config() {
  PhantomConfig c;
  c.resolution = 0.8;
  return c;
}

inline const std::pair<TetMesh, FiberFrame>& coarse_phantom() {
  static const std::pair<TetMesh, FiberFrame> phantom = build_phantom(coarse_phantom_config());
  return phantom;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace cardiotwin::testing
