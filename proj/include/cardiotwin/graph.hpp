#pragma once

#include <cstdint>
#include <vector>

#include "cardiotwin/mesh.hpp"

namespace cardiotwin {

// Wave speeds in cm/s along the fiber, sheet, sheet-normal and endocardial
// directions.
struct ConductionVelocities {
  double v_f = 0, v_s = 0, v_n = 0, v_e = 0;

  ConductionVelocities scaled(double k) const { return {v_f * k, v_s * k, v_n * k, v_e * k}; }

  // v_f > v_s > v_n > 0 and v_e > 0.
  void validate() const;
};

enum class EdgeTag : std::uint8_t { EndoLv, EndoRv, Myocardium };

// Undirected traversal graph over the tet edges. Each edge keeps the frame of
// its lowest-index owning tet; traversal time is direction-independent.
struct MeshGraph {
  struct Edge {
    int a, b;        // node indices, a < b
    double length;   // cm
    Vec3 unit;       // direction from a to b
    EdgeTag tag;
    int tet;         // lowest-index owning tet
  };

  int node_count = 0;
  std::vector<Edge> edges;

  // CSR adjacency: for node u, neighbors are adj[adj_offset[u]..adj_offset[u+1]).
  std::vector<int> adj_offset;
  std::vector<std::pair<int, int>> adj;  // (neighbor node, edge index)
};

MeshGraph build_graph(const TetMesh& mesh);

// Rebuilds the CSR adjacency from node_count and edges. build_graph calls
// this; it is exposed so synthetic graphs can be assembled directly.
void finalize_adjacency(MeshGraph& graph);

// Anisotropic propagation speed along unit direction u for a local triad.
double anisotropic_speed(const Vec3& u, const FiberFrame::Triad& triad,
                         const ConductionVelocities& cv);

// Traversal time across one edge (seconds). Myocardial edges move at the
// anisotropic speed; endocardial edges at max(v_e, anisotropic speed).
double edge_traversal_time(const MeshGraph::Edge& edge, const FiberFrame& frame,
                           const ConductionVelocities& cv);

// Per-edge traversal times for a whole graph.
std::vector<double> compute_edge_weights(const MeshGraph& graph, const FiberFrame& frame,
                                         const ConductionVelocities& cv);

}  // namespace cardiotwin
