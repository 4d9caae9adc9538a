#include "cardiotwin/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace cardiotwin {

void ConductionVelocities::validate() const {
  std::ostringstream os;
  if (!(v_n > 0.0)) {
    os << "conduction velocities invalid: v_n = " << v_n << " must be > 0";
    throw input_error(os.str());
  }
  if (!(v_f > v_s && v_s > v_n)) {
    os << "conduction velocities invalid: need v_f > v_s > v_n, got " << v_f << ", " << v_s
       << ", " << v_n;
    throw input_error(os.str());
  }
  if (!(v_e > 0.0)) {
    os << "conduction velocities invalid: v_e = " << v_e << " must be > 0";
    throw input_error(os.str());
  }
}

MeshGraph build_graph(const TetMesh& mesh) {
  mesh.validate();
  MeshGraph g;
  g.node_count = mesh.num_nodes();

  static const int kTetEdges[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  std::map<std::pair<int, int>, int> seen;  // (a,b) -> edge index; first tet wins
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const auto& tet = mesh.tets[static_cast<std::size_t>(t)];
    for (const auto& e : kTetEdges) {
      int a = tet[e[0]], b = tet[e[1]];
      if (a > b) std::swap(a, b);
      const auto key = std::make_pair(a, b);
      if (seen.count(key)) continue;
      seen.emplace(key, static_cast<int>(g.edges.size()));
      MeshGraph::Edge edge;
      edge.a = a;
      edge.b = b;
      const Vec3 d = mesh.nodes[static_cast<std::size_t>(b)] - mesh.nodes[static_cast<std::size_t>(a)];
      edge.length = d.norm();
      if (edge.length <= 0.0) {
        std::ostringstream os;
        os << "zero-length edge between nodes " << a << " and " << b;
        throw input_error(os.str());
      }
      edge.unit = d / edge.length;
      const NodeLabel la = mesh.node_labels[static_cast<std::size_t>(a)];
      const NodeLabel lb = mesh.node_labels[static_cast<std::size_t>(b)];
      if (la == NodeLabel::LvEndo && lb == NodeLabel::LvEndo) edge.tag = EdgeTag::EndoLv;
      else if (la == NodeLabel::RvEndo && lb == NodeLabel::RvEndo) edge.tag = EdgeTag::EndoRv;
      else edge.tag = EdgeTag::Myocardium;
      edge.tet = t;
      g.edges.push_back(edge);
    }
  }

  finalize_adjacency(g);
  return g;
}

void finalize_adjacency(MeshGraph& g) {
  std::vector<int> degree(static_cast<std::size_t>(g.node_count), 0);
  for (const auto& e : g.edges) {
    degree[static_cast<std::size_t>(e.a)]++;
    degree[static_cast<std::size_t>(e.b)]++;
  }
  g.adj_offset.assign(static_cast<std::size_t>(g.node_count) + 1, 0);
  for (int u = 0; u < g.node_count; ++u)
    g.adj_offset[static_cast<std::size_t>(u) + 1] =
        g.adj_offset[static_cast<std::size_t>(u)] + degree[static_cast<std::size_t>(u)];
  g.adj.assign(g.edges.size() * 2, {0, 0});
  std::vector<int> cursor(g.adj_offset.begin(), g.adj_offset.end() - 1);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    g.adj[static_cast<std::size_t>(cursor[static_cast<std::size_t>(e.a)]++)] = {e.b, static_cast<int>(i)};
    g.adj[static_cast<std::size_t>(cursor[static_cast<std::size_t>(e.b)]++)] = {e.a, static_cast<int>(i)};
  }
}

double anisotropic_speed(const Vec3& u, const FiberFrame::Triad& triad,
                         const ConductionVelocities& cv) {
  const double pf = u.dot(triad.f);
  const double ps = u.dot(triad.s);
  const double pn = u.dot(triad.n);
  return std::sqrt(pf * pf * cv.v_f * cv.v_f + ps * ps * cv.v_s * cv.v_s +
                   pn * pn * cv.v_n * cv.v_n);
}

double edge_traversal_time(const MeshGraph::Edge& edge, const FiberFrame& frame,
                           const ConductionVelocities& cv) {
  if (edge.length <= 0.0) throw input_error("edge_traversal_time: zero-length edge");
  const FiberFrame::Triad& triad = frame.per_tet[static_cast<std::size_t>(edge.tet)];
  double speed = anisotropic_speed(edge.unit, triad, cv);
  if (edge.tag != EdgeTag::Myocardium) speed = std::max(cv.v_e, speed);
  return edge.length / speed;
}

std::vector<double> compute_edge_weights(const MeshGraph& graph, const FiberFrame& frame,
                                         const ConductionVelocities& cv) {
  std::vector<double> w(graph.edges.size());
  for (std::size_t i = 0; i < graph.edges.size(); ++i)
    w[i] = edge_traversal_time(graph.edges[i], frame, cv);
  return w;
}

}  // namespace cardiotwin
