#include "cardiotwin/eikonal.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <sstream>

namespace cardiotwin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_roots(int node_count, std::span<const RootNodeSet::Root> roots) {
  if (roots.empty()) throw input_error("solver requires at least one root node");
  for (const auto& r : roots) {
    if (r.node < 0 || r.node >= node_count) {
      std::ostringstream os;
      os << "root node " << r.node << " out of range [0," << node_count << ")";
      throw input_error(os.str());
    }
    if (!(r.onset >= 0.0)) {
      std::ostringstream os;
      os << "root node " << r.node << " has negative onset " << r.onset;
      throw input_error(os.str());
    }
  }
}

void check_reachable(const std::vector<double>& dist) {
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] == kInf) {
      std::ostringstream os;
      os << "node " << i << " is unreachable from the root set";
      throw std::runtime_error(os.str());
    }
  }
}

ActivationTimeMap finish(std::vector<double> dist, std::size_t visited) {
  check_reachable(dist);
  ActivationTimeMap atm;
  atm.max_time = *std::max_element(dist.begin(), dist.end());
  atm.times = std::move(dist);
  atm.visited = visited;
  return atm;
}

}  // namespace

void RootNodeSet::validate(const TetMesh& mesh) const {
  if (roots.size() != 7) {
    std::ostringstream os;
    os << "root node set must have exactly 7 entries, got " << roots.size();
    throw input_error(os.str());
  }
  int lv = 0, rv = 0;
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const auto& r = roots[k];
    if (r.node < 0 || r.node >= mesh.num_nodes()) {
      std::ostringstream os;
      os << "root " << k << ": node " << r.node << " out of range";
      throw input_error(os.str());
    }
    if (!(r.onset >= 0.0)) {
      std::ostringstream os;
      os << "root " << k << ": negative onset " << r.onset;
      throw input_error(os.str());
    }
    const NodeLabel l = mesh.node_labels[static_cast<std::size_t>(r.node)];
    if (k < 4) {
      if (l != NodeLabel::LvEndo) {
        std::ostringstream os;
        os << "root " << k << ": node " << r.node << " is " << to_string(l)
           << ", expected LV_ENDO";
        throw input_error(os.str());
      }
      ++lv;
    } else {
      if (l != NodeLabel::RvEndo) {
        std::ostringstream os;
        os << "root " << k << ": node " << r.node << " is " << to_string(l)
           << ", expected RV_ENDO";
        throw input_error(os.str());
      }
      ++rv;
    }
    for (std::size_t j = 0; j < k; ++j)
      if (roots[j].node == r.node) {
        std::ostringstream os;
        os << "root " << k << " duplicates node " << r.node;
        throw input_error(os.str());
      }
  }
  (void)lv;
  (void)rv;
}

ActivationTimeMap solve_activation(const MeshGraph& graph, std::span<const double> weights,
                                   std::span<const RootNodeSet::Root> roots) {
  check_roots(graph.node_count, roots);
  if (weights.size() != graph.edges.size())
    throw input_error("edge weight count does not match graph");

  std::vector<double> dist(static_cast<std::size_t>(graph.node_count), kInf);
  using Item = std::pair<double, int>;  // (time, node); index breaks ties
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  for (const auto& r : roots) {
    const auto i = static_cast<std::size_t>(r.node);
    if (r.onset < dist[i]) {
      dist[i] = r.onset;
      heap.emplace(r.onset, r.node);
    }
  }

  std::size_t visited = 0;
  while (!heap.empty()) {
    const auto [t, u] = heap.top();
    heap.pop();
    if (t > dist[static_cast<std::size_t>(u)]) continue;  // stale entry
    ++visited;
    const int begin = graph.adj_offset[static_cast<std::size_t>(u)];
    const int end = graph.adj_offset[static_cast<std::size_t>(u) + 1];
    for (int k = begin; k < end; ++k) {
      const auto [v, e] = graph.adj[static_cast<std::size_t>(k)];
      const double cand = t + weights[static_cast<std::size_t>(e)];
      if (cand < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = cand;
        heap.emplace(cand, v);
      }
    }
  }
  return finish(std::move(dist), visited);
}

ActivationTimeMap solve_activation(const MeshGraph& graph, const ConductionVelocities& cv,
                                   const FiberFrame& frame, const RootNodeSet& roots) {
  const std::vector<double> w = compute_edge_weights(graph, frame, cv);
  return solve_activation(graph, w, roots.roots);
}

ActivationTimeMap oracle_bellman_ford(const MeshGraph& graph, std::span<const double> weights,
                                      std::span<const RootNodeSet::Root> roots) {
  check_roots(graph.node_count, roots);
  if (weights.size() != graph.edges.size())
    throw input_error("edge weight count does not match graph");

  std::vector<double> dist(static_cast<std::size_t>(graph.node_count), kInf);
  for (const auto& r : roots)
    dist[static_cast<std::size_t>(r.node)] = std::min(dist[static_cast<std::size_t>(r.node)], r.onset);

  for (int round = 1; round < graph.node_count; ++round) {
    bool changed = false;
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
      const auto& edge = graph.edges[e];
      const double w = weights[e];
      const auto a = static_cast<std::size_t>(edge.a);
      const auto b = static_cast<std::size_t>(edge.b);
      if (dist[a] + w < dist[b]) { dist[b] = dist[a] + w; changed = true; }
      if (dist[b] + w < dist[a]) { dist[a] = dist[b] + w; changed = true; }
    }
    if (!changed) break;
  }
  return finish(std::move(dist), static_cast<std::size_t>(graph.node_count));
}

std::vector<std::uint8_t> activation_indicator(const ActivationTimeMap& atm, double t) {
  if (!(t >= 0.0)) throw input_error("activation_indicator: t must be >= 0");
  std::vector<std::uint8_t> vm(atm.times.size());
  for (std::size_t i = 0; i < atm.times.size(); ++i) vm[i] = atm.times[i] <= t ? 1 : 0;
  return vm;
}

}  // namespace cardiotwin
