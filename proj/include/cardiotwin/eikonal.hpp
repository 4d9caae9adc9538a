#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cardiotwin/graph.hpp"

namespace cardiotwin {

// Earliest-activation sites. The canonical ordering is the four LV sites
// followed by the three RV sites (see place_root_nodes in cohort.hpp).
struct RootNodeSet {
  struct Root {
    int node = -1;
    double onset = 0.0;  // seconds
  };
  std::vector<Root> roots;

  // Exactly 7 roots, 4 on the LV endocardium then 3 on the RV endocardium,
  // onsets >= 0, indices distinct and in range.
  void validate(const TetMesh& mesh) const;
};

struct ActivationTimeMap {
  std::vector<double> times;  // seconds, per node
  std::size_t visited = 0;    // settled nodes (solver metadata)
  double max_time = 0.0;

  std::size_t size() const { return times.size(); }
};

// Multi-source Dijkstra over precomputed edge weights. Ties in the priority
// queue break by node index. Throws if any node is unreachable, naming it.
ActivationTimeMap solve_activation(const MeshGraph& graph, std::span<const double> weights,
                                   std::span<const RootNodeSet::Root> roots);

// Convenience overload computing the weights from the physiology.
ActivationTimeMap solve_activation(const MeshGraph& graph, const ConductionVelocities& cv,
                                   const FiberFrame& frame, const RootNodeSet& roots);

// Exact multi-source shortest paths by |V|-1 relaxation rounds. Test oracle;
// same contract as solve_activation.
ActivationTimeMap oracle_bellman_ford(const MeshGraph& graph, std::span<const double> weights,
                                      std::span<const RootNodeSet::Root> roots);

// V_m indicator at time t: 1 where times[i] <= t, else 0.
std::vector<std::uint8_t> activation_indicator(const ActivationTimeMap& atm, double t);

}  // namespace cardiotwin
