#pragma once

#include <span>
#include <vector>

#include "cardiotwin/mesh.hpp"

namespace cardiotwin {

// Point set with per-point part labels (the 4th input channel).
struct PointCloud {
  std::vector<Vec3> points;
  std::vector<PartLabel> labels;

  std::size_t size() const { return points.size(); }

  PointCloud filtered(PartLabel keep) const;
};

// Farthest-point sampling. Starts at start_index, then greedily adds the
// point with the largest distance to the selected set; ties break on the
// lower index. Returns indices into `points`.
std::vector<int> farthest_point_indices(std::span<const Vec3> points, int n, int start_index);

// FPS over the mesh nodes, seeded at the node nearest the mesh centroid.
// Fails if n exceeds the node count (no sampling with replacement).
PointCloud resample_pointcloud(const TetMesh& mesh, int n);

// FPS subsample of an existing cloud, seeded at the point nearest its centroid.
PointCloud fps_subsample(const PointCloud& cloud, int n);

// Smallest pairwise distance within a point set (0 for fewer than 2 points).
double min_pairwise_distance(std::span<const Vec3> points);

}  // namespace cardiotwin
