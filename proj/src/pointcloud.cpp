#include "cardiotwin/pointcloud.hpp"

#include <limits>
#include <sstream>

namespace cardiotwin {

namespace {

int nearest_to_centroid(std::span<const Vec3> points) {
  Vec3 c{0, 0, 0};
  for (const Vec3& p : points) c += p;
  c = c / static_cast<double>(points.size());
  int best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d2 = (points[i] - c).squared_norm();
    if (d2 < best_d2) { best_d2 = d2; best = static_cast<int>(i); }
  }
  return best;
}

}  // namespace

PointCloud PointCloud::filtered(PartLabel keep) const {
  PointCloud out;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (labels[i] == keep) {
      out.points.push_back(points[i]);
      out.labels.push_back(labels[i]);
    }
  return out;
}

std::vector<int> farthest_point_indices(std::span<const Vec3> points, int n, int start_index) {
  const int total = static_cast<int>(points.size());
  if (n < 1 || n > total) {
    std::ostringstream os;
    os << "farthest point sampling: requested " << n << " of " << total
       << " points (replacement is not allowed)";
    throw input_error(os.str());
  }
  std::vector<int> selected;
  selected.reserve(static_cast<std::size_t>(n));
  selected.push_back(start_index);

  std::vector<double> d2(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    d2[i] = (points[i] - points[static_cast<std::size_t>(start_index)]).squared_norm();

  while (static_cast<int>(selected.size()) < n) {
    int best = 0;
    double best_d2 = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i)
      if (d2[i] > best_d2) { best_d2 = d2[i]; best = static_cast<int>(i); }
    selected.push_back(best);
    for (std::size_t i = 0; i < points.size(); ++i)
      d2[i] = std::min(d2[i], (points[i] - points[static_cast<std::size_t>(best)]).squared_norm());
  }
  return selected;
}

PointCloud resample_pointcloud(const TetMesh& mesh, int n) {
  if (n < 4) throw input_error("resample_pointcloud: n must be >= 4");
  const auto idx = farthest_point_indices(mesh.nodes, n, nearest_to_centroid(mesh.nodes));
  PointCloud out;
  out.points.reserve(idx.size());
  out.labels.reserve(idx.size());
  for (int i : idx) {
    out.points.push_back(mesh.nodes[static_cast<std::size_t>(i)]);
    out.labels.push_back(mesh.part_labels[static_cast<std::size_t>(i)]);
  }
  return out;
}

PointCloud fps_subsample(const PointCloud& cloud, int n) {
  const auto idx = farthest_point_indices(cloud.points, n, nearest_to_centroid(cloud.points));
  PointCloud out;
  out.points.reserve(idx.size());
  out.labels.reserve(idx.size());
  for (int i : idx) {
    out.points.push_back(cloud.points[static_cast<std::size_t>(i)]);
    out.labels.push_back(cloud.labels[static_cast<std::size_t>(i)]);
  }
  return out;
}

double min_pairwise_distance(std::span<const Vec3> points) {
  if (points.size() < 2) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      best = std::min(best, (points[i] - points[j]).squared_norm());
  return std::sqrt(best);
}

}  // namespace cardiotwin
