#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cardiotwin/vec3.hpp"

namespace cardiotwin {

// Thrown when user-supplied input (files, configs, CLI arguments) is invalid.
// The CLI maps it to exit code 1; everything else is a runtime failure (2).
class input_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NodeLabel : std::uint8_t { LvEndo, RvEndo, Epi, Interior };
enum class PartLabel : std::uint8_t { Lv, Rv };

const char* to_string(NodeLabel l);
const char* to_string(PartLabel l);
NodeLabel node_label_from_string(const std::string& s);
PartLabel part_label_from_string(const std::string& s);

// Biventricular tetrahedral anatomy. Positions are in cm. Tets are oriented so
// that the signed volume det[p1-p0, p2-p0, p3-p0]/6 is strictly positive.
struct TetMesh {
  std::vector<Vec3> nodes;
  std::vector<std::array<int, 4>> tets;
  std::vector<NodeLabel> node_labels;
  std::vector<PartLabel> part_labels;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_tets() const { return static_cast<int>(tets.size()); }

  double tet_signed_volume(int t) const;
  Vec3 tet_centroid(int t) const;
  std::pair<Vec3, Vec3> bounding_box() const;

  // Gradients of the four linear shape functions of tet t.
  std::array<Vec3, 4> shape_gradients(int t) const;

  // Checks every TetMesh invariant and throws input_error naming the first
  // violation (with indices). Order: array sizes, index ranges, positive
  // volumes, node usage, connectivity.
  void validate() const;
};

// Per-tet orthonormal conduction triad (fiber, sheet, sheet-normal).
struct FiberFrame {
  struct Triad {
    Vec3 f, s, n;
  };
  std::vector<Triad> per_tet;

  // |f|=|s|=|n|=1, pairwise orthogonal, det[f s n] = +1, all within 1e-9.
  void validate(const TetMesh& mesh) const;
};

}  // namespace cardiotwin
