#pragma once

#include <cstdint>
#include <utility>

#include "cardiotwin/mesh.hpp"

namespace cardiotwin {

// Synthetic two-cavity truncated-ellipsoid ventricle phantom. The LV is a
// thick-walled ellipsoid centred at the origin with the long axis along z
// (apex at negative z); the RV wraps around it as a thinner shell offset in
// +x. Everything above base_z is cut away. Units: cm.
struct PhantomConfig {
  Vec3 lv_epi_axes{3.6, 3.6, 5.2};
  double lv_wall = 1.2;
  Vec3 rv_center{2.4, 0.0, 0.2};
  Vec3 rv_epi_axes{4.6, 3.4, 4.4};
  double rv_wall = 1.0;
  double base_z = 1.2;
  double resolution = 0.5;   // grid spacing h
  double jitter = 0.12;      // interior node jitter, fraction of h
  std::uint64_t seed = 1;

  // Scales all semi-axes by per-axis factors in [1-amount, 1+amount];
  // draws six uniforms from rng.
  PhantomConfig perturbed_axes(double amount, class Rng& rng) const;

  void validate() const;
};

std::pair<TetMesh, FiberFrame> build_phantom(const PhantomConfig& config);

}  // namespace cardiotwin
