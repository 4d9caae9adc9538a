#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cardiotwin/eikonal.hpp"

namespace cardiotwin {

// Electrode order is fixed: limb electrodes then the precordial arc.
inline constexpr std::array<const char*, 9> kElectrodeNames = {
    "RA", "LA", "LL", "V1", "V2", "V3", "V4", "V5", "V6"};

inline constexpr std::array<const char*, 8> kLeadNames = {"I", "II", "V1", "V2",
                                                          "V3", "V4", "V5", "V6"};

struct ElectrodeSet {
  std::array<Vec3, 9> positions{};  // cm, same order as kElectrodeNames

  // Positions from bounding-box fractions: p = lo + frac * (hi - lo),
  // fractions may lie outside [0,1].
  static ElectrodeSet from_relative(const std::map<std::string, Vec3>& fractions,
                                    const TetMesh& mesh);
  static std::map<std::string, Vec3> default_relative_positions();
  static ElectrodeSet standard_for_mesh(const TetMesh& mesh);

  // Every electrode must be at least 1 cm from every mesh node.
  void validate(const TetMesh& mesh) const;
};

// Eight independent leads (I, II, V1..V6), fixed length, zero-padded tail.
struct EcgRecord {
  double dt = 1e-3;  // seconds per sample
  std::size_t n = 0;
  std::array<std::vector<double>, 8> leads;
  std::array<std::vector<std::uint8_t>, 8> masks;  // 1 = valid sample

  std::size_t valid_samples(int lead) const;
  void validate() const;

  bool operator==(const EcgRecord& o) const {
    return dt == o.dt && n == o.n && leads == o.leads && masks == o.masks;
  }
};

// Gradient of the linear interpolant of per-vertex values on tet t.
Vec3 element_vm_gradient(const TetMesh& mesh, int tet, const std::array<double, 4>& node_vm);

// Extracellular potential at one electrode for the activation state at time t.
// Sources are per-tet dipoles -grad(Vm) . grad_c(S/r) with S = vol/mean(vol)
// and r measured from the tet centroid; a wavefront travelling toward the
// electrode deflects positive.
double unipolar_potential(const TetMesh& mesh, const ActivationTimeMap& atm,
                          const Vec3& electrode, double t);

// All nine raw electrode potentials at time t (for lead-identity checks).
std::array<double, 9> unipolar_potentials(const TetMesh& mesh, const ActivationTimeMap& atm,
                                          const ElectrodeSet& electrodes, double t);

// Lead assembly from per-sample electrode potentials: limb leads I and II,
// precordial leads against the Wilson central terminal, one shared
// normalization factor, zero-padded to n_out samples.
EcgRecord assemble_ecg_record(const std::vector<std::array<double, 9>>& potentials, double dt,
                              std::size_t n_out);

// Full pseudo-ECG: unipolar potentials -> limb/precordial leads -> one common
// normalization factor -> zero-padding to n_out.
EcgRecord compute_ecg(const TetMesh& mesh, const ActivationTimeMap& atm,
                      const ElectrodeSet& electrodes, double dt, double duration,
                      std::size_t n_out);

// Precomputed geometry kernels so repeated forward evaluations (cohort
// generation, the optimization baseline) only pay for the activation sweep.
class EcgForwardContext {
 public:
  EcgForwardContext(const TetMesh& mesh, const ElectrodeSet& electrodes);

  EcgRecord run(const ActivationTimeMap& atm, double dt, double duration,
                std::size_t n_out) const;

  const TetMesh& mesh() const { return *mesh_; }

 private:
  const TetMesh* mesh_;
  std::array<Vec3, 9> electrodes_;
  std::vector<std::array<Vec3, 4>> shape_grads_;
  std::vector<std::array<Vec3, 9>> kernels_;  // S_j * (c_j - e) / r^3 per electrode
};

}  // namespace cardiotwin
