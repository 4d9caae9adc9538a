#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cardiotwin/ecg.hpp"
#include "cardiotwin/phantom.hpp"
#include "cardiotwin/pointcloud.hpp"
#include "cardiotwin/rng.hpp"

namespace cardiotwin {

struct Conditions {
  double age = 60.0;   // years, [40, 80]
  int sex = 0;         // binary
  double bmi = 27.0;   // kg/m^2, [16, 45]

  void validate() const;
};

struct ActivationParams {
  ConductionVelocities cv;
  RootNodeSet roots;
};

enum class Split : std::uint8_t { Train, Val, Test };
const char* to_string(Split s);
Split split_from_string(const std::string& s);

struct VirtualSubject {
  std::string id;
  std::string mesh_id;
  Conditions conditions;
  ActivationParams params;
  EcgRecord ecg;
  Split split = Split::Train;
};

struct CohortConfig {
  int n_meshes = 10;
  int per_mesh = 10;
  std::uint64_t seed = 1;
  PhantomConfig base_phantom{};
  double axis_perturbation = 0.15;
  double ecg_dt = 1e-3;          // s
  std::size_t ecg_samples = 512; // record length n_out
  double ecg_pad = 0.010;        // s of margin past the last activation
  int resample_points = 256;     // model-facing point count n
};

struct Cohort {
  struct MeshRecord {
    std::string id;
    TetMesh mesh;
    FiberFrame frame;
    RootNodeSet roots;
    Split split = Split::Train;
  };
  std::vector<MeshRecord> meshes;
  std::vector<VirtualSubject> subjects;
  std::uint64_t seed = 0;
  std::string config_hash;

  const MeshRecord& mesh_by_id(const std::string& id) const;
  std::vector<const VirtualSubject*> subjects_in(Split split) const;
};

// Uniform draw inside the physiological CV boxes, rejecting until
// v_f > v_s > v_n. v_f: [50,88], v_s: [32,49], v_n: [29,45], v_e: [120,179].
ConductionVelocities sample_cv(Rng& rng);

inline constexpr double kCvLo[4] = {50.0, 32.0, 29.0, 120.0};
inline constexpr double kCvHi[4] = {88.0, 49.0, 45.0, 179.0};

// Synthetic subject conditions: age uniform [40,80], sex Bernoulli(0.5),
// BMI normal(27,4) clamped to [16,45].
Conditions sample_conditions(Rng& rng);

// Seven fixed homologous endocardial sites given as (apex-to-base fraction,
// circumferential angle) per ventricle; deterministically snapped to the
// nearest endocardial node. Order: 4 LV sites then 3 RV sites, onset 0.
RootNodeSet place_root_nodes(const TetMesh& mesh);

// Mesh-level split sizes for a 60/10/30 ratio.
void split_counts(int n_meshes, int& train, int& val, int& test);

// Build n perturbed phantoms and simulate per_mesh subjects on each.
Cohort generate_cohort(const CohortConfig& config);

// Same protocol over externally supplied meshes.
Cohort generate_cohort(std::vector<Cohort::MeshRecord> meshes, const CohortConfig& config);

// Forward-simulate one subject's ECG from its stored mesh and parameters
// (bit-exact replay path).
EcgRecord simulate_subject_ecg(const Cohort::MeshRecord& mesh_record,
                               const ActivationParams& params, const CohortConfig& config);

}  // namespace cardiotwin
