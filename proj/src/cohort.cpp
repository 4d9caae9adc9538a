#include "cardiotwin/cohort.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>

namespace cardiotwin {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct SiteSpec {
  double apex_to_base;  // 0 apex .. 1 base
  double angle_deg;     // about the ventricle axis
};

// Fixed homologous locations; the LV gets four sites, the RV three.
constexpr SiteSpec kLvSites[4] = {{0.20, 40.0}, {0.50, 90.0}, {0.50, 200.0}, {0.35, 320.0}};
constexpr SiteSpec kRvSites[3] = {{0.25, 60.0}, {0.50, 150.0}, {0.50, 270.0}};

std::vector<int> pick_sites(const TetMesh& mesh, NodeLabel label, std::span<const SiteSpec> sites) {
  std::vector<int> endo;
  for (int i = 0; i < mesh.num_nodes(); ++i)
    if (mesh.node_labels[static_cast<std::size_t>(i)] == label) endo.push_back(i);
  if (endo.empty()) {
    std::ostringstream os;
    os << "place_root_nodes: no nodes labeled " << to_string(label);
    throw input_error(os.str());
  }
  double z_lo = std::numeric_limits<double>::infinity(), z_hi = -z_lo;
  double cx = 0, cy = 0;
  for (int i : endo) {
    const Vec3& p = mesh.nodes[static_cast<std::size_t>(i)];
    z_lo = std::min(z_lo, p.z);
    z_hi = std::max(z_hi, p.z);
    cx += p.x;
    cy += p.y;
  }
  cx /= static_cast<double>(endo.size());
  cy /= static_cast<double>(endo.size());
  const double z_span = std::max(z_hi - z_lo, 1e-9);

  std::vector<int> picked;
  for (const SiteSpec& site : sites) {
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int i : endo) {
      if (std::find(picked.begin(), picked.end(), i) != picked.end()) continue;
      const Vec3& p = mesh.nodes[static_cast<std::size_t>(i)];
      const double frac = (p.z - z_lo) / z_span;
      double ang = std::atan2(p.y - cy, p.x - cx) * 180.0 / kPi;
      if (ang < 0) ang += 360.0;
      double dang = std::abs(ang - site.angle_deg);
      dang = std::min(dang, 360.0 - dang);
      const double d2 = (frac - site.apex_to_base) * (frac - site.apex_to_base) +
                        (dang / 360.0) * (dang / 360.0);
      if (d2 < best_d2) { best_d2 = d2; best = i; }
    }
    picked.push_back(best);
  }
  return picked;
}

}  // namespace

void Conditions::validate() const {
  if (age < 40.0 || age > 80.0) throw input_error("conditions: age outside [40, 80]");
  if (sex != 0 && sex != 1) throw input_error("conditions: sex must be 0 or 1");
  if (bmi < 16.0 || bmi > 45.0) throw input_error("conditions: bmi outside [16, 45]");
}

const char* to_string(Split s) {
  switch (s) {
    case Split::Train: return "TRAIN";
    case Split::Val: return "VAL";
    case Split::Test: return "TEST";
  }
  return "?";
}

Split split_from_string(const std::string& s) {
  if (s == "TRAIN") return Split::Train;
  if (s == "VAL") return Split::Val;
  if (s == "TEST") return Split::Test;
  throw input_error("unknown split '" + s + "'");
}

const Cohort::MeshRecord& Cohort::mesh_by_id(const std::string& id) const {
  for (const auto& m : meshes)
    if (m.id == id) return m;
  throw input_error("cohort has no mesh '" + id + "'");
}

std::vector<const VirtualSubject*> Cohort::subjects_in(Split split) const {
  std::vector<const VirtualSubject*> out;
  for (const auto& s : subjects)
    if (s.split == split) out.push_back(&s);
  return out;
}

ConductionVelocities sample_cv(Rng& rng) {
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    ConductionVelocities cv;
    cv.v_f = rng.uniform(kCvLo[0], kCvHi[0]);
    cv.v_s = rng.uniform(kCvLo[1], kCvHi[1]);
    cv.v_n = rng.uniform(kCvLo[2], kCvHi[2]);
    cv.v_e = rng.uniform(kCvLo[3], kCvHi[3]);
    if (cv.v_f > cv.v_s && cv.v_s > cv.v_n) return cv;
  }
  throw std::runtime_error("sample_cv: rejection cap exceeded");
}

Conditions sample_conditions(Rng& rng) {
  Conditions c;
  c.age = rng.uniform(40.0, 80.0);
  c.sex = rng.bernoulli(0.5) ? 1 : 0;
  c.bmi = std::clamp(rng.normal(27.0, 4.0), 16.0, 45.0);
  return c;
}

RootNodeSet place_root_nodes(const TetMesh& mesh) {
  RootNodeSet set;
  for (int i : pick_sites(mesh, NodeLabel::LvEndo, kLvSites)) set.roots.push_back({i, 0.0});
  for (int i : pick_sites(mesh, NodeLabel::RvEndo, kRvSites)) set.roots.push_back({i, 0.0});
  set.validate(mesh);
  return set;
}

void split_counts(int n_meshes, int& train, int& val, int& test) {
  if (n_meshes < 3) throw input_error("cohort needs at least 3 meshes for a train/val/test split");
  val = std::max(1, n_meshes / 10);
  test = std::max(1, (3 * n_meshes) / 10);
  train = n_meshes - val - test;
  if (train < 1) throw input_error("cohort split leaves no training meshes");
}

EcgRecord simulate_subject_ecg(const Cohort::MeshRecord& mesh_record,
                               const ActivationParams& params, const CohortConfig& config) {
  const MeshGraph graph = build_graph(mesh_record.mesh);
  const ActivationTimeMap atm =
      solve_activation(graph, params.cv, mesh_record.frame, params.roots);
  const ElectrodeSet electrodes = ElectrodeSet::standard_for_mesh(mesh_record.mesh);
  const double duration = atm.max_time + config.ecg_pad;
  return compute_ecg(mesh_record.mesh, atm, electrodes, config.ecg_dt, duration,
                     config.ecg_samples);
}

Cohort generate_cohort(std::vector<Cohort::MeshRecord> meshes, const CohortConfig& config) {
  if (meshes.empty()) throw input_error("generate_cohort: no meshes");
  if (config.per_mesh < 1) throw input_error("generate_cohort: per_mesh must be >= 1");

  Cohort cohort;
  cohort.seed = config.seed;
  cohort.meshes = std::move(meshes);

  // Mesh-level split assignment: shuffle then cut 60/10/30.
  {
    int train = 0, val = 0, test = 0;
    split_counts(static_cast<int>(cohort.meshes.size()), train, val, test);
    std::vector<int> order(cohort.meshes.size());
    std::iota(order.begin(), order.end(), 0);
    Rng split_rng(mix_seed(config.seed, 0xC0));
    split_rng.shuffle(order);
    for (int k = 0; k < static_cast<int>(order.size()); ++k) {
      Split s = Split::Train;
      if (k >= train && k < train + val) s = Split::Val;
      else if (k >= train + val) s = Split::Test;
      cohort.meshes[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])].split = s;
    }
  }

  Rng rng(mix_seed(config.seed, 0xC1));
  for (std::size_t m = 0; m < cohort.meshes.size(); ++m) {
    auto& mesh_record = cohort.meshes[m];
    if (mesh_record.roots.roots.empty()) mesh_record.roots = place_root_nodes(mesh_record.mesh);
    const Conditions cond = sample_conditions(rng);
    for (int s = 0; s < config.per_mesh; ++s) {
      VirtualSubject subject;
      {
        std::ostringstream os;
        os << mesh_record.id << "_s" << (s < 10 ? "0" : "") << s;
        subject.id = os.str();
      }
      subject.mesh_id = mesh_record.id;
      subject.conditions = cond;
      subject.params.cv = sample_cv(rng);
      subject.params.roots = mesh_record.roots;
      subject.split = mesh_record.split;
      try {
        subject.ecg = simulate_subject_ecg(mesh_record, subject.params, config);
      } catch (const std::exception& e) {
        throw std::runtime_error("forward simulation failed for subject " + subject.id + ": " +
                                 e.what());
      }
      cohort.subjects.push_back(std::move(subject));
    }
  }
  return cohort;
}

Cohort generate_cohort(const CohortConfig& config) {
  if (config.n_meshes < 1) throw input_error("generate_cohort: n_meshes must be >= 1");
  Rng axes_rng(mix_seed(config.seed, 0xA0));
  std::vector<Cohort::MeshRecord> meshes;
  meshes.reserve(static_cast<std::size_t>(config.n_meshes));
  for (int i = 0; i < config.n_meshes; ++i) {
    PhantomConfig pc = config.base_phantom.perturbed_axes(config.axis_perturbation, axes_rng);
    pc.seed = axes_rng.next_u64();
    Cohort::MeshRecord rec;
    {
      std::ostringstream os;
      os << "mesh_" << (i < 10 ? "00" : (i < 100 ? "0" : "")) << i;
      rec.id = os.str();
    }
    auto [mesh, frame] = build_phantom(pc);
    rec.mesh = std::move(mesh);
    rec.frame = std::move(frame);
    meshes.push_back(std::move(rec));
  }
  return generate_cohort(std::move(meshes), config);
}

}  // namespace cardiotwin
