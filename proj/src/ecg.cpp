#include "cardiotwin/ecg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cardiotwin {

namespace {

std::vector<double> normalized_volumes(const TetMesh& mesh) {
  std::vector<double> vols(static_cast<std::size_t>(mesh.num_tets()));
  double total = 0.0;
  for (int t = 0; t < mesh.num_tets(); ++t) {
    vols[static_cast<std::size_t>(t)] = mesh.tet_signed_volume(t);
    total += vols[static_cast<std::size_t>(t)];
  }
  const double mean = total / static_cast<double>(mesh.num_tets());
  for (double& v : vols) v /= mean;
  return vols;
}

Vec3 dipole_kernel(const Vec3& centroid, const Vec3& electrode, double s_norm) {
  const Vec3 d = centroid - electrode;
  const double r = d.norm();
  if (r < 1e-6) {
    std::ostringstream os;
    os << "electrode at distance " << r << " cm from element centroid (inside tissue)";
    throw input_error(os.str());
  }
  return d * (s_norm / (r * r * r));
}

// Shared assembly: per-sample potentials -> leads -> normalization -> padding.
EcgRecord assemble_record(const std::vector<std::array<double, 9>>& phi, double dt,
                          std::size_t n_out) {
  const std::size_t n_valid = phi.size();
  EcgRecord rec;
  rec.dt = dt;
  rec.n = n_out;
  for (auto& lead : rec.leads) lead.assign(n_out, 0.0);
  for (auto& mask : rec.masks) {
    mask.assign(n_out, 0);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n_valid), 1);
  }
  for (std::size_t k = 0; k < n_valid; ++k) {
    const auto& p = phi[k];
    const double ra = p[0], la = p[1], ll = p[2];
    const double wct = (ra + la + ll) / 3.0;
    rec.leads[0][k] = la - ra;
    rec.leads[1][k] = ll - ra;
    for (int v = 0; v < 6; ++v) rec.leads[static_cast<std::size_t>(2 + v)][k] = p[static_cast<std::size_t>(3 + v)] - wct;
  }
  double peak = 0.0;
  for (const auto& lead : rec.leads)
    for (std::size_t k = 0; k < n_valid; ++k) peak = std::max(peak, std::abs(lead[k]));
  if (peak > 0.0)
    for (auto& lead : rec.leads)
      for (std::size_t k = 0; k < n_valid; ++k) lead[k] /= peak;
  return rec;
}

std::size_t checked_sample_count(const ActivationTimeMap& atm, double dt, double duration,
                                 std::size_t n_out) {
  if (!(dt > 0.0)) throw input_error("compute_ecg: dt must be positive");
  if (!(duration >= atm.max_time)) {
    std::ostringstream os;
    os << "compute_ecg: duration " << duration << " s shorter than max activation time "
       << atm.max_time << " s";
    throw input_error(os.str());
  }
  const auto n_valid = static_cast<std::size_t>(std::ceil(duration / dt));
  if (n_out < n_valid) {
    std::ostringstream os;
    os << "compute_ecg: n_out " << n_out << " < required sample count " << n_valid;
    throw input_error(os.str());
  }
  return n_valid;
}

}  // namespace

ElectrodeSet ElectrodeSet::from_relative(const std::map<std::string, Vec3>& fractions,
                                         const TetMesh& mesh) {
  const auto [lo, hi] = mesh.bounding_box();
  const Vec3 size = hi - lo;
  ElectrodeSet set;
  for (std::size_t i = 0; i < kElectrodeNames.size(); ++i) {
    const auto it = fractions.find(kElectrodeNames[i]);
    if (it == fractions.end())
      throw input_error(std::string("electrode config missing ") + kElectrodeNames[i]);
    const Vec3& f = it->second;
    set.positions[i] = {lo.x + f.x * size.x, lo.y + f.y * size.y, lo.z + f.z * size.z};
  }
  set.validate(mesh);
  return set;
}

std::map<std::string, Vec3> ElectrodeSet::default_relative_positions() {
  // Anterior chest at negative y, limbs well clear of the bounding box.
  return {
      {"RA", {-0.35, 0.20, 1.45}}, {"LA", {1.35, 0.20, 1.45}}, {"LL", {1.35, 0.20, -0.55}},
      {"V1", {0.30, -0.45, 0.85}}, {"V2", {0.55, -0.50, 0.85}}, {"V3", {0.80, -0.55, 0.70}},
      {"V4", {1.05, -0.55, 0.55}}, {"V5", {1.25, -0.40, 0.50}}, {"V6", {1.40, -0.20, 0.50}},
  };
}

ElectrodeSet ElectrodeSet::standard_for_mesh(const TetMesh& mesh) {
  return from_relative(default_relative_positions(), mesh);
}

void ElectrodeSet::validate(const TetMesh& mesh) const {
  for (std::size_t i = 0; i < positions.size(); ++i) {
    double min_d2 = std::numeric_limits<double>::infinity();
    for (const Vec3& p : mesh.nodes) min_d2 = std::min(min_d2, (p - positions[i]).squared_norm());
    if (!(min_d2 > 1.0)) {
      std::ostringstream os;
      os << "electrode " << kElectrodeNames[i] << " is " << std::sqrt(min_d2)
         << " cm from the myocardium (must be > 1 cm)";
      throw input_error(os.str());
    }
  }
}

std::size_t EcgRecord::valid_samples(int lead) const {
  const auto& m = masks[static_cast<std::size_t>(lead)];
  std::size_t c = 0;
  for (auto v : m) c += v;
  return c;
}

void EcgRecord::validate() const {
  for (int l = 0; l < 8; ++l) {
    if (leads[static_cast<std::size_t>(l)].size() != n || masks[static_cast<std::size_t>(l)].size() != n) {
      std::ostringstream os;
      os << "ECG record invalid: lead " << kLeadNames[static_cast<std::size_t>(l)]
         << " length mismatch";
      throw input_error(os.str());
    }
  }
  double peak = 0.0;
  bool any_valid = false;
  for (int l = 0; l < 8; ++l)
    for (std::size_t k = 0; k < n; ++k) {
      if (!masks[static_cast<std::size_t>(l)][k]) {
        if (leads[static_cast<std::size_t>(l)][k] != 0.0) {
          std::ostringstream os;
          os << "ECG record invalid: masked-out sample " << k << " of lead "
             << kLeadNames[static_cast<std::size_t>(l)] << " is nonzero";
          throw input_error(os.str());
        }
      } else {
        any_valid = true;
        peak = std::max(peak, std::abs(leads[static_cast<std::size_t>(l)][k]));
      }
    }
  if (any_valid && peak != 0.0 && std::abs(peak - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "ECG record invalid: max |amplitude| = " << peak << ", expected 1 after normalization";
    throw input_error(os.str());
  }
}

Vec3 element_vm_gradient(const TetMesh& mesh, int tet, const std::array<double, 4>& node_vm) {
  const auto grads = mesh.shape_gradients(tet);  // throws on degenerate tet
  Vec3 g{0, 0, 0};
  for (int i = 0; i < 4; ++i) g += grads[static_cast<std::size_t>(i)] * node_vm[static_cast<std::size_t>(i)];
  return g;
}

double unipolar_potential(const TetMesh& mesh, const ActivationTimeMap& atm,
                          const Vec3& electrode, double t) {
  if (atm.times.size() != mesh.nodes.size())
    throw input_error("unipolar_potential: activation map does not match mesh");
  const std::vector<double> s_norm = normalized_volumes(mesh);
  double phi = 0.0;
  for (int j = 0; j < mesh.num_tets(); ++j) {
    const auto& tet = mesh.tets[static_cast<std::size_t>(j)];
    int active = 0;
    for (int k = 0; k < 4; ++k)
      active += atm.times[static_cast<std::size_t>(tet[k])] <= t ? 1 : 0;
    if (active == 0 || active == 4) continue;  // constant Vm, zero gradient
    std::array<double, 4> vm;
    for (int k = 0; k < 4; ++k)
      vm[static_cast<std::size_t>(k)] = atm.times[static_cast<std::size_t>(tet[k])] <= t ? 1.0 : 0.0;
    const Vec3 g = element_vm_gradient(mesh, j, vm);
    const Vec3 kern = dipole_kernel(mesh.tet_centroid(j), electrode, s_norm[static_cast<std::size_t>(j)]);
    phi += g.dot(kern);
  }
  return phi;
}

std::array<double, 9> unipolar_potentials(const TetMesh& mesh, const ActivationTimeMap& atm,
                                          const ElectrodeSet& electrodes, double t) {
  std::array<double, 9> phi{};
  for (std::size_t e = 0; e < 9; ++e) phi[e] = unipolar_potential(mesh, atm, electrodes.positions[e], t);
  return phi;
}

EcgRecord assemble_ecg_record(const std::vector<std::array<double, 9>>& potentials, double dt,
                              std::size_t n_out) {
  if (n_out < potentials.size())
    throw input_error("assemble_ecg_record: n_out smaller than the sample count");
  return assemble_record(potentials, dt, n_out);
}

EcgForwardContext::EcgForwardContext(const TetMesh& mesh, const ElectrodeSet& electrodes)
    : mesh_(&mesh), electrodes_(electrodes.positions) {
  const std::vector<double> s_norm = normalized_volumes(mesh);
  const int nt = mesh.num_tets();
  shape_grads_.resize(static_cast<std::size_t>(nt));
  kernels_.resize(static_cast<std::size_t>(nt));
  for (int j = 0; j < nt; ++j) {
    shape_grads_[static_cast<std::size_t>(j)] = mesh.shape_gradients(j);
    const Vec3 c = mesh.tet_centroid(j);
    for (std::size_t e = 0; e < 9; ++e)
      kernels_[static_cast<std::size_t>(j)][e] = dipole_kernel(c, electrodes_[e], s_norm[static_cast<std::size_t>(j)]);
  }
}

EcgRecord EcgForwardContext::run(const ActivationTimeMap& atm, double dt, double duration,
                                 std::size_t n_out) const {
  const TetMesh& mesh = *mesh_;
  if (atm.times.size() != mesh.nodes.size())
    throw input_error("ECG forward: activation map does not match mesh");
  const std::size_t n_valid = checked_sample_count(atm, dt, duration, n_out);

  // Element is silent outside [t_min, t_max): all-equal Vm has zero gradient.
  const int nt = mesh.num_tets();
  std::vector<double> t_min(static_cast<std::size_t>(nt)), t_max(static_cast<std::size_t>(nt));
  for (int j = 0; j < nt; ++j) {
    const auto& tet = mesh.tets[static_cast<std::size_t>(j)];
    double lo = atm.times[static_cast<std::size_t>(tet[0])], hi = lo;
    for (int k = 1; k < 4; ++k) {
      const double tk = atm.times[static_cast<std::size_t>(tet[k])];
      lo = std::min(lo, tk);
      hi = std::max(hi, tk);
    }
    t_min[static_cast<std::size_t>(j)] = lo;
    t_max[static_cast<std::size_t>(j)] = hi;
  }

  std::vector<std::array<double, 9>> phi(n_valid);
  for (std::size_t k = 0; k < n_valid; ++k) {
    const double t = static_cast<double>(k) * dt;
    auto& out = phi[k];
    out.fill(0.0);
    for (int j = 0; j < nt; ++j) {
      if (!(t_min[static_cast<std::size_t>(j)] <= t && t < t_max[static_cast<std::size_t>(j)])) continue;
      const auto& tet = mesh.tets[static_cast<std::size_t>(j)];
      const auto& grads = shape_grads_[static_cast<std::size_t>(j)];
      Vec3 g{0, 0, 0};
      for (int c = 0; c < 4; ++c)
        if (atm.times[static_cast<std::size_t>(tet[c])] <= t) g += grads[static_cast<std::size_t>(c)];
      const auto& kern = kernels_[static_cast<std::size_t>(j)];
      for (std::size_t e = 0; e < 9; ++e) out[e] += g.dot(kern[e]);
    }
  }
  return assemble_record(phi, dt, n_out);
}

EcgRecord compute_ecg(const TetMesh& mesh, const ActivationTimeMap& atm,
                      const ElectrodeSet& electrodes, double dt, double duration,
                      std::size_t n_out) {
  const EcgForwardContext ctx(mesh, electrodes);
  return ctx.run(atm, dt, duration, n_out);
}

}  // namespace cardiotwin
