#include "cardiotwin/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <vector>

#include "cardiotwin/rng.hpp"

namespace cardiotwin {

namespace {

// Ellipsoid level set: 1 on the surface, <1 inside.
double ellipsoid_level(const Vec3& p, const Vec3& center, const Vec3& axes) {
  const double u = (p.x - center.x) / axes.x;
  const double v = (p.y - center.y) / axes.y;
  const double w = (p.z - center.z) / axes.z;
  return u * u + v * v + w * w;
}

Vec3 ellipsoid_level_gradient(const Vec3& p, const Vec3& center, const Vec3& axes) {
  return {2.0 * (p.x - center.x) / (axes.x * axes.x),
          2.0 * (p.y - center.y) / (axes.y * axes.y),
          2.0 * (p.z - center.z) / (axes.z * axes.z)};
}

struct Regions {
  const PhantomConfig& cfg;
  Vec3 lv_endo_axes;
  Vec3 rv_endo_axes;

  explicit Regions(const PhantomConfig& c)
      : cfg(c),
        lv_endo_axes{c.lv_epi_axes.x - c.lv_wall, c.lv_epi_axes.y - c.lv_wall,
                     c.lv_epi_axes.z - c.lv_wall},
        rv_endo_axes{c.rv_epi_axes.x - c.rv_wall, c.rv_epi_axes.y - c.rv_wall,
                     c.rv_epi_axes.z - c.rv_wall} {}

  bool in_lv_epi(const Vec3& p) const { return ellipsoid_level(p, {0, 0, 0}, cfg.lv_epi_axes) <= 1.0; }
  bool in_lv_cavity(const Vec3& p) const { return ellipsoid_level(p, {0, 0, 0}, lv_endo_axes) <= 1.0; }
  bool in_rv_epi(const Vec3& p) const { return ellipsoid_level(p, cfg.rv_center, cfg.rv_epi_axes) <= 1.0; }
  bool in_rv_cavity_shape(const Vec3& p) const {
    return ellipsoid_level(p, cfg.rv_center, rv_endo_axes) <= 1.0;
  }
  // The RV cavity stops at the LV epicardium so the septum stays solid.
  bool in_rv_cavity(const Vec3& p) const { return in_rv_cavity_shape(p) && !in_lv_epi(p); }

  bool in_myocardium(const Vec3& p) const {
    if (p.z > cfg.base_z) return false;
    const bool lv_wall = in_lv_epi(p) && !in_lv_cavity(p);
    const bool rv_wall = in_rv_epi(p) && !in_rv_cavity(p) && !in_lv_cavity(p) && !lv_wall;
    return lv_wall || rv_wall;
  }

  bool rv_free_wall(const Vec3& p) const { return in_rv_epi(p) && !in_lv_epi(p); }
};

struct GridIndex {
  int ix, iy, iz;
  bool operator<(const GridIndex& o) const {
    if (iz != o.iz) return iz < o.iz;
    if (iy != o.iy) return iy < o.iy;
    return ix < o.ix;
  }
};

}  // namespace

PhantomConfig PhantomConfig::perturbed_axes(double amount, Rng& rng) const {
  PhantomConfig c = *this;
  c.lv_epi_axes.x *= rng.uniform(1.0 - amount, 1.0 + amount);
  c.lv_epi_axes.y *= rng.uniform(1.0 - amount, 1.0 + amount);
  c.lv_epi_axes.z *= rng.uniform(1.0 - amount, 1.0 + amount);
  c.rv_epi_axes.x *= rng.uniform(1.0 - amount, 1.0 + amount);
  c.rv_epi_axes.y *= rng.uniform(1.0 - amount, 1.0 + amount);
  c.rv_epi_axes.z *= rng.uniform(1.0 - amount, 1.0 + amount);
  return c;
}

void PhantomConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw input_error(std::string("phantom config: ") + name + " must be positive");
  };
  positive(lv_epi_axes.x, "lv_epi_axes.x");
  positive(lv_epi_axes.y, "lv_epi_axes.y");
  positive(lv_epi_axes.z, "lv_epi_axes.z");
  positive(rv_epi_axes.x, "rv_epi_axes.x");
  positive(rv_epi_axes.y, "rv_epi_axes.y");
  positive(rv_epi_axes.z, "rv_epi_axes.z");
  positive(resolution, "resolution");
  positive(lv_wall, "lv_wall");
  positive(rv_wall, "rv_wall");
  if (jitter < 0.0 || jitter > 0.2)
    throw input_error("phantom config: jitter must be in [0, 0.2]");
  // Cavity must stay strictly inside the wall on every axis.
  const double lv_min_axis = std::min({lv_epi_axes.x, lv_epi_axes.y, lv_epi_axes.z});
  const double rv_min_axis = std::min({rv_epi_axes.x, rv_epi_axes.y, rv_epi_axes.z});
  if (lv_wall >= lv_min_axis)
    throw input_error("phantom config: degenerate LV (wall thickness >= smallest semi-axis)");
  if (rv_wall >= rv_min_axis)
    throw input_error("phantom config: degenerate RV (wall thickness >= smallest semi-axis)");
  if (base_z <= -lv_epi_axes.z + 2.0 * resolution)
    throw input_error("phantom config: base plane truncates the whole LV");
}

std::pair<TetMesh, FiberFrame> build_phantom(const PhantomConfig& config) {
  config.validate();
  const Regions reg(config);
  const double h = config.resolution;

  // Grid bounds covering both ellipsoids, one cell of margin.
  const double x_lo = std::min(-config.lv_epi_axes.x, config.rv_center.x - config.rv_epi_axes.x) - h;
  const double x_hi = std::max(config.lv_epi_axes.x, config.rv_center.x + config.rv_epi_axes.x) + h;
  const double y_lo = std::min(-config.lv_epi_axes.y, config.rv_center.y - config.rv_epi_axes.y) - h;
  const double y_hi = std::max(config.lv_epi_axes.y, config.rv_center.y + config.rv_epi_axes.y) + h;
  const double z_lo = std::min(-config.lv_epi_axes.z, config.rv_center.z - config.rv_epi_axes.z) - h;
  const double z_hi = std::min(config.base_z, std::max(config.lv_epi_axes.z, config.rv_center.z + config.rv_epi_axes.z)) + h;

  const int nx = static_cast<int>(std::ceil((x_hi - x_lo) / h)) + 1;
  const int ny = static_cast<int>(std::ceil((y_hi - y_lo) / h)) + 1;
  const int nz = static_cast<int>(std::ceil((z_hi - z_lo) / h)) + 1;

  auto grid_point = [&](int ix, int iy, int iz) {
    return Vec3{x_lo + ix * h, y_lo + iy * h, z_lo + iz * h};
  };

  // Kuhn decomposition of each cell into 6 tets sharing the main diagonal
  // (000)-(111); all positively oriented for the standard corner order.
  static const int kCellTets[6][4][3] = {
      {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}},
      {{0, 0, 0}, {1, 1, 0}, {0, 1, 0}, {1, 1, 1}},
      {{0, 0, 0}, {0, 1, 0}, {0, 1, 1}, {1, 1, 1}},
      {{0, 0, 0}, {0, 1, 1}, {0, 0, 1}, {1, 1, 1}},
      {{0, 0, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}},
      {{0, 0, 0}, {1, 0, 1}, {1, 0, 0}, {1, 1, 1}},
  };

  // Pass 1: collect kept tets (centroid inside the myocardium) on grid nodes.
  std::map<GridIndex, int> node_ids;
  std::vector<GridIndex> node_grid;
  std::vector<std::array<int, 4>> tets;
  auto node_id = [&](const GridIndex& g) {
    auto it = node_ids.find(g);
    if (it != node_ids.end()) return it->second;
    const int id = static_cast<int>(node_grid.size());
    node_ids.emplace(g, id);
    node_grid.push_back(g);
    return id;
  };

  for (int iz = 0; iz + 1 < nz; ++iz)
    for (int iy = 0; iy + 1 < ny; ++iy)
      for (int ix = 0; ix + 1 < nx; ++ix)
        for (const auto& tet : kCellTets) {
          Vec3 centroid{0, 0, 0};
          GridIndex idx[4];
          for (int k = 0; k < 4; ++k) {
            idx[k] = {ix + tet[k][0], iy + tet[k][1], iz + tet[k][2]};
            centroid += grid_point(idx[k].ix, idx[k].iy, idx[k].iz);
          }
          centroid *= 0.25;
          if (!reg.in_myocardium(centroid)) continue;
          tets.push_back({node_id(idx[0]), node_id(idx[1]), node_id(idx[2]), node_id(idx[3])});
        }

  if (tets.empty()) throw input_error("phantom config: empty myocardium");

  // Keep the largest connected component.
  {
    const int nn = static_cast<int>(node_grid.size());
    std::vector<int> parent(static_cast<std::size_t>(nn));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
      while (parent[static_cast<std::size_t>(a)] != a) {
        parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
        a = parent[static_cast<std::size_t>(a)];
      }
      return a;
    };
    for (const auto& t : tets)
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
          const int ra = find(t[a]), rb = find(t[b]);
          if (ra != rb) parent[static_cast<std::size_t>(ra)] = rb;
        }
    std::map<int, int> comp_size;
    for (int i = 0; i < nn; ++i) comp_size[find(i)]++;
    int best_root = -1, best = -1;
    for (const auto& [r, sz] : comp_size)
      if (sz > best || (sz == best && r < best_root)) { best = sz; best_root = r; }
    std::vector<std::array<int, 4>> kept;
    kept.reserve(tets.size());
    for (const auto& t : tets)
      if (find(t[0]) == best_root) kept.push_back(t);
    tets.swap(kept);
  }

  // Compact node numbering to used nodes, in grid order for determinism.
  std::vector<char> used(node_grid.size(), 0);
  for (const auto& t : tets)
    for (int k = 0; k < 4; ++k) used[static_cast<std::size_t>(t[k])] = 1;
  std::vector<int> remap(node_grid.size(), -1);
  std::vector<GridIndex> grid_of_node;
  {
    std::vector<int> order(node_grid.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return node_grid[static_cast<std::size_t>(a)] < node_grid[static_cast<std::size_t>(b)];
    });
    for (int old_id : order) {
      if (!used[static_cast<std::size_t>(old_id)]) continue;
      remap[static_cast<std::size_t>(old_id)] = static_cast<int>(grid_of_node.size());
      grid_of_node.push_back(node_grid[static_cast<std::size_t>(old_id)]);
    }
  }
  for (auto& t : tets)
    for (int k = 0; k < 4; ++k) t[k] = remap[static_cast<std::size_t>(t[k])];
  std::sort(tets.begin(), tets.end());

  TetMesh mesh;
  mesh.tets = std::move(tets);
  mesh.nodes.reserve(grid_of_node.size());
  for (const auto& g : grid_of_node) mesh.nodes.push_back(grid_point(g.ix, g.iy, g.iz));

  // Boundary faces (faces in exactly one tet) for labeling and jitter masking.
  static const int kFaceCorners[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
  std::map<std::array<int, 3>, std::pair<int, int>> face_count;  // sorted face -> (count, tet)
  for (std::size_t t = 0; t < mesh.tets.size(); ++t)
    for (const auto& fc : kFaceCorners) {
      std::array<int, 3> f{mesh.tets[t][fc[0]], mesh.tets[t][fc[1]], mesh.tets[t][fc[2]]};
      std::array<int, 3> key = f;
      std::sort(key.begin(), key.end());
      auto it = face_count.find(key);
      if (it == face_count.end()) face_count.emplace(key, std::make_pair(1, static_cast<int>(t)));
      else it->second.first++;
    }

  std::vector<char> on_boundary(mesh.nodes.size(), 0);
  mesh.node_labels.assign(mesh.nodes.size(), NodeLabel::Interior);
  for (const auto& [key, cnt_tet] : face_count) {
    if (cnt_tet.first != 1) continue;
    for (int k = 0; k < 3; ++k) on_boundary[static_cast<std::size_t>(key[k])] = 1;
    // Classify by a probe point just outside the face.
    const int t = cnt_tet.second;
    // Recover face orientation from the owning tet.
    const auto& tet = mesh.tets[static_cast<std::size_t>(t)];
    for (const auto& fc : kFaceCorners) {
      std::array<int, 3> f{tet[fc[0]], tet[fc[1]], tet[fc[2]]};
      std::array<int, 3> skey = f;
      std::sort(skey.begin(), skey.end());
      if (skey != key) continue;
      const Vec3 a = mesh.nodes[static_cast<std::size_t>(f[0])];
      const Vec3 b = mesh.nodes[static_cast<std::size_t>(f[1])];
      const Vec3 c = mesh.nodes[static_cast<std::size_t>(f[2])];
      const Vec3 fcentroid = (a + b + c) / 3.0;
      Vec3 normal = (b - a).cross(c - a);  // outward for kFaceCorners ordering
      const double nn = normal.norm();
      if (nn == 0.0) break;
      const Vec3 probe = fcentroid + normal * (0.25 * h / nn);
      NodeLabel face_label = NodeLabel::Epi;
      if (reg.in_lv_cavity(probe)) face_label = NodeLabel::LvEndo;
      else if (reg.in_rv_cavity(probe)) face_label = NodeLabel::RvEndo;
      for (int k = 0; k < 3; ++k) {
        NodeLabel& nl = mesh.node_labels[static_cast<std::size_t>(f[k])];
        // Priority: LV_ENDO > RV_ENDO > EPI.
        if (nl == NodeLabel::Interior || nl == NodeLabel::Epi) nl = face_label;
        else if (nl == NodeLabel::RvEndo && face_label == NodeLabel::LvEndo) nl = face_label;
      }
      break;
    }
  }

  mesh.part_labels.resize(mesh.nodes.size());
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
    mesh.part_labels[i] = reg.rv_free_wall(mesh.nodes[i]) ? PartLabel::Rv : PartLabel::Lv;

  // Seeded jitter on interior nodes; boundary stays on the grid so the labels
  // remain geometric. Nodes whose jitter would invert a tet are reverted.
  if (config.jitter > 0.0) {
    Rng rng(config.seed);
    std::vector<Vec3> offset(mesh.nodes.size(), Vec3{0, 0, 0});
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
      const double ox = rng.uniform(-config.jitter, config.jitter) * h;
      const double oy = rng.uniform(-config.jitter, config.jitter) * h;
      const double oz = rng.uniform(-config.jitter, config.jitter) * h;
      if (!on_boundary[i]) offset[i] = Vec3{ox, oy, oz};
    }
    std::vector<Vec3> base = mesh.nodes;
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) mesh.nodes[i] = base[i] + offset[i];
    const double vol_floor = 0.05 * h * h * h / 6.0;
    for (int round = 0; round < 8; ++round) {
      bool reverted = false;
      for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
        if (mesh.tet_signed_volume(static_cast<int>(t)) > vol_floor) continue;
        for (int k = 0; k < 4; ++k) {
          const auto i = static_cast<std::size_t>(mesh.tets[t][k]);
          if (offset[i].squared_norm() > 0.0) {
            offset[i] = Vec3{0, 0, 0};
            mesh.nodes[i] = base[i];
            reverted = true;
          }
        }
      }
      if (!reverted) break;
    }
  }

  mesh.validate();

  // Rule-based fibers: helix angle +60deg at endocardium to -60deg at
  // epicardium, rotated about the local transmural (radial) axis.
  FiberFrame frame;
  frame.per_tet.resize(mesh.tets.size());
  const Vec3 z_axis{0, 0, 1};
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
    const Vec3 c = mesh.tet_centroid(static_cast<int>(t));
    const bool rv = reg.rv_free_wall(c);
    const Vec3 center = rv ? config.rv_center : Vec3{0, 0, 0};
    const Vec3 endo_axes = rv ? reg.rv_endo_axes : reg.lv_endo_axes;
    const Vec3 epi_axes = rv ? config.rv_epi_axes : config.lv_epi_axes;

    Vec3 radial{c.x - center.x, c.y - center.y, 0.0};
    if (radial.norm() < 1e-9) radial = Vec3{1, 0, 0};
    const Vec3 er = radial.normalized();
    const Vec3 ec = z_axis.cross(er).normalized();
    const Vec3 el = er.cross(ec);  // equals +z for horizontal er

    // Transmural depth from pseudo-distances to the cavity and epi surfaces.
    const double d_endo =
        std::abs(ellipsoid_level(c, center, endo_axes) - 1.0) /
        std::max(ellipsoid_level_gradient(c, center, endo_axes).norm(), 1e-12);
    const double d_epi =
        std::abs(ellipsoid_level(c, center, epi_axes) - 1.0) /
        std::max(ellipsoid_level_gradient(c, center, epi_axes).norm(), 1e-12);
    const double depth = std::clamp(d_endo / std::max(d_endo + d_epi, 1e-12), 0.0, 1.0);

    const double helix = (60.0 - 120.0 * depth) * (3.14159265358979323846 / 180.0);
    const Vec3 f = (ec * std::cos(helix) + el * std::sin(helix)).normalized();
    const Vec3 s = er;  // orthogonal to both ec and el, hence to f
    const Vec3 n = f.cross(s);
    frame.per_tet[t] = {f, s, n};
  }
  frame.validate(mesh);

  return {std::move(mesh), std::move(frame)};
}

}  // namespace cardiotwin
