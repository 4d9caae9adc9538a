#include "cardiotwin/mesh.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace cardiotwin {

const char* to_string(NodeLabel l) {
  switch (l) {
    case NodeLabel::LvEndo: return "LV_ENDO";
    case NodeLabel::RvEndo: return "RV_ENDO";
    case NodeLabel::Epi: return "EPI";
    case NodeLabel::Interior: return "INTERIOR";
  }
  return "?";
}

const char* to_string(PartLabel l) { return l == PartLabel::Lv ? "LV" : "RV"; }

NodeLabel node_label_from_string(const std::string& s) {
  if (s == "LV_ENDO") return NodeLabel::LvEndo;
  if (s == "RV_ENDO") return NodeLabel::RvEndo;
  if (s == "EPI") return NodeLabel::Epi;
  if (s == "INTERIOR") return NodeLabel::Interior;
  throw input_error("unknown node label '" + s + "'");
}

PartLabel part_label_from_string(const std::string& s) {
  if (s == "LV") return PartLabel::Lv;
  if (s == "RV") return PartLabel::Rv;
  throw input_error("unknown part label '" + s + "'");
}

double TetMesh::tet_signed_volume(int t) const {
  const auto& tet = tets[static_cast<std::size_t>(t)];
  const Vec3 a = nodes[tet[1]] - nodes[tet[0]];
  const Vec3 b = nodes[tet[2]] - nodes[tet[0]];
  const Vec3 c = nodes[tet[3]] - nodes[tet[0]];
  return a.dot(b.cross(c)) / 6.0;
}

Vec3 TetMesh::tet_centroid(int t) const {
  const auto& tet = tets[static_cast<std::size_t>(t)];
  return (nodes[tet[0]] + nodes[tet[1]] + nodes[tet[2]] + nodes[tet[3]]) * 0.25;
}

std::pair<Vec3, Vec3> TetMesh::bounding_box() const {
  if (nodes.empty()) throw input_error("bounding_box: empty mesh");
  Vec3 lo = nodes[0], hi = nodes[0];
  for (const Vec3& p : nodes) {
    lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
    hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
  }
  return {lo, hi};
}

std::array<Vec3, 4> TetMesh::shape_gradients(int t) const {
  const auto& tet = tets[static_cast<std::size_t>(t)];
  const Vec3 e1 = nodes[tet[1]] - nodes[tet[0]];
  const Vec3 e2 = nodes[tet[2]] - nodes[tet[0]];
  const Vec3 e3 = nodes[tet[3]] - nodes[tet[0]];
  const Mat3 edges = Mat3::from_columns(e1, e2, e3);
  if (std::abs(edges.det()) < 1e-14)
    throw std::domain_error("shape_gradients: degenerate tet " + std::to_string(t));
  const Mat3 inv = edges.inverse();
  // Row i of inv is the gradient of barycentric coordinate i+1.
  const Vec3 g1{inv(0, 0), inv(0, 1), inv(0, 2)};
  const Vec3 g2{inv(1, 0), inv(1, 1), inv(1, 2)};
  const Vec3 g3{inv(2, 0), inv(2, 1), inv(2, 2)};
  return {-(g1 + g2 + g3), g1, g2, g3};
}

void TetMesh::validate() const {
  const int nn = num_nodes();
  const int nt = num_tets();
  if (nn == 0) throw input_error("mesh invariant violated: mesh has no nodes");
  if (nt == 0) throw input_error("mesh invariant violated: mesh has no tets");
  if (node_labels.size() != nodes.size()) {
    std::ostringstream os;
    os << "mesh invariant violated: node_labels size " << node_labels.size()
       << " != node count " << nn;
    throw input_error(os.str());
  }
  if (part_labels.size() != nodes.size()) {
    std::ostringstream os;
    os << "mesh invariant violated: part_labels size " << part_labels.size()
       << " != node count " << nn;
    throw input_error(os.str());
  }
  for (int t = 0; t < nt; ++t) {
    const auto& tet = tets[static_cast<std::size_t>(t)];
    for (int k = 0; k < 4; ++k) {
      if (tet[k] < 0 || tet[k] >= nn) {
        std::ostringstream os;
        os << "mesh invariant violated: tets[" << t << "][" << k << "]=" << tet[k]
           << " out of range [0," << nn << ")";
        throw input_error(os.str());
      }
    }
  }
  for (int t = 0; t < nt; ++t) {
    const double v = tet_signed_volume(t);
    if (!(v > 0.0)) {
      std::ostringstream os;
      os << "mesh invariant violated: tets[" << t << "] has non-positive signed volume " << v;
      throw input_error(os.str());
    }
  }
  std::vector<char> used(static_cast<std::size_t>(nn), 0);
  for (const auto& tet : tets)
    for (int k = 0; k < 4; ++k) used[static_cast<std::size_t>(tet[k])] = 1;
  for (int i = 0; i < nn; ++i) {
    if (!used[static_cast<std::size_t>(i)]) {
      std::ostringstream os;
      os << "mesh invariant violated: node " << i << " belongs to no tet";
      throw input_error(os.str());
    }
  }
  // Connectivity over tet edges via union-find.
  std::vector<int> parent(static_cast<std::size_t>(nn));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  for (const auto& tet : tets)
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) {
        const int ra = find(tet[a]), rb = find(tet[b]);
        if (ra != rb) parent[static_cast<std::size_t>(ra)] = rb;
      }
  const int root = find(0);
  for (int i = 1; i < nn; ++i) {
    if (find(i) != root) {
      std::ostringstream os;
      os << "mesh invariant violated: node adjacency graph is disconnected (node " << i
         << " unreachable from node 0)";
      throw input_error(os.str());
    }
  }
}

void FiberFrame::validate(const TetMesh& mesh) const {
  if (per_tet.size() != mesh.tets.size()) {
    std::ostringstream os;
    os << "fiber frame invariant violated: triad count " << per_tet.size()
       << " != tet count " << mesh.tets.size();
    throw input_error(os.str());
  }
  constexpr double tol = 1e-9;
  for (std::size_t t = 0; t < per_tet.size(); ++t) {
    const Triad& tr = per_tet[t];
    auto bad = [&](const std::string& what) {
      std::ostringstream os;
      os << "fiber frame invariant violated at tet " << t << ": " << what;
      throw input_error(os.str());
    };
    if (std::abs(tr.f.norm() - 1.0) > tol) bad("|f| != 1");
    if (std::abs(tr.s.norm() - 1.0) > tol) bad("|s| != 1");
    if (std::abs(tr.n.norm() - 1.0) > tol) bad("|n| != 1");
    if (std::abs(tr.f.dot(tr.s)) > tol) bad("f.s != 0");
    if (std::abs(tr.f.dot(tr.n)) > tol) bad("f.n != 0");
    if (std::abs(tr.s.dot(tr.n)) > tol) bad("s.n != 0");
    const double det = Mat3::from_columns(tr.f, tr.s, tr.n).det();
    if (std::abs(det - 1.0) > tol) bad("det[f s n] != +1");
  }
}

}  // namespace cardiotwin
