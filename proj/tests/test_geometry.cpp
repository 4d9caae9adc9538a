#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "test_helpers.hpp"

using namespace cardiotwin;
using namespace cardiotwin::testing;

namespace {

// Brute-force edge enumeration oracle: every tet edge exactly once.
std::set<std::pair<int, int>> enumerate_edges(const TetMesh& mesh) {
  std::set<std::pair<int, int>> edges;
  for (const auto& tet : mesh.tets)
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        edges.insert({std::min(tet[a], tet[b]), std::max(tet[a], tet[b])});
  return edges;
}

}  // namespace

TEST_CASE("single tet graph has 6 edges") {
  const TetMesh mesh = single_tet_mesh();
  const MeshGraph g = build_graph(mesh);
  CHECK(g.edges.size() == 6);
}

TEST_CASE("two tets sharing a face give 9 edges") {
  const TetMesh mesh = two_tet_mesh();
  const MeshGraph g = build_graph(mesh);
  CHECK(g.edges.size() == 9);
}

TEST_CASE("graph edges match brute-force enumeration on the phantom") {
  const auto& [mesh, frame] = default_phantom();
  const MeshGraph g = build_graph(mesh);
  const auto oracle = enumerate_edges(mesh);
  REQUIRE(g.edges.size() == oracle.size());
  for (const auto& e : g.edges) CHECK(oracle.count({e.a, e.b}) == 1);
}

TEST_CASE("shared edges take the lowest owning tet") {
  const TetMesh mesh = two_tet_mesh();
  const MeshGraph g = build_graph(mesh);
  for (const auto& e : g.edges) {
    if ((e.a == 0 && e.b == 1) || (e.a == 0 && e.b == 2) || (e.a == 1 && e.b == 2))
      CHECK(e.tet == 0);  // face shared by tets 0 and 1
  }
}

TEST_CASE("default phantom passes every mesh invariant") {
  const auto& [mesh, frame] = default_phantom();
  CHECK_NOTHROW(mesh.validate());
  CHECK_NOTHROW(frame.validate(mesh));
  // Both endocardial surfaces must be present and labeled.
  int lv_endo = 0, rv_endo = 0, epi = 0;
  for (auto l : mesh.node_labels) {
    lv_endo += l == NodeLabel::LvEndo;
    rv_endo += l == NodeLabel::RvEndo;
    epi += l == NodeLabel::Epi;
  }
  CHECK(lv_endo > 20);
  CHECK(rv_endo > 20);
  CHECK(epi > 20);
  int rv_part = 0;
  for (auto l : mesh.part_labels) rv_part += l == PartLabel::Rv;
  CHECK(rv_part > 0);
  CHECK(rv_part < mesh.num_nodes());
}

TEST_CASE("phantom generation is deterministic for a fixed seed") {
  PhantomConfig c;
  c.resolution = 0.8;
  const auto [m1, f1] = build_phantom(c);
  const auto [m2, f2] = build_phantom(c);
  REQUIRE(m1.nodes.size() == m2.nodes.size());
  REQUIRE(m1.tets == m2.tets);
  for (std::size_t i = 0; i < m1.nodes.size(); ++i) CHECK(m1.nodes[i] == m2.nodes[i]);
  for (std::size_t t = 0; t < f1.per_tet.size(); ++t) {
    CHECK(f1.per_tet[t].f == f2.per_tet[t].f);
    CHECK(f1.per_tet[t].s == f2.per_tet[t].s);
    CHECK(f1.per_tet[t].n == f2.per_tet[t].n);
  }

  PhantomConfig other = c;
  other.seed = c.seed + 1;
  const auto [m3, f3] = build_phantom(other);
  bool all_equal = m1.nodes.size() == m3.nodes.size();
  if (all_equal)
    for (std::size_t i = 0; i < m1.nodes.size(); ++i)
      if (!(m1.nodes[i] == m3.nodes[i])) { all_equal = false; break; }
  CHECK_FALSE(all_equal);  // the jitter seed must matter
}

TEST_CASE("halving the resolution grows the node count by 6x to 10x") {
  PhantomConfig coarse;
  coarse.resolution = 0.8;
  PhantomConfig fine = coarse;
  fine.resolution = 0.4;
  const auto [mc, fc] = build_phantom(coarse);
  const auto [mf, ff] = build_phantom(fine);
  const double factor = static_cast<double>(mf.nodes.size()) / static_cast<double>(mc.nodes.size());
  CHECK(factor >= 6.0);
  CHECK(factor <= 10.0);
}

TEST_CASE("degenerate phantom configurations are rejected") {
  PhantomConfig c;
  c.lv_wall = c.lv_epi_axes.y + 0.5;  // cavity would be larger than the wall
  CHECK_THROWS_AS(build_phantom(c), input_error);

  PhantomConfig c2;
  c2.resolution = -1.0;
  CHECK_THROWS_AS(build_phantom(c2), input_error);
}

TEST_CASE("edge traversal time: axis-aligned fiber case") {
  const TetMesh mesh = single_tet_mesh();
  MeshGraph g = build_graph(mesh);
  const FiberFrame frame = axis_aligned_frame(1);
  ConductionVelocities cv{80, 40, 30, 150};

  // Edge (0,1) points along +x = fiber direction, length 1.
  for (const auto& e : g.edges) {
    if (e.a == 0 && e.b == 1) {
      CHECK(edge_traversal_time(e, frame, cv) == doctest::Approx(1.0 / 80.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("edge traversal time: 45 degrees in the fiber-sheet plane") {
  MeshGraph::Edge e;
  e.a = 0;
  e.b = 1;
  e.length = 1.0;
  e.unit = Vec3{1, 1, 0}.normalized();
  e.tag = EdgeTag::Myocardium;
  e.tet = 0;
  const FiberFrame frame = axis_aligned_frame(1);
  const ConductionVelocities cv{80, 40, 30, 150};
  const double expected = 1.0 / std::sqrt(0.5 * 80 * 80 + 0.5 * 40 * 40);
  CHECK(edge_traversal_time(e, frame, cv) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("endocardial edges use the fast-layer max rule") {
  MeshGraph::Edge e;
  e.a = 0;
  e.b = 1;
  e.length = 2.0;
  e.unit = Vec3{0, 0, 1};  // sheet-normal direction: slow anisotropic speed
  e.tag = EdgeTag::EndoLv;
  e.tet = 0;
  const FiberFrame frame = axis_aligned_frame(1);
  ConductionVelocities cv{80, 40, 30, 150};
  CHECK(edge_traversal_time(e, frame, cv) == doctest::Approx(2.0 / 150.0).epsilon(1e-14));

  // If the anisotropic speed beats v_e, the bulk speed wins.
  cv.v_e = 10.0;
  e.unit = Vec3{1, 0, 0};
  CHECK(edge_traversal_time(e, frame, cv) == doctest::Approx(2.0 / 80.0).epsilon(1e-14));
}

TEST_CASE("zero-length edges are rejected") {
  MeshGraph::Edge e;
  e.a = 0;
  e.b = 1;
  e.length = 0.0;
  e.unit = {1, 0, 0};
  e.tag = EdgeTag::Myocardium;
  e.tet = 0;
  const FiberFrame frame = axis_aligned_frame(1);
  CHECK_THROWS_AS(edge_traversal_time(e, frame, ConductionVelocities{80, 40, 30, 150}),
                  input_error);
}

TEST_CASE("anisotropic speed is bounded by v_n and v_f for any direction") {
  Rng rng(42);
  const ConductionVelocities cv{80, 40, 30, 150};
  const FiberFrame frame = axis_aligned_frame(1);
  for (int k = 0; k < 2000; ++k) {
    Vec3 u{rng.normal(), rng.normal(), rng.normal()};
    if (u.norm() < 1e-6) continue;
    u = u.normalized();
    const double s = anisotropic_speed(u, frame.per_tet[0], cv);
    CHECK(s >= cv.v_n - 1e-9);
    CHECK(s <= cv.v_f + 1e-9);
  }
}

TEST_CASE("anisotropic speed is symmetric under direction reversal") {
  Rng rng(7);
  const ConductionVelocities cv{70, 45, 31, 130};
  FiberFrame::Triad triad{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const Mat3 rot = Mat3::rotation(Vec3{1, 2, 3}.normalized(), 0.83);
  triad = {rot * triad.f, rot * triad.s, rot * triad.n};
  for (int k = 0; k < 500; ++k) {
    const Vec3 u = Vec3{rng.normal(), rng.normal(), rng.normal()}.normalized();
    CHECK(anisotropic_speed(u, triad, cv) == anisotropic_speed(-u, triad, cv));
  }
}

TEST_CASE("rigid rotation leaves traversal times unchanged") {
  const auto& [mesh, frame] = coarse_phantom();
  const MeshGraph g = build_graph(mesh);
  const ConductionVelocities cv{80, 40, 30, 150};
  const std::vector<double> w = compute_edge_weights(g, frame, cv);

  const Mat3 rot = Mat3::rotation(Vec3{0.3, -0.5, 0.81}.normalized(), 1.234);
  TetMesh rotated = mesh;
  for (auto& p : rotated.nodes) p = rot * p;
  FiberFrame rframe = frame;
  for (auto& tr : rframe.per_tet) tr = {rot * tr.f, rot * tr.s, rot * tr.n};
  const MeshGraph rg = build_graph(rotated);
  const std::vector<double> rw = compute_edge_weights(rg, rframe, cv);

  REQUIRE(w.size() == rw.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    CHECK(std::abs(w[i] - rw[i]) <= 1e-12 * std::abs(w[i]));
}

TEST_CASE("endocardial edge tags require both endpoints on the same surface") {
  const auto& [mesh, frame] = coarse_phantom();
  const MeshGraph g = build_graph(mesh);
  int endo_edges = 0;
  for (const auto& e : g.edges) {
    const NodeLabel la = mesh.node_labels[static_cast<std::size_t>(e.a)];
    const NodeLabel lb = mesh.node_labels[static_cast<std::size_t>(e.b)];
    switch (e.tag) {
      case EdgeTag::EndoLv:
        CHECK(la == NodeLabel::LvEndo);
        CHECK(lb == NodeLabel::LvEndo);
        ++endo_edges;
        break;
      case EdgeTag::EndoRv:
        CHECK(la == NodeLabel::RvEndo);
        CHECK(lb == NodeLabel::RvEndo);
        ++endo_edges;
        break;
      case EdgeTag::Myocardium:
        CHECK_FALSE((la == NodeLabel::LvEndo && lb == NodeLabel::LvEndo));
        CHECK_FALSE((la == NodeLabel::RvEndo && lb == NodeLabel::RvEndo));
        break;
    }
  }
  CHECK(endo_edges > 0);
}

TEST_CASE("mesh validation names the first violated invariant") {
  TetMesh bad = single_tet_mesh();
  bad.tets[0][3] = 99;
  try {
    bad.validate();
    FAIL("expected a validation error");
  } catch (const input_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("tets[0][3]=99") != std::string::npos);
  }

  TetMesh inverted = single_tet_mesh();
  std::swap(inverted.tets[0][0], inverted.tets[0][1]);
  CHECK_THROWS_WITH_AS(inverted.validate(),
                       doctest::Contains("non-positive signed volume"), input_error);

  TetMesh disconnected = single_tet_mesh();
  disconnected.nodes.insert(disconnected.nodes.end(),
                            {{5, 5, 5}, {6, 5, 5}, {5, 6, 5}, {5, 5, 6}});
  disconnected.tets.push_back({4, 5, 6, 7});
  disconnected.node_labels.resize(8, NodeLabel::Interior);
  disconnected.part_labels.resize(8, PartLabel::Lv);
  CHECK_THROWS_WITH_AS(disconnected.validate(), doctest::Contains("disconnected"), input_error);
}

TEST_CASE("fiber frame validation catches broken triads") {
  const TetMesh mesh = single_tet_mesh();
  FiberFrame f = axis_aligned_frame(1);
  f.per_tet[0].f = {2, 0, 0};
  CHECK_THROWS_AS(f.validate(mesh), input_error);
  f = axis_aligned_frame(1);
  f.per_tet[0].n = {0, 0, -1};  // left-handed
  CHECK_THROWS_AS(f.validate(mesh), input_error);
}
