#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "rmfem/mesh.hpp"

using namespace rmfem;

TEST_CASE("kuhn cube counts") {
  const Mesh m = box_tet_mesh({0, 1, 0, 1, 0, 1}, {1, 1, 1});
  CHECK(m.num_cells() == 6);
  CHECK(m.vertices.size() == 8);
  CHECK(m.edges.size() == 19);
  CHECK(m.faces.size() == 18);
  CHECK(m.boundary_facets.size() == 12);

  double vol = 0.0;
  for (int c = 0; c < m.num_cells(); ++c) {
    const ElementMap map = element_map(m, c);
    CHECK(map.detJ > 0.0);
    vol += map.detJ / 6.0;
  }
  CHECK(vol == doctest::Approx(1.0));

  // exactly one interior edge: the main diagonal shared by all six tets
  int interior_edges = 0;
  for (size_t e = 0; e < m.edges.size(); ++e) {
    const Vec3 a = m.vertices[m.edges[e][0]], b = m.vertices[m.edges[e][1]];
    if (norm(a - b) == doctest::Approx(std::sqrt(3.0))) ++interior_edges;
  }
  CHECK(interior_edges == 1);

  for (const auto& e : m.edges) CHECK(e[0] < e[1]);
  for (const auto& f : m.faces) {
    CHECK(f[0] < f[1]);
    CHECK(f[1] < f[2]);
    CHECK(f[3] == -1);
  }
}

TEST_CASE("face incidence is two-sided and complete") {
  const Mesh m = box_tet_mesh({0, 2, 0, 1, 0, 1}, {2, 1, 1});
  CHECK(m.num_cells() == 12);
  int boundary = 0, interior = 0;
  for (size_t f = 0; f < m.faces.size(); ++f) {
    CHECK(m.face_cells[f][0] >= 0);
    if (m.face_cells[f][1] < 0)
      ++boundary;
    else
      ++interior;
  }
  CHECK(boundary == static_cast<int>(m.boundary_facets.size()));
  // 4 faces per cell, interior shared by two
  CHECK(4 * m.num_cells() == boundary + 2 * interior);
  // every cell_face index points back to a face containing the cell
  for (int c = 0; c < m.num_cells(); ++c)
    for (int k = 0; k < 4; ++k) {
      const int f = m.cell_face(c)[k];
      CHECK((m.face_cells[f][0] == c || m.face_cells[f][1] == c));
    }
}

TEST_CASE("element map round trip and piola transforms") {
  const Mesh m = box_tet_mesh({-1, 2, 0, 1, -2, 0}, {3, 1, 2});
  for (int c : {0, 5, m.num_cells() - 1}) {
    const ElementMap map = element_map(m, c);
    const Vec3 xi{0.2, 0.3, 0.1};
    const Vec3 x = map.map(xi);
    const Vec3 back = map.pull(x);
    CHECK(norm(back - xi) == doctest::Approx(0.0).scale(1));
    // covariant transform preserves tangential line integrals: J^{-T} applied
    const Vec3 v{0.4, -0.7, 0.2};
    const Vec3 cov = covariant_piola(map, v);
    const Vec3 expect = matvec(map.JinvT, v);
    CHECK(norm(cov - expect) == doctest::Approx(0.0).scale(1));
    const Vec3 cp = curl_pushforward(map, v);
    const Vec3 expect2 = matvec(map.J, v) * (1.0 / map.detJ);
    CHECK(norm(cp - expect2) == doctest::Approx(0.0).scale(1));
  }
}

TEST_CASE("study box resolves x = +-1 exactly") {
  const Mesh m = box_tet_mesh({-3, 3, -1, 1, -1, 1}, {3, 1, 1});
  CHECK(m.num_cells() == 18);
  CHECK(m.vertices.size() == 16);
  int on_minus = 0, on_plus = 0;
  for (const Vec3& v : m.vertices) {
    if (v.x == -1.0) ++on_minus;
    if (v.x == 1.0) ++on_plus;
  }
  CHECK(on_minus == 4);
  CHECK(on_plus == 4);
  // no cell straddles the interface
  for (int c = 0; c < m.num_cells(); ++c) {
    double lo = 1e30, hi = -1e30;
    for (int k = 0; k < 4; ++k) {
      lo = std::min(lo, m.vertices[m.cell(c)[k]].x);
      hi = std::max(hi, m.vertices[m.cell(c)[k]].x);
    }
    CHECK((hi <= -1.0 || lo >= -1.0));
    CHECK((hi <= 1.0 || lo >= 1.0));
  }
}

TEST_CASE("hex grid counts and geometry") {
  const Mesh m = box_hex_mesh({0, 2, 0, 1, 0, 1}, {2, 1, 1});
  CHECK(m.cell_type == CellType::Hex);
  CHECK(m.num_cells() == 2);
  CHECK(m.vertices.size() == 12);
  CHECK(m.edges.size() == 20);
  CHECK(m.faces.size() == 11);
  CHECK(m.boundary_facets.size() == 10);
  for (const auto& f : m.faces) CHECK(f[3] >= 0);
  for (int c = 0; c < 2; ++c) {
    const ElementMap map = element_map(m, c);
    CHECK(map.detJ == doctest::Approx(1.0));
    const Vec3 g = m.cell_centroid(c);
    CHECK(g.x == doctest::Approx(0.5 + c));
    CHECK(g.y == doctest::Approx(0.5));
  }
}

TEST_CASE("explicit meshes reorient to positive volume") {
  // a tet listed with negative orientation
  std::vector<Vec3> verts = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const Mesh m = make_tet_mesh(verts, {{0, 1, 2, 3}});
  CHECK(m.num_cells() == 1);
  CHECK(element_map(m, 0).detJ > 0.0);
}
