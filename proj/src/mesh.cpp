#include "rmfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace rmfem {

namespace {

Mat3 tet_jacobian(const Vec3& v0, const Vec3& v1, const Vec3& v2, const Vec3& v3) {
  // Columns are the directions carrying barycentrics lambda_3 (xi),
  // lambda_2 (eta), lambda_1 (zeta) of the stored vertex slots.
  Mat3 j;
  const Vec3 cx = v3 - v0, cy = v2 - v0, cz = v1 - v0;
  for (int i = 0; i < 3; ++i) {
    j(i, 0) = cx[i];
    j(i, 1) = cy[i];
    j(i, 2) = cz[i];
  }
  return j;
}

double det3(const Mat3& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

Mat3 inverse3(const Mat3& m, double det) {
  Mat3 inv;
  inv(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / det;
  inv(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) / det;
  inv(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) / det;
  inv(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) / det;
  inv(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / det;
  inv(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) / det;
  inv(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) / det;
  inv(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) / det;
  inv(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / det;
  return inv;
}

// Shared connectivity build over sorted entity keys.
void build_connectivity(Mesh& mesh) {
  const int vpc = mesh.verts_per_cell();
  const int nc = mesh.num_cells();
  const bool tet = mesh.cell_type == CellType::Tet;
  const int epc = mesh.edges_per_cell();
  const int fpc = mesh.faces_per_cell();

  std::map<std::array<int, 2>, int> edge_ids;
  std::map<std::array<int, 4>, int> face_ids;
  mesh.cell_edges.assign(static_cast<long>(nc) * epc, -1);
  mesh.cell_faces.assign(static_cast<long>(nc) * fpc, -1);

  for (int c = 0; c < nc; ++c) {
    const int* cv = mesh.cells.data() + static_cast<long>(c) * vpc;
    for (int e = 0; e < epc; ++e) {
      std::array<int, 2> key;
      if (tet) {
        key = {cv[kTetEdges[e][0]], cv[kTetEdges[e][1]]};
      } else {
        key = {cv[kHexEdges[e][0]], cv[kHexEdges[e][1]]};
      }
      if (key[0] > key[1]) std::swap(key[0], key[1]);
      auto [it, inserted] = edge_ids.try_emplace(key, static_cast<int>(mesh.edges.size()));
      if (inserted) mesh.edges.push_back(key);
      mesh.cell_edges[static_cast<long>(c) * epc + e] = it->second;
    }
    for (int f = 0; f < fpc; ++f) {
      std::array<int, 4> key{-1, -1, -1, -1};
      if (tet) {
        for (int k = 0; k < 3; ++k) key[k] = cv[kTetFaces[f][k]];
        std::sort(key.begin(), key.begin() + 3);
      } else {
        for (int k = 0; k < 4; ++k) key[k] = cv[kHexFaces[f][k]];
        std::sort(key.begin(), key.end());
      }
      auto [it, inserted] = face_ids.try_emplace(key, static_cast<int>(mesh.faces.size()));
      if (inserted) {
        mesh.faces.push_back(key);
        mesh.face_cells.push_back({c, -1});
      } else {
        if (mesh.face_cells[it->second][1] != -1)
          throw std::runtime_error("non-manifold mesh: face shared by >2 cells");
        mesh.face_cells[it->second][1] = c;
      }
      mesh.cell_faces[static_cast<long>(c) * fpc + f] = it->second;
    }
  }
}

int classify_side(const Mesh& mesh, const std::array<int, 4>& face,
                  const std::array<double, 6>& bounds, double tol) {
  const int nv = face[3] < 0 ? 3 : 4;
  for (int axis = 0; axis < 3; ++axis) {
    for (int lohi = 0; lohi < 2; ++lohi) {
      const double plane = bounds[2 * axis + lohi];
      bool on = true;
      for (int k = 0; k < nv && on; ++k)
        on = std::abs(mesh.vertices[face[k]][axis] - plane) <= tol;
      if (on) return 2 * axis + lohi;
    }
  }
  return -1;
}

void mark_boundary(Mesh& mesh, const std::array<double, 6>& bounds) {
  const double tol = 1e-12 * std::max({std::abs(bounds[1] - bounds[0]),
                                       std::abs(bounds[3] - bounds[2]),
                                       std::abs(bounds[5] - bounds[4]), 1.0});
  for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f) {
    if (mesh.face_cells[f][1] != -1) continue;
    const int side = classify_side(mesh, mesh.faces[f], bounds, tol);
    if (side < 0) throw std::runtime_error("boundary facet not on any box side");
    mesh.boundary_facets.push_back({f, side});
  }
}

void mark_boundary_generic(Mesh& mesh) {
  for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f)
    if (mesh.face_cells[f][1] == -1) mesh.boundary_facets.push_back({f, -1});
}

void orient_and_check(Mesh& mesh) {
  const int nc = mesh.num_cells();
  for (int c = 0; c < nc; ++c) {
    int* cv = mesh.cells.data() + static_cast<long>(c) * 4;
    const Mat3 j =
        tet_jacobian(mesh.vertices[cv[0]], mesh.vertices[cv[1]], mesh.vertices[cv[2]],
                     mesh.vertices[cv[3]]);
    double d = det3(j);
    if (d < 0.0) {
      std::swap(cv[2], cv[3]);
      d = -d;
    }
    if (!(d > 0.0))
      throw std::runtime_error("degenerate tetrahedron (detJ = 0) in cell " + std::to_string(c));
  }
}

}  // namespace

Vec3 Mesh::cell_centroid(int c) const {
  const int vpc = verts_per_cell();
  Vec3 s;
  for (int k = 0; k < vpc; ++k) s += vertices[cell(c)[k]];
  return s * (1.0 / vpc);
}

ElementMap element_map(const Mesh& mesh, int cell) {
  ElementMap m;
  const int* cv = mesh.cell(cell);
  if (mesh.cell_type == CellType::Tet) {
    m.origin = mesh.vertices[cv[0]];
    m.J = tet_jacobian(mesh.vertices[cv[0]], mesh.vertices[cv[1]], mesh.vertices[cv[2]],
                       mesh.vertices[cv[3]]);
  } else {
    const Vec3 v0 = mesh.vertices[cv[0]];
    const Vec3 dx = mesh.vertices[cv[1]] - v0;
    const Vec3 dy = mesh.vertices[cv[3]] - v0;
    const Vec3 dz = mesh.vertices[cv[4]] - v0;
    m.origin = v0;
    m.J = Mat3{};
    m.J(0, 0) = dx.x;
    m.J(1, 1) = dy.y;
    m.J(2, 2) = dz.z;
    const double off = std::abs(dx.y) + std::abs(dx.z) + std::abs(dy.x) + std::abs(dy.z) +
                       std::abs(dz.x) + std::abs(dz.y);
    if (off > 1e-12 * (std::abs(dx.x) + std::abs(dy.y) + std::abs(dz.z)))
      throw std::runtime_error("hex cell is not axis-aligned (non-diagonal Jacobian)");
  }
  m.detJ = det3(m.J);
  if (!(m.detJ > 0.0))
    throw std::runtime_error("degenerate cell (detJ <= 0) in element_map, cell " +
                             std::to_string(cell));
  m.Jinv = inverse3(m.J, m.detJ);
  m.JinvT = transpose(m.Jinv);
  return m;
}

Vec3 covariant_piola(const ElementMap& map, const Vec3& ref_vec) {
  return matvec(map.JinvT, ref_vec);
}

Vec3 curl_pushforward(const ElementMap& map, const Vec3& ref_curl) {
  return matvec(map.J, ref_curl) * (1.0 / map.detJ);
}

Mesh make_tet_mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> cells) {
  Mesh mesh;
  mesh.cell_type = CellType::Tet;
  mesh.vertices = std::move(vertices);
  mesh.cells.reserve(cells.size() * 4);
  for (const auto& c : cells) {
    std::array<int, 4> s = c;
    std::sort(s.begin(), s.end());
    if (s[0] == s[1] || s[1] == s[2] || s[2] == s[3])
      throw std::invalid_argument("tet cell with repeated vertex");
    for (int v : s) mesh.cells.push_back(v);
  }
  orient_and_check(mesh);
  build_connectivity(mesh);
  mark_boundary_generic(mesh);
  return mesh;
}

Mesh make_hex_mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 8>> cells) {
  Mesh mesh;
  mesh.cell_type = CellType::Hex;
  mesh.vertices = std::move(vertices);
  for (const auto& c : cells)
    for (int v : c) mesh.cells.push_back(v);
  for (int c = 0; c < mesh.num_cells(); ++c) element_map(mesh, c);  // validates
  build_connectivity(mesh);
  mark_boundary_generic(mesh);
  return mesh;
}

namespace {

void check_box_args(const std::array<double, 6>& bounds, const std::array<int, 3>& divisions) {
  for (int a = 0; a < 3; ++a) {
    if (divisions[a] < 1)
      throw std::invalid_argument("box mesh needs >= 1 division per axis");
    if (!(bounds[2 * a + 1] > bounds[2 * a]))
      throw std::invalid_argument("box mesh needs increasing bounds per axis");
  }
}

}  // namespace

Mesh box_tet_mesh(const std::array<double, 6>& bounds, const std::array<int, 3>& divisions) {
  check_box_args(bounds, divisions);
  const int nx = divisions[0], ny = divisions[1], nz = divisions[2];
  const double hx = (bounds[1] - bounds[0]) / nx;
  const double hy = (bounds[3] - bounds[2]) / ny;
  const double hz = (bounds[5] - bounds[4]) / nz;

  Mesh mesh;
  mesh.cell_type = CellType::Tet;
  mesh.vertices.reserve(static_cast<long>(nx + 1) * (ny + 1) * (nz + 1));
  auto vid = [&](int i, int j, int k) { return i + (nx + 1) * (j + (ny + 1) * k); };
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        mesh.vertices.push_back({bounds[0] + i * hx, bounds[2] + j * hy, bounds[4] + k * hz});

  // Kuhn split: one tet per permutation of the axes, each a monotone lattice
  // path from the low corner to the high corner of the grid cell. All six tets
  // share the main diagonal, so neighbouring grid cells match up.
  constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  mesh.cells.reserve(static_cast<long>(nx) * ny * nz * 6 * 4);
  std::array<int, 4> tet{};
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        for (const auto& p : perms) {
          int c[3] = {i, j, k};
          tet[0] = vid(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[p[s]];
            tet[s + 1] = vid(c[0], c[1], c[2]);
          }
          // Path order is ascending in vertex id; fix handedness only.
          std::array<int, 4> cell = tet;
          const Mat3 jm = tet_jacobian(mesh.vertices[cell[0]], mesh.vertices[cell[1]],
                                       mesh.vertices[cell[2]], mesh.vertices[cell[3]]);
          if (det3(jm) < 0.0) std::swap(cell[2], cell[3]);
          for (int v : cell) mesh.cells.push_back(v);
        }

  orient_and_check(mesh);
  build_connectivity(mesh);
  mark_boundary(mesh, bounds);
  return mesh;
}

Mesh box_hex_mesh(const std::array<double, 6>& bounds, const std::array<int, 3>& divisions) {
  check_box_args(bounds, divisions);
  const int nx = divisions[0], ny = divisions[1], nz = divisions[2];
  const double hx = (bounds[1] - bounds[0]) / nx;
  const double hy = (bounds[3] - bounds[2]) / ny;
  const double hz = (bounds[5] - bounds[4]) / nz;

  Mesh mesh;
  mesh.cell_type = CellType::Hex;
  auto vid = [&](int i, int j, int k) { return i + (nx + 1) * (j + (ny + 1) * k); };
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        mesh.vertices.push_back({bounds[0] + i * hx, bounds[2] + j * hy, bounds[4] + k * hz});

  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const int v[8] = {vid(i, j, k),         vid(i + 1, j, k),         vid(i + 1, j + 1, k),
                          vid(i, j + 1, k),     vid(i, j, k + 1),         vid(i + 1, j, k + 1),
                          vid(i + 1, j + 1, k + 1), vid(i, j + 1, k + 1)};
        for (int s = 0; s < 8; ++s) mesh.cells.push_back(v[s]);
      }

  for (int c = 0; c < mesh.num_cells(); ++c) element_map(mesh, c);
  build_connectivity(mesh);
  mark_boundary(mesh, bounds);
  return mesh;
}

}  // namespace rmfem
