#ifndef RMFEM_MESH_HPP
#define RMFEM_MESH_HPP

#include <array>
#include <vector>

#include "rmfem/tensor3.hpp"

// Conforming tetrahedral and hexahedral box meshes with full polytope
// connectivity (vertices, edges, faces, cells) and boundary facet markers.
// Tetrahedral boxes use the six-tet Kuhn split of each grid cell, so uniform
// refinements nest and every interior grid plane is matched by facets.

namespace rmfem {

enum class CellType { Tet, Hex };

// Boundary side markers of a box: 0 x-, 1 x+, 2 y-, 3 y+, 4 z-, 5 z+.
struct BoundaryFacet {
  int face = -1;  // index into Mesh::faces
  int side = -1;
};

struct Mesh {
  CellType cell_type = CellType::Tet;
  std::vector<Vec3> vertices;
  std::vector<int> cells;  // ncells x verts_per_cell, positive orientation

  std::vector<std::array<int, 2>> edges;  // ascending global vertex ids
  std::vector<std::array<int, 4>> faces;  // sorted ids, [3] = -1 for triangles
  std::vector<int> cell_edges;            // ncells x edges_per_cell
  std::vector<int> cell_faces;            // ncells x faces_per_cell
  std::vector<std::array<int, 2>> face_cells;  // second = -1 on the boundary
  std::vector<BoundaryFacet> boundary_facets;

  int verts_per_cell() const { return cell_type == CellType::Tet ? 4 : 8; }
  int edges_per_cell() const { return cell_type == CellType::Tet ? 6 : 12; }
  int faces_per_cell() const { return cell_type == CellType::Tet ? 4 : 6; }
  int num_cells() const {
    return cells.empty() ? 0 : static_cast<int>(cells.size()) / verts_per_cell();
  }
  const int* cell(int c) const { return cells.data() + static_cast<long>(c) * verts_per_cell(); }
  const int* cell_edge(int c) const {
    return cell_edges.data() + static_cast<long>(c) * edges_per_cell();
  }
  const int* cell_face(int c) const {
    return cell_faces.data() + static_cast<long>(c) * faces_per_cell();
  }
  Vec3 cell_centroid(int c) const;
};

// Affine cell map x = origin + J xi. For tets the reference vertex slots
// (0,0,0), (0,0,1), (0,1,0), (1,0,0) carry the barycentrics
// (1-xi-eta-zeta, zeta, eta, xi); for axis-aligned hexes J is diagonal and
// the map sends [0,1]^3 to the cell. detJ > 0 is enforced at mesh build.
struct ElementMap {
  Vec3 origin;
  Mat3 J, Jinv, JinvT;
  double detJ = 0.0;

  Vec3 map(const Vec3& ref) const { return origin + matvec(J, ref); }
  Vec3 pull(const Vec3& x) const { return matvec(Jinv, x - origin); }
};

ElementMap element_map(const Mesh& mesh, int cell);

// Covariant Piola transform of a reference vector proxy: theta = J^{-T} v.
Vec3 covariant_piola(const ElementMap& map, const Vec3& ref_vec);
// Push-forward of a reference curl under the covariant map: J c / detJ.
Vec3 curl_pushforward(const ElementMap& map, const Vec3& ref_curl);

// Uniform boxes. bounds = {xmin,xmax,ymin,ymax,zmin,zmax}, divisions per axis.
Mesh box_tet_mesh(const std::array<double, 6>& bounds, const std::array<int, 3>& divisions);
Mesh box_hex_mesh(const std::array<double, 6>& bounds, const std::array<int, 3>& divisions);

// Build a conforming mesh from explicit cells (used by tests and meshers).
// Tet cells are reordered to positive orientation.
Mesh make_tet_mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> cells);
Mesh make_hex_mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 8>> cells);

// Local polytope tables over sorted vertex slots: pairs/triples are listed in
// lexicographic order so that two cells enumerate a shared entity identically.
inline constexpr std::array<std::array<int, 2>, 6> kTetEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
inline constexpr std::array<std::array<int, 3>, 4> kTetFaces = {
    {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
// Hex edges/faces in the stored (grid) vertex order of box_hex_mesh cells.
inline constexpr std::array<std::array<int, 2>, 12> kHexEdges = {{{0, 1},
                                                                  {1, 2},
                                                                  {2, 3},
                                                                  {0, 3},
                                                                  {0, 4},
                                                                  {1, 5},
                                                                  {2, 6},
                                                                  {3, 7},
                                                                  {4, 5},
                                                                  {5, 6},
                                                                  {6, 7},
                                                                  {4, 7}}};
inline constexpr std::array<std::array<int, 4>, 6> kHexFaces = {{{0, 1, 2, 3},
                                                                 {4, 5, 6, 7},
                                                                 {0, 1, 5, 4},
                                                                 {3, 2, 6, 7},
                                                                 {0, 3, 7, 4},
                                                                 {1, 2, 6, 5}}};

}  // namespace rmfem

#endif
