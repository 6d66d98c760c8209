#include "rmfem/dofmap.hpp"

#include <algorithm>
#include <stdexcept>

namespace rmfem {

int tet_edge_of_pair(int a, int b) {
  if (a > b) std::swap(a, b);
  static constexpr int table[4][4] = {
      {-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
  return table[a][b];
}

int tet_face_opposite(int missing) { return 3 - missing; }

namespace {

struct Counts {
  int per_vertex = 0, per_edge = 0, per_face = 0, per_cell = 0;
};

// Mark the vertices, edges and the face of every boundary facet.
void mark_boundary_entities(const Mesh& mesh, std::vector<char>& bvert,
                            std::vector<char>& bedge, std::vector<char>& bface) {
  bvert.assign(mesh.vertices.size(), 0);
  bedge.assign(mesh.edges.size(), 0);
  bface.assign(mesh.faces.size(), 0);
  for (const BoundaryFacet& bf : mesh.boundary_facets) {
    bface[bf.face] = 1;
    const auto& fv = mesh.faces[bf.face];
    const int nfv = fv[3] < 0 ? 3 : 4;
    for (int k = 0; k < nfv; ++k) bvert[fv[k]] = 1;
    const int c = mesh.face_cells[bf.face][0];
    for (int e = 0; e < mesh.edges_per_cell(); ++e) {
      const int ge = mesh.cell_edge(c)[e];
      const auto& ev = mesh.edges[ge];
      bool in_face = true;
      for (int end = 0; end < 2; ++end) {
        bool found = false;
        for (int k = 0; k < nfv; ++k) found |= (fv[k] == ev[end]);
        in_face &= found;
      }
      if (in_face) bedge[ge] = 1;
    }
  }
}

DofMap number_dofs(const Mesh& mesh, const Counts& cnt, int fn_count,
                   const std::vector<Polytope>& fn_kind,
                   const std::vector<int>& fn_entity,
                   const std::vector<int>& fn_comp,
                   const std::vector<char>& fn_hcurl, bool sorted_slots) {
  DofMap dm;
  dm.fn_count = fn_count;
  const long nv = static_cast<long>(mesh.vertices.size());
  const long ne = static_cast<long>(mesh.edges.size());
  const long nf = static_cast<long>(mesh.faces.size());
  const long nc = mesh.num_cells();
  const long edge_off = nv * cnt.per_vertex;
  const long face_off = edge_off + ne * cnt.per_edge;
  const long cell_off = face_off + nf * cnt.per_face;
  dm.n = static_cast<int>(cell_off + nc * cnt.per_cell);
  dm.cell_dofs.assign(nc * fn_count, -1);

  const bool tet = mesh.cell_type == CellType::Tet;
  const int vpc = mesh.verts_per_cell();
  for (int c = 0; c < nc; ++c) {
    const int* cv = mesh.cell(c);
    std::array<int, 8> perm{0, 1, 2, 3, 4, 5, 6, 7};
    if (sorted_slots)
      std::sort(perm.begin(), perm.begin() + vpc,
                [cv](int a, int b) { return cv[a] < cv[b]; });
    for (int l = 0; l < fn_count; ++l) {
      long d = -1;
      switch (fn_kind[l]) {
        case Polytope::Vertex:
          d = static_cast<long>(cv[perm[fn_entity[l]]]) * cnt.per_vertex + fn_comp[l];
          break;
        case Polytope::Edge: {
          int ge;
          if (tet) {
            const int sa = perm[kTetEdges[fn_entity[l]][0]];
            const int sb = perm[kTetEdges[fn_entity[l]][1]];
            ge = mesh.cell_edge(c)[tet_edge_of_pair(sa, sb)];
          } else {
            ge = mesh.cell_edge(c)[fn_entity[l]];
          }
          d = edge_off + static_cast<long>(ge) * cnt.per_edge + fn_comp[l];
          break;
        }
        case Polytope::Face: {
          const auto& fs = kTetFaces[fn_entity[l]];
          const int missing = perm[6 - fs[0] - fs[1] - fs[2]];
          const int gf = mesh.cell_face(c)[tet_face_opposite(missing)];
          d = face_off + static_cast<long>(gf) * cnt.per_face + fn_comp[l];
          break;
        }
        case Polytope::Cell:
          d = cell_off + static_cast<long>(c) * cnt.per_cell + fn_comp[l];
          break;
      }
      dm.cell_dofs[static_cast<long>(c) * fn_count + l] = static_cast<int>(d);
    }
  }

  // Per-dof boundary/trace flags.
  std::vector<char> bvert, bedge, bface;
  mark_boundary_entities(mesh, bvert, bedge, bface);
  dm.boundary_entity.assign(dm.n, 0);
  dm.hcurl.assign(dm.n, 0);
  for (long v = 0; v < nv; ++v)
    for (int k = 0; k < cnt.per_vertex; ++k)
      dm.boundary_entity[v * cnt.per_vertex + k] = bvert[v];
  for (long e = 0; e < ne; ++e)
    for (int k = 0; k < cnt.per_edge; ++k)
      dm.boundary_entity[edge_off + e * cnt.per_edge + k] = bedge[e];
  for (long f = 0; f < nf; ++f)
    for (int k = 0; k < cnt.per_face; ++k)
      dm.boundary_entity[face_off + f * cnt.per_face + k] = bface[f];
  for (int c = 0; c < nc; ++c)
    for (int l = 0; l < fn_count; ++l)
      if (fn_hcurl[l]) dm.hcurl[dm.dof(c, l)] = 1;
  return dm;
}

}  // namespace

DofMap build_dofmap(const ElementBasis& eb, const Mesh& mesh) {
  if (eb.cell_type != mesh.cell_type)
    throw std::runtime_error("build_dofmap: element/mesh cell type mismatch");
  Counts cnt{eb.per_vertex, eb.per_edge, eb.per_face, eb.per_cell};
  std::vector<Polytope> kind;
  std::vector<int> entity, comp;
  std::vector<char> hc;
  for (const ShapeFn& f : eb.fns) {
    kind.push_back(f.entity_kind);
    entity.push_back(f.entity);
    comp.push_back(f.comp);
    hc.push_back(f.hcurl ? 1 : 0);
  }
  const bool sorted = eb.cell_type == CellType::Tet;
  return number_dofs(mesh, cnt, eb.size(), kind, entity, comp, hc, sorted);
}

DofMap build_scalar_dofmap(const ScalarTetBasis& basis, const Mesh& mesh) {
  if (mesh.cell_type != CellType::Tet)
    throw std::runtime_error("build_scalar_dofmap: tetrahedral meshes only");
  Counts cnt;
  std::vector<Polytope> kind;
  std::vector<int> entity, comp;
  std::vector<char> hc(basis.size(), 1);
  // Component index = occurrence count within the entity block; the basis
  // enumerates entity kernels in a fixed order shared by all cells.
  std::array<int, 4> vseen{};
  std::array<int, 6> eseen{};
  std::array<int, 4> fseen{};
  int cseen = 0;
  for (const ScalarFn& f : basis.fns) {
    kind.push_back(f.kind);
    entity.push_back(f.kind == Polytope::Cell ? 0 : f.entity);
    switch (f.kind) {
      case Polytope::Vertex: comp.push_back(vseen[f.entity]++); break;
      case Polytope::Edge: comp.push_back(eseen[f.entity]++); break;
      case Polytope::Face: comp.push_back(fseen[f.entity]++); break;
      case Polytope::Cell: comp.push_back(cseen++); break;
    }
  }
  cnt.per_vertex = vseen[0];
  cnt.per_edge = eseen[0];
  cnt.per_face = fseen[0];
  cnt.per_cell = cseen;
  return number_dofs(mesh, cnt, basis.size(), kind, entity, comp, hc, true);
}

}  // namespace rmfem
