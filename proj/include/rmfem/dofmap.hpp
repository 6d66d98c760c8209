#ifndef RMFEM_DOFMAP_HPP
#define RMFEM_DOFMAP_HPP

#include <vector>

#include "rmfem/elements.hpp"
#include "rmfem/mesh.hpp"
#include "rmfem/scalar_basis.hpp"

// Global degree-of-freedom numbering for the matrix-valued elements and for
// the scalar H1 spaces (used vector-valued for the displacement). Shared
// entities are addressed through global mesh ids and the within-entity
// component index; because all shape functions are built over vertex slots
// sorted by global id, two cells meeting at an entity agree on both the
// function and its component slot, so no orientation signs are needed.

namespace rmfem {

struct DofMap {
  int n = 0;
  int fn_count = 0;  // local functions per cell
  std::vector<int> cell_dofs;         // num_cells x fn_count
  std::vector<char> boundary_entity;  // per dof: attached to a boundary entity
  std::vector<char> hcurl;            // per dof: carries a tangential trace

  int dof(int cell, int local) const {
    return cell_dofs[static_cast<long>(cell) * fn_count + local];
  }
  const int* dofs(int cell) const {
    return cell_dofs.data() + static_cast<long>(cell) * fn_count;
  }
};

// Tensor-element dof map. Numbering: vertex blocks, then edge, face, cell.
DofMap build_dofmap(const ElementBasis& eb, const Mesh& mesh);

// Scalar H1 dof map for the displacement space (one dof per scalar function;
// the vector-valued field uses 3*dof + component).
DofMap build_scalar_dofmap(const ScalarTetBasis& basis, const Mesh& mesh);

// The local edge index of a sorted tet slot pair.
int tet_edge_of_pair(int a, int b);
// Storage-slot face index of the tet face opposite storage slot `missing`.
int tet_face_opposite(int missing);

}  // namespace rmfem

#endif
