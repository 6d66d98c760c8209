#ifndef RMFEM_ELEMENTS_HPP
#define RMFEM_ELEMENTS_HPP

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rmfem/mesh.hpp"
#include "rmfem/scalar_basis.hpp"
#include "rmfem/tensor3.hpp"

// Matrix-valued H(sym Curl) finite elements on tetrahedra and axis-aligned
// hexahedra, plus the Lagrange/deviatoric comparison elements.
//
// Tetrahedral zoo (dimensions):
//   NedelecI0   [N_I^0]^3          18   rows of lowest-order Nedelec
//   NedelecII1  [N_II^1]^3         36   rows of full linear Nedelec
//   Y0 / S0                    21 / 27   + volumetric identity fields
//   Y1 / S1                    42 / 52
//   Y2 / M2                   100 / 90   general order p = 2 (M = reduced)
//   Y3 / M3                   195 / 180  general order p = 3
//   L1Mat       [L^1]^{3x3}        36   vertex Lagrange, full matrix
//   D1          dev-linear         36   sl(3) vertex block + cell identities
//   HexS0       hexahedral S0      48
//
// Shape functions attach to mesh polytopes through the cell's vertex slots
// sorted by global vertex id. Edge tangents, face normals and the edge-face
// vector pairs are computed from global vertex positions, so two cells sharing
// a facet produce identical tangential traces (the conformity tests check the
// jump of P x n and of sym(P x n) across shared facets to machine precision).

namespace rmfem {

enum class ElementKind {
  NedelecI0,
  NedelecII1,
  Y0,
  S0,
  Y1,
  S1,
  Y2,
  M2,
  Y3,
  M3,
  HexS0,
  L1Mat,
  D1,
};

struct ShapeFn {
  Polytope entity_kind = Polytope::Cell;
  int entity = 0;  // local (sorted-slot) vertex/edge/face index, 0 for cell
  int comp = 0;    // position within the entity's dof block
  bool hcurl = true;  // full tangential-trace conformity (identity blocks: false)
};

struct ElementBasis {
  ElementKind kind = ElementKind::Y0;
  CellType cell_type = CellType::Tet;
  int order = 0;   // template order p where applicable
  int degree = 1;  // max total polynomial degree of the shape functions
  int per_vertex = 0, per_edge = 0, per_face = 0, per_cell = 0;
  std::vector<ShapeFn> fns;

  int size() const { return static_cast<int>(fns.size()); }
};

// Cached immutable registry entry.
const ElementBasis& element(ElementKind kind);

std::string element_name(ElementKind kind);
std::optional<ElementKind> parse_element(std::string_view name);
const std::vector<ElementKind>& all_element_kinds();

// Branch-free orthogonal companion pair of a tangent: d2 perpendicular to t
// with |t| <= |d2| <= sqrt(2)|t| (signs resolve ties with sgn(0) = +1),
// d1 = d2 x t.
void orthogonal_pair(const Vec3& t, Vec3& d1, Vec3& d2);

// Geometric frame of a tet cell over its sorted vertex slots: edge tangents
// with their companion pairs, face normals (twice-area weighted), and the
// edge-face vector k with cotangent m = (|n|^2 I - n n^T) k per face edge.
// On a shared facet of two cells t, m, n agree and the k's have equal
// tangential projection.
struct TemplateFrame {
  std::array<int, 4> sorted_to_storage{};   // slot s -> storage slot
  std::array<int, 4> sorted_vertices{};     // slot s -> global vertex id
  std::array<Vec3, 4> vertex{};             // coordinates by sorted slot
  std::array<Vec3, 6> t{}, d1{}, d2{};      // by sorted edge (kTetEdges)
  std::array<Vec3, 4> normal{};             // by sorted face (kTetFaces)
  std::array<std::array<Vec3, 3>, 4> k{};   // [face][edge-in-face]
  std::array<std::array<Vec3, 3>, 4> m{};
};

TemplateFrame template_frame(const Mesh& mesh, int cell);

// Per-cell evaluator: values and symmetric row-curls of every shape function
// at reference points of the cell.
class CellBasis {
 public:
  CellBasis(const ElementBasis& eb, const Mesh& mesh, int cell);

  int size() const { return eb_->size(); }
  const ElementBasis& basis() const { return *eb_; }
  const ElementMap& map() const { return map_; }
  const TemplateFrame& frame() const { return frame_; }

  // value/symcurl are arrays of size() entries.
  void eval(const Vec3& xi, Mat3* value, Mat3* symcurl) const;

 private:
  void eval_tet(const Vec3& xi, Mat3* value, Mat3* symcurl) const;
  void eval_hex(const Vec3& xi, Mat3* value, Mat3* symcurl) const;

  const ElementBasis* eb_;
  ElementMap map_;
  TemplateFrame frame_;                  // tet only
  std::array<Vec3, 4> grad_lam_{};       // physical barycentric gradients, sorted slots
  std::array<Vec3, 6> whitney_curl_{};   // 2 grad(lam_a) x grad(lam_b) per sorted edge
  std::array<Mat3, 12> hex_edge_mat_{};   // transformed mu x tau edge templates
  std::array<Mat3, 12> hex_edge_pair_{};  // transformed nu x tau edge templates
  std::array<double, 3> hex_h_{};         // cell spacings
};

}  // namespace rmfem

#endif
