#ifndef RMFEM_SCALAR_BASIS_HPP
#define RMFEM_SCALAR_BASIS_HPP

#include <vector>

#include "rmfem/tensor3.hpp"

// Hierarchical H1 basis U^p on the reference tetrahedron, organised by
// polytope blocks: 4 vertex hats, p-1 kernels per edge, (p-2)(p-1)/2 per face
// and (p-3)(p-2)(p-1)/6 interior bubbles. Edge/face kernels are scaled
// (integrated) Legendre polynomials in barycentric pairs, evaluated on the
// cell's vertex slots sorted by global id so that two cells sharing an edge or
// face produce identical functions. Plus trilinear Q1 hats for hexahedra.

namespace rmfem {

enum class Polytope { Vertex, Edge, Face, Cell };

// Kernel value with partials wrt the two scaled-Legendre arguments.
struct Kernel {
  double v = 0.0, dx = 0.0, dt = 0.0;
};

// Scaled Legendre P_k^S(x,t) = t^k P_k(x/t), a polynomial in (x,t).
Kernel scaled_legendre(int k, double x, double t);
// Scaled integrated Legendre L_k^S (k >= 2), vanishing at x = +-t;
// L_2^S(x,t) = (x^2 - t^2)/2 = -2 lam_a lam_b on an edge.
Kernel scaled_int_legendre(int k, double x, double t);

struct ScalarFn {
  Polytope kind = Polytope::Vertex;
  int entity = 0;  // vertex slot, edge index into kTetEdges, or face index
  int i = 0, j = 0, k = 0;
};

struct ScalarTetBasis {
  int order = 1;
  std::vector<ScalarFn> fns;

  int size() const { return static_cast<int>(fns.size()); }
  // Value at barycentrics lam[0..3] (slots sorted by global vertex id).
  double eval(int fn, const double lam[4]) const;
  // Value plus partial derivatives wrt the four barycentrics.
  double eval_grad(int fn, const double lam[4], double dlam[4]) const;
};

// U^p basis, p in [1,5].
ScalarTetBasis up_basis(int p);

// Barycentrics of the reference tet and their (constant) reference gradients;
// slot order (1-xi-eta-zeta, zeta, eta, xi) matching the vertex slots
// (0,0,0), (0,0,1), (0,1,0), (1,0,0).
void tet_barycentric(const Vec3& xi, double lam[4], Vec3 grad[4]);

// Trilinear hat functions of [0,1]^3 in the grid vertex order of hex cells.
void hex_q1(const Vec3& xi, double val[8], Vec3 grad[8]);

}  // namespace rmfem

#endif
