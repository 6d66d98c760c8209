#ifndef RMFEM_QUADRATURE_HPP
#define RMFEM_QUADRATURE_HPP

#include <vector>

#include "rmfem/tensor3.hpp"

// Quadrature on the reference tetrahedron {xi+eta+zeta <= 1, xi,eta,zeta >= 0},
// the reference triangle and the reference cube [0,1]^3. Tet and triangle rules
// are conical products of Gauss-Jacobi lines (Duffy collapse with the collapse
// Jacobian absorbed into the Jacobi weight), cube rules are tensor
// Gauss-Legendre. A rule of requested degree d integrates all polynomials of
// total degree <= d exactly.

namespace rmfem {

struct QuadRule {
  std::vector<Vec3> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

// 1d Gauss-Legendre on [0,1], n points (degree 2n-1).
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);
// 1d Gauss-Jacobi on [0,1] with weight (1-x)^alpha, n points.
void gauss_jacobi(int n, int alpha, std::vector<double>& x, std::vector<double>& w);

// Reference tetrahedron, sum of weights 1/6. Supported degree 0..20.
QuadRule tet_rule(int degree);
// Reference triangle {xi+eta <= 1}, sum of weights 1/2 (z-component unused).
QuadRule tri_rule(int degree);
// Reference cube [0,1]^3, sum of weights 1.
QuadRule hex_rule(int degree);

}  // namespace rmfem

#endif
