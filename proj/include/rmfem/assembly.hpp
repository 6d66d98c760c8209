#ifndef RMFEM_ASSEMBLY_HPP
#define RMFEM_ASSEMBLY_HPP

#include <array>
#include <functional>
#include <vector>

#include "rmfem/dofmap.hpp"
#include "rmfem/elements.hpp"
#include "rmfem/mesh.hpp"
#include "rmfem/quadrature.hpp"
#include "rmfem/solver.hpp"

// Global assembly: the H(sym Curl) best-approximation problem driving the
// convergence benchmarks, and the two-field relaxed micromorphic model of the
// dilatation study. Local matrices are cached per cell class (Jacobian bits,
// vertex-rank permutation, region), which collapses the cost on uniform box
// meshes to a handful of dense computations.
//
// Essential boundary data is imposed by an L2 least-squares fit of the facet
// trace over all boundary facets at once (facet-Gram system solved by CG):
// the tangential trace P x n for elements whose shared blocks are H(Curl)-
// conforming, the symmetrised trace sym(P x n) for the deviatoric element,
// and plain values for the displacement. Identity cell dofs carry no trace
// and are never constrained. Constrained rows/columns are eliminated
// symmetrically; the stored solution keeps the boundary values.

namespace rmfem {

enum class BcMode { Coupling, Neumann, Dirichlet };

using MatrixField = std::function<Mat3(const Vec3&)>;
using VectorField = std::function<Vec3(const Vec3&)>;

struct EssentialBc {
  std::vector<char> constrained;  // per dof
  std::vector<double> value;      // boundary value where constrained, else 0
  long count() const;
};

// Least-squares facet fit of the tangential trace of `target` over all
// boundary hcurl dofs. sym_trace selects sym(P x n) matching (deviatoric
// element); otherwise the full P x n is fitted.
EssentialBc fit_tangential_trace(const Mesh& mesh, const ElementBasis& eb,
                                 const DofMap& dm, const MatrixField& target,
                                 bool sym_trace, double tol = 1e-12);

// Least-squares facet fit of displacement values (per scalar dof, one value
// per vector component: dof layout 3*scalar + comp).
EssentialBc fit_displacement_trace(const Mesh& mesh, const ScalarTetBasis& basis,
                                   const DofMap& dm, const VectorField& target,
                                   double tol = 1e-12);

struct SolveStats {
  long cg_iters = 0;
  double cg_residual = 0.0;
  int free_dofs = 0;
  int total_dofs = 0;
};

struct ProjectionOptions {
  BcMode bc = BcMode::Coupling;
  double rel_tol = 1e-10;
  bool condense = false;
  int threads = 1;
};

struct ProjectionSolution {
  DofMap dm;
  std::vector<double> coeff;
  SolveStats stats;
};

// Best approximation of `target` in the element space under the inner
// product <P,Q> + <sym Curl P, sym Curl Q>; with target in the kernel of
// sym Curl this is the H(sym Curl) projection of the benchmark fields.
ProjectionSolution solve_projection(const Mesh& mesh, ElementKind kind,
                                    const MatrixField& target,
                                    const ProjectionOptions& opts = {});

// Relative L2 distance of the discrete field to the target.
double projection_rel_error(const Mesh& mesh, ElementKind kind,
                            const std::vector<double>& coeff,
                            const MatrixField& target);

// Max pointwise facet-trace mismatch |(P_h - target) x n| over boundary
// facet quadrature points (sym_trace: symmetrised form).
double boundary_trace_error(const Mesh& mesh, ElementKind kind,
                            const std::vector<double>& coeff,
                            const MatrixField& target, bool sym_trace);

// Max tangential-trace jump of shared (non-identity) basis functions across
// interior facets; the conformity measure of the element on a mesh.
double max_facet_trace_jump(const Mesh& mesh, ElementKind kind, bool sym_trace);

// ---------------------------------------------------------------------------
// Relaxed micromorphic two-field model
// ---------------------------------------------------------------------------

struct RmmMaterial {
  IsotropicTensor4 elastic;  // C_e, meso scale
  IsotropicTensor4 micro;    // C_micro
  double mu_c = 0.0;         // rotational coupling modulus
  double mu_macro = 0.0;     // curvature weight mu_macro * L_c^2
  double lc = 0.0;
};

struct RmmProblem {
  const Mesh* mesh = nullptr;
  std::vector<int> region;         // per cell, indexes into mat
  std::array<RmmMaterial, 2> mat;  // 0 = outer, 1 = inner
  int disp_order = 1;              // displacement space U^p
  ElementKind micro = ElementKind::S0;
  BcMode bc = BcMode::Coupling;
  VectorField boundary_u;          // Dirichlet displacement data
  MatrixField boundary_du;         // trace target for P (coupling/dirichlet)
  double rel_tol = 1e-10;
  bool condense = false;
  int threads = 1;
};

struct RmmSolution {
  DofMap u_dm;              // scalar displacement dofs (x3 components)
  DofMap p_dm;
  std::vector<double> u;    // 3 * scalar dofs
  std::vector<double> p;
  double energy = 0.0;
  SolveStats stats;
};

// Minimise the two-phase quadratic energy
//   I(u,P) = 1/2 int < C_e sym(Du-P), sym(Du-P) > + 2 mu_c |skw(Du-P)|^2
//          + < C_micro sym P, sym P > + mu_macro lc^2 |sym Curl P|^2
// with Dirichlet displacement data on the whole boundary and the micro
// distortion coupled (trace of D u_bc), free (Neumann) or fully prescribed
// (Dirichlet) according to bc.
RmmSolution solve_rmm(const RmmProblem& prob);

}  // namespace rmfem

#endif
