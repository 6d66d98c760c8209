#ifndef RMFEM_BENCHMARK_HPP
#define RMFEM_BENCHMARK_HPP

#include <string>
#include <vector>

#include "rmfem/assembly.hpp"
#include "rmfem/mesh.hpp"

// Reproducible studies: four regularity benchmarks for the best-approximation
// problem on [-3,3]x[-1,1]^2 and the two-material dilatation experiment on
// [-2,2]^3. All reference fields lie in the kernel of sym Curl; B2-B4 are
// discontinuous across the planes x = +-1, which every level of the mesh
// schedule resolves exactly.

namespace rmfem {

enum class BenchField { B1, B2, B3, B4 };

// B1: sinh(x)/10 e1(x)e1                      (smooth)
// B2: cos(x) (e1+e2+e3)(x)e1 inside, sin(x) outside   (jumping normal trace)
// B3: 2 sin(x+2y-3z) I inside, sin(..) I outside      (jumping identity)
// B4: I inside, 0 outside                     (constant jumping identity)
// "inside" means |x-coordinate| < 1.
Mat3 eval_benchmark_field(BenchField f, const Vec3& x);
MatrixField benchmark_field(BenchField f);

const char* field_name(BenchField f);
BenchField parse_field(const std::string& name);  // throws std::invalid_argument

// Kuhn-split boxes; level k divides [-3,3]x[-1,1]^2 into (3,2,2)*(k+1) boxes
// (72*(k+1)^3 tets, anisotropic 2:1:1 cells) and [-2,2]^3 into (4,4,4)*2^k
// boxes (384*8^k tets). Both schedules keep the material interfaces
// facet-aligned on every level.
Mesh convergence_mesh(int level);
Mesh dilatation_mesh(int level);
std::vector<int> dilatation_region(const Mesh& mesh);  // 1 inside (-1,1)^3

struct ConvergenceLevel {
  int level = 0;
  int cells = 0;
  int dofs = 0;
  double rel_l2_error = 0.0;
  double eoc = 0.0;  // 3 log(e_prev/e) / log(N/N_prev); 0 on the first level
  SolveStats stats;
};

struct ConvergenceReport {
  ElementKind kind = ElementKind::Y0;
  BenchField field = BenchField::B1;
  std::vector<ConvergenceLevel> levels;
};

struct ConvergenceOptions {
  int levels = 4;
  BcMode bc = BcMode::Neumann;  // the study minimises over the full space
  double rel_tol = 1e-10;
  bool condense = false;
  int threads = 1;
};

// Per-level quasi-projection (by default unconstrained: no essential
// boundary data) followed by EOC extraction.
ConvergenceReport run_convergence(ElementKind kind, BenchField field,
                                  const ConvergenceOptions& opts = {});

std::string convergence_csv(const ConvergenceReport& rep);
std::string convergence_json(const ConvergenceReport& rep);

// Meso-scale moduli from macro and micro pairs: the shear and the
// dilatational quantity a = 2 mu + 3 lambda both follow the inverse rule
// a_e = a_micro a_macro / (a_micro - a_macro); lambda_e closes the pair.
struct MesoParams {
  double mu_e = 0.0;
  double lambda_e = 0.0;
};
MesoParams compute_meso_params(double mu_macro, double lambda_macro,
                               double mu_micro, double lambda_micro);

struct DilatationOptions {
  int disp_order = 1;
  ElementKind micro = ElementKind::S0;
  BcMode bc = BcMode::Coupling;
  int levels = 3;
  double rel_tol = 1e-10;
  bool condense = false;
  int threads = 1;
};

struct DilatationLevel {
  int level = 0;
  int cells = 0;
  int dofs = 0;
  double energy = 0.0;
  SolveStats stats;
};

struct DilatationReport {
  DilatationOptions opts;
  std::vector<DilatationLevel> levels;
};

// Stiff cubic inclusion (-1,1)^3 inside [-2,2]^3, loaded by the affine
// boundary displacement u = x/10 (boundary micro-distortion trace 0.1 I when
// coupled or prescribed). The problem carries the fixed moduli of the study:
// mu_macro 76.9, lambda_macro 115.4 (inner) / 11.54 (outer), micro pair
// (769, 1154), mu_c = 0, L_c = 1, with meso moduli from compute_meso_params.
RmmProblem dilatation_problem(const Mesh& mesh, const std::vector<int>& region,
                              const DilatationOptions& opts);
DilatationReport run_dilatation(const DilatationOptions& opts = {});

std::string dilatation_json(const DilatationReport& rep);

// Cell averages of tr P_h, the visualised quantity of the dilatation study.
std::vector<double> cell_average_trace(const Mesh& mesh, ElementKind kind,
                                       const DofMap& dm,
                                       const std::vector<double>& coeff);

}  // namespace rmfem

#endif
