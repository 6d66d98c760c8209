#ifndef RMFEM_SEQUENCE_HPP
#define RMFEM_SEQUENCE_HPP

#include <string>
#include <vector>

#include "rmfem/elements.hpp"
#include "rmfem/mesh.hpp"

// Numerical probes of the discrete sequence structure: the sym-Curl rank of
// every element space, membership of the predicted kernel blocks (deviatoric
// gradients of the scalar space one order up, polynomial identity fields),
// exclusion of the identity block one degree beyond, and the linear
// dependence of stacked spans. Everything is tabulated on a single cell with
// quadrature weights folded in, so Euclidean operations on the tabulation
// are L2 operations on the cell.

namespace rmfem {

// Tabulated span: column c holds one function sampled at all quadrature
// points (9 matrix entries per point), each sample scaled by sqrt(w detJ),
// so dot(column_i, column_j) is the L2(cell) inner product.
struct SpanTab {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;  // column-major, a[r + rows * c]

  double* col(int c) { return a.data() + static_cast<long>(rows) * c; }
  const double* col(int c) const { return a.data() + static_cast<long>(rows) * c; }
  void append(const SpanTab& other);
};

// Shape-function values and sym-Curls of an element on one cell; sym-Curl
// columns are scaled by the reciprocal L2 norm of the corresponding value
// column (unit-norm functions), value columns are scaled the same way.
struct ElementTab {
  SpanTab value;
  SpanTab symcurl;
};
ElementTab tabulate_element(const Mesh& mesh, int cell, ElementKind kind,
                            int degree);

// Monomial-built auxiliary spans in physical coordinates.
// dev(e_r x grad q) for all monomials q with total degree in [lo, hi].
SpanTab tabulate_dev_gradients(const Mesh& mesh, int cell, int lo, int hi,
                               int degree);
// q * Identity for all monomials q with total degree in [lo, hi].
SpanTab tabulate_identities(const Mesh& mesh, int cell, int lo, int hi,
                            int degree);
// e_i x e_j * q for all monomials q of total degree <= order (the full
// matrix-valued polynomial space of that order).
SpanTab tabulate_matrix_polynomials(const Mesh& mesh, int cell, int order,
                                    int degree);

// Numerical rank with the relative singular-value threshold 1e-9 after
// scaling every column to unit norm.
int span_rank(const SpanTab& tab);

struct RankResult {
  int rank = 0;
  int kernel = 0;
};

// Rank/kernel split of sym Curl on the element space over the given cell:
// SVD of the weighted sym-Curl tabulation of unit-L2-norm shape functions,
// singular values below 1e-9 * sigma_max counted as kernel.
RankResult symcurl_rank(const Mesh& mesh, int cell, ElementKind kind);

// Max L2 residual of projecting each unit-normalised column of span_a onto
// the column space of span_b (0 = contained, 1 = orthogonal).
double subspace_inclusion(const SpanTab& span_a, const SpanTab& span_b);

struct SequenceReport {
  ElementKind kind = ElementKind::Y0;
  int dim = 0;
  int rank = 0;
  int kernel = 0;
  int expected_rank = -1;    // -1: no frozen prediction
  int expected_kernel = -1;
  bool mapped_cell_consistent = false;  // same split on a mapped cell
  double dev_grad_residual = -1.0;      // deviatoric gradient block inside span
  double identity_residual = -1.0;      // identity block inside span
  double excluded_identity_residual = -1.0;  // next identity block stays out
  double identity_symcurl_norm = -1.0;  // max |sym Curl| over identity block
  bool pass = false;
};

SequenceReport sequence_report(ElementKind kind);
std::vector<SequenceReport> run_sequence_lab();

// Rank deficiency of the stacked span (lowest-order full element) union
// (deviatoric gradients of the quadratic scalar bubbles): the stacked sum is
// linearly dependent.
struct StackReport {
  int dim = 0;
  int rank = 0;
  int deficiency = 0;
};
StackReport stacked_dependence_report();

std::string sequence_json(const std::vector<SequenceReport>& reports,
                          const StackReport& stack);

}  // namespace rmfem

#endif
