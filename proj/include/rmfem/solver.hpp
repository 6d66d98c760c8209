#ifndef RMFEM_SOLVER_HPP
#define RMFEM_SOLVER_HPP

#include <functional>
#include <vector>

// Sparse CSR storage, Jacobi-preconditioned conjugate gradients for the SPD
// systems produced by the assembly, and a dense fallback for small
// saddle-free problems and least-squares Gram systems in tests.

namespace rmfem {

struct CsrMatrix {
  int n = 0;
  std::vector<long> row_ptr;  // n + 1
  std::vector<int> col;
  std::vector<double> val;

  long nnz() const { return static_cast<long>(col.size()); }
  // y = A x
  void matvec(const double* x, double* y) const;
  double diag(int i) const;
};

struct CgOptions {
  double rel_tol = 1e-10;
  long max_iters = 0;  // 0: 10 * n
  // Called with the current iterate after each update; used by tests to
  // check energy-norm monotonicity.
  std::function<void(const std::vector<double>&)> on_iterate;
};

struct CgResult {
  long iters = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

// Solve A x = b for symmetric positive (semi-)definite A. x is both the
// initial guess and the result. Throws if a search direction has
// non-positive curvature p^T A p while the residual is still above
// tolerance (operator not positive definite).
CgResult cg_solve(const CsrMatrix& a, const std::vector<double>& b,
                  std::vector<double>& x, const CgOptions& opts = {});

// Dense symmetric solve (LDLT). a is n x n row-major. Throws on singular or
// badly inconsistent systems (residual check).
std::vector<double> dense_solve(const std::vector<double>& a,
                                const std::vector<double>& b);

}  // namespace rmfem

#endif
