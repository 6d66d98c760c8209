#include "rmfem/solver.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rmfem {

void CsrMatrix::matvec(const double* x, double* y) const {
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (long k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
    y[i] = s;
  }
}

double CsrMatrix::diag(int i) const {
  for (long k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
    if (col[k] == i) return val[k];
  return 0.0;
}

CgResult cg_solve(const CsrMatrix& a, const std::vector<double>& b,
                  std::vector<double>& x, const CgOptions& opts) {
  const int n = a.n;
  if (static_cast<int>(b.size()) != n)
    throw std::invalid_argument("cg_solve: dimension mismatch");
  x.resize(n, 0.0);
  CgResult res;

  const double bnorm = std::sqrt(std::inner_product(b.begin(), b.end(), b.begin(), 0.0));
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    res.converged = true;
    return res;
  }
  const double tol_abs = opts.rel_tol * bnorm;

  std::vector<double> precond(n);
  for (int i = 0; i < n; ++i) {
    const double d = a.diag(i);
    precond[i] = d > 0.0 ? 1.0 / d : 1.0;
  }

  std::vector<double> r(n), z(n), p(n), ap(n);
  a.matvec(x.data(), ap.data());
  for (int i = 0; i < n; ++i) r[i] = b[i] - ap[i];
  for (int i = 0; i < n; ++i) z[i] = precond[i] * r[i];
  p = z;
  double rz = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
  double rnorm = std::sqrt(std::inner_product(r.begin(), r.end(), r.begin(), 0.0));

  const long max_iters = opts.max_iters > 0 ? opts.max_iters : 10L * n;
  bool range_exhausted = false;
  while (rnorm > tol_abs && res.iters < max_iters) {
    a.matvec(p.data(), ap.data());
    const double pap = std::inner_product(p.begin(), p.end(), ap.begin(), 0.0);
    if (pap <= 0.0) {
      // Semi-definite Gram systems can exhaust their range; accept if the
      // residual has already dropped far below the data, else report the
      // failing direction.
      if (rnorm <= 1e3 * tol_abs) {
        range_exhausted = true;
        break;
      }
      throw std::runtime_error(
          "cg_solve: non-positive curvature p^T A p = " + std::to_string(pap) +
          " at iteration " + std::to_string(res.iters) +
          " (matrix not positive definite)");
    }
    const double alpha = rz / pap;
    for (int i = 0; i < n; ++i) x[i] += alpha * p[i];
    for (int i = 0; i < n; ++i) r[i] -= alpha * ap[i];
    ++res.iters;
    if (opts.on_iterate) opts.on_iterate(x);
    for (int i = 0; i < n; ++i) z[i] = precond[i] * r[i];
    const double rz_next = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    rnorm = std::sqrt(std::inner_product(r.begin(), r.end(), r.begin(), 0.0));
  }
  res.rel_residual = rnorm / bnorm;
  res.converged = rnorm <= tol_abs || range_exhausted;
  return res;
}

std::vector<double> dense_solve(const std::vector<double>& a,
                                const std::vector<double>& b) {
  const int n = static_cast<int>(b.size());
  if (static_cast<long>(a.size()) != static_cast<long>(n) * n)
    throw std::invalid_argument("dense_solve: matrix/vector size mismatch");
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = a[static_cast<long>(i) * n + j];
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) rhs(i) = b[i];

  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  Eigen::VectorXd x = ldlt.solve(rhs);
  const double scale = A.norm() * x.norm() + rhs.norm();
  const double resid = (A * x - rhs).norm();
  if (!x.allFinite() || (scale > 0.0 && resid > 1e-8 * scale))
    throw std::runtime_error("dense_solve: singular or inconsistent system (residual " +
                             std::to_string(resid) + ")");
  return std::vector<double>(x.data(), x.data() + n);
}

}  // namespace rmfem
