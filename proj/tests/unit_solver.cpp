#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "rmfem/solver.hpp"

using namespace rmfem;

namespace {

CsrMatrix dense_to_csr(int n, const std::vector<double>& a) {
  CsrMatrix m;
  m.n = n;
  m.row_ptr.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (a[i * n + j] == 0.0) continue;
      m.col.push_back(j);
      m.val.push_back(a[i * n + j]);
    }
    m.row_ptr[i + 1] = static_cast<long>(m.col.size());
  }
  return m;
}

// Tridiagonal SPD test matrix (diagonally dominant).
std::vector<double> tridiag(int n, double d, double o) {
  std::vector<double> a(static_cast<long>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    a[i * n + i] = d;
    if (i > 0) a[i * n + i - 1] = o;
    if (i + 1 < n) a[i * n + i + 1] = o;
  }
  return a;
}

}  // namespace

TEST_CASE("csr matvec and diagonal") {
  const CsrMatrix a = dense_to_csr(2, {4, 1, 1, 3});
  CHECK(a.nnz() == 4);
  const double x[2] = {1.0, 1.0};
  double y[2];
  a.matvec(x, y);
  CHECK(y[0] == 5.0);
  CHECK(y[1] == 4.0);
  CHECK(a.diag(0) == 4.0);
  CHECK(a.diag(1) == 3.0);
}

TEST_CASE("cg solves a small spd system exactly") {
  const CsrMatrix a = dense_to_csr(2, {4, 1, 1, 3});
  const std::vector<double> b = {1.0, 2.0};
  std::vector<double> x(2, 0.0);
  CgOptions opts;
  opts.rel_tol = 1e-14;
  const CgResult res = cg_solve(a, b, x, opts);
  CHECK(res.converged);
  CHECK(x[0] == doctest::Approx(1.0 / 11.0).epsilon(1e-12));
  CHECK(x[1] == doctest::Approx(7.0 / 11.0).epsilon(1e-12));
}

TEST_CASE("cg honours the initial guess") {
  const CsrMatrix a = dense_to_csr(2, {4, 1, 1, 3});
  const std::vector<double> b = {1.0, 2.0};
  std::vector<double> x = {1.0 / 11.0, 7.0 / 11.0};
  const CgResult res = cg_solve(a, b, x);
  CHECK(res.converged);
  CHECK(res.iters == 0);
}

TEST_CASE("cg reports non-convergence at an iteration cap") {
  const CsrMatrix a = dense_to_csr(2, {4, 1, 1, 3});
  const std::vector<double> b = {1.0, 2.0};
  std::vector<double> x(2, 0.0);
  CgOptions opts;
  opts.max_iters = 1;
  const CgResult res = cg_solve(a, b, x, opts);
  CHECK(!res.converged);
  CHECK(res.iters == 1);
  CHECK(res.rel_residual > 0.0);
}

TEST_CASE("cg handles a singular but consistent system") {
  // rank-1 matrix; the right-hand side lies in its range
  const CsrMatrix a = dense_to_csr(2, {1, -1, -1, 1});
  const std::vector<double> b = {1.0, -1.0};
  std::vector<double> x(2, 0.0);
  const CgResult res = cg_solve(a, b, x);
  CHECK(res.converged);
  double y[2];
  a.matvec(x.data(), y);
  CHECK(y[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(y[1] == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("cg energy decreases monotonically") {
  const int n = 40;
  const std::vector<double> dense = tridiag(n, 2.5, -1.0);
  const CsrMatrix a = dense_to_csr(n, dense);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> b(n);
  for (double& v : b) v = u(rng);

  auto energy = [&](const std::vector<double>& x) {
    std::vector<double> ax(n);
    a.matvec(x.data(), ax.data());
    double f = 0.0;
    for (int i = 0; i < n; ++i) f += 0.5 * x[i] * ax[i] - b[i] * x[i];
    return f;
  };

  double prev = 0.0;  // energy of the zero start
  int steps = 0;
  CgOptions opts;
  opts.rel_tol = 1e-12;
  opts.on_iterate = [&](const std::vector<double>& x) {
    const double f = energy(x);
    CHECK(f <= prev + 1e-12 * (1.0 + std::abs(prev)));
    prev = f;
    ++steps;
  };
  std::vector<double> x(n, 0.0);
  const CgResult res = cg_solve(a, b, x, opts);
  CHECK(res.converged);
  CHECK(steps == res.iters);

  // matches the dense reference
  const std::vector<double> ref = dense_solve(dense, b);
  for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(ref[i]).epsilon(1e-8));
}

TEST_CASE("dense solve handles an ill-conditioned system") {
  const int n = 6;
  std::vector<double> h(n * n);
  std::vector<double> b(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      h[i * n + j] = 1.0 / (i + j + 1);
      b[i] += h[i * n + j];
    }
  const std::vector<double> x = dense_solve(h, b);
  for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("dense solve rejects inconsistent singular systems") {
  CHECK_THROWS_AS(dense_solve({1, 2, 2, 4}, {1, 1}), std::runtime_error);
  CHECK_THROWS_AS(dense_solve({1, 2, 3}, {1, 1}), std::invalid_argument);
}
