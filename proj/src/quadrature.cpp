#include "rmfem/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace rmfem {

namespace {

constexpr int kMaxDegree = 20;

int points_for_degree(int degree) {
  if (degree < 0 || degree > kMaxDegree)
    throw std::invalid_argument("quadrature degree must be in [0,20], got " +
                                std::to_string(degree));
  return degree / 2 + 1;
}

// Golub-Welsch for the Jacobi weight (1-x)^alpha (1+x)^0 on [-1,1], then
// mapped to [0,1] with the weight normalisation absorbed.
void jacobi_rule_01(int n, int alpha, std::vector<double>& x, std::vector<double>& w) {
  const double a = alpha, b = 0.0;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double kk = k;
    const double den = (2 * kk + a + b) * (2 * kk + a + b + 2);
    jac(k, k) = (den == 0.0) ? 0.0 : (b * b - a * a) / den;
    if (k + 1 < n) {
      const double k1 = kk + 1;
      double num = 4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + a + b);
      double d = (2 * k1 + a + b - 1) * (2 * k1 + a + b) * (2 * k1 + a + b) * (2 * k1 + a + b + 1);
      double off = std::sqrt(num / d);
      jac(k, k + 1) = off;
      jac(k + 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  if (es.info() != Eigen::Success) throw std::runtime_error("jacobi rule eigensolve failed");

  // mu0 = int_{-1}^{1} (1-x)^a dx = 2^{a+1} / (a+1)
  const double mu0 = std::pow(2.0, a + 1.0) / (a + 1.0);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    const double xi = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    x[i] = 0.5 * (1.0 + xi);                            // map to [0,1]
    w[i] = mu0 * v0 * v0 / std::pow(2.0, a + 1.0);      // includes dx scaling and (1-x)^a rescale
  }
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
  jacobi_rule_01(n, 0, x, w);
}

void gauss_jacobi(int n, int alpha, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi needs n >= 1");
  if (alpha < 0) throw std::invalid_argument("gauss_jacobi needs alpha >= 0");
  jacobi_rule_01(n, alpha, x, w);
}

QuadRule tet_rule(int degree) {
  const int n = points_for_degree(degree);
  std::vector<double> xu, wu, xv, wv, xw, ww;
  gauss_jacobi(n, 2, xu, wu);   // weight (1-u)^2
  gauss_jacobi(n, 1, xv, wv);   // weight (1-v)
  gauss_legendre(n, xw, ww);

  // Duffy map: xi = u, eta = v (1-u), zeta = w (1-u)(1-v); the collapse
  // Jacobian (1-u)^2 (1-v) lives in the Jacobi weights.
  QuadRule rule;
  rule.points.reserve(n * n * n);
  rule.weights.reserve(n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double u = xu[i], v = xv[j], w = xw[k];
        rule.points.push_back({u, v * (1.0 - u), w * (1.0 - u) * (1.0 - v)});
        rule.weights.push_back(wu[i] * wv[j] * ww[k]);
      }
  return rule;
}

QuadRule tri_rule(int degree) {
  const int n = points_for_degree(degree);
  std::vector<double> xu, wu, xv, wv;
  gauss_jacobi(n, 1, xu, wu);
  gauss_legendre(n, xv, wv);

  QuadRule rule;
  rule.points.reserve(n * n);
  rule.weights.reserve(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double u = xu[i], v = xv[j];
      rule.points.push_back({u, v * (1.0 - u), 0.0});
      rule.weights.push_back(wu[i] * wv[j]);
    }
  return rule;
}

QuadRule hex_rule(int degree) {
  const int n = points_for_degree(degree);
  std::vector<double> x, w;
  gauss_legendre(n, x, w);

  QuadRule rule;
  rule.points.reserve(n * n * n);
  rule.weights.reserve(n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        rule.points.push_back({x[i], x[j], x[k]});
        rule.weights.push_back(w[i] * w[j] * w[k]);
      }
  return rule;
}

}  // namespace rmfem
