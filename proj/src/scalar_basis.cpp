#include "rmfem/scalar_basis.hpp"

#include <stdexcept>
#include <string>

#include "rmfem/mesh.hpp"

namespace rmfem {

namespace {

constexpr int kMaxOrder = 5;

// Forward-mode recurrence for P_k^S(x,t): carries value and partials.
// P_0 = 1, P_1 = x, k P_k = (2k-1) x P_{k-1} - (k-1) t^2 P_{k-2}.
void scaled_legendre_all(int kmax, double x, double t, Kernel* out) {
  out[0] = {1.0, 0.0, 0.0};
  if (kmax >= 1) out[1] = {x, 1.0, 0.0};
  for (int k = 2; k <= kmax; ++k) {
    const Kernel& p1 = out[k - 1];
    const Kernel& p2 = out[k - 2];
    const double c1 = (2.0 * k - 1.0) / k, c2 = (k - 1.0) / k;
    Kernel r;
    r.v = c1 * x * p1.v - c2 * t * t * p2.v;
    r.dx = c1 * (p1.v + x * p1.dx) - c2 * t * t * p2.dx;
    r.dt = c1 * x * p1.dt - c2 * (2.0 * t * p2.v + t * t * p2.dt);
    out[k] = r;
  }
}

}  // namespace

Kernel scaled_legendre(int k, double x, double t) {
  if (k < 0 || k > kMaxOrder + 1)
    throw std::invalid_argument("scaled_legendre order out of range");
  Kernel buf[kMaxOrder + 2];
  scaled_legendre_all(k, x, t, buf);
  return buf[k];
}

Kernel scaled_int_legendre(int k, double x, double t) {
  if (k < 2 || k > kMaxOrder + 1)
    throw std::invalid_argument("scaled_int_legendre needs k in [2," +
                                std::to_string(kMaxOrder + 1) + "]");
  Kernel buf[kMaxOrder + 2];
  scaled_legendre_all(k, x, t, buf);
  const Kernel& pk = buf[k];
  const Kernel& pk2 = buf[k - 2];
  const double c = 1.0 / (2.0 * k - 1.0);
  Kernel r;
  r.v = c * (pk.v - t * t * pk2.v);
  r.dx = c * (pk.dx - t * t * pk2.dx);
  r.dt = c * (pk.dt - 2.0 * t * pk2.v - t * t * pk2.dt);
  return r;
}

double ScalarTetBasis::eval(int fn, const double lam[4]) const {
  double dlam[4];
  return eval_grad(fn, lam, dlam);
}

double ScalarTetBasis::eval_grad(int fn, const double lam[4], double dlam[4]) const {
  const ScalarFn& f = fns[fn];
  dlam[0] = dlam[1] = dlam[2] = dlam[3] = 0.0;
  switch (f.kind) {
    case Polytope::Vertex: {
      dlam[f.entity] = 1.0;
      return lam[f.entity];
    }
    case Polytope::Edge: {
      const int a = kTetEdges[f.entity][0], b = kTetEdges[f.entity][1];
      const Kernel ker = scaled_int_legendre(f.i, lam[b] - lam[a], lam[a] + lam[b]);
      dlam[a] = -ker.dx + ker.dt;
      dlam[b] = ker.dx + ker.dt;
      return ker.v;
    }
    case Polytope::Face: {
      const int a = kTetFaces[f.entity][0], b = kTetFaces[f.entity][1],
                c = kTetFaces[f.entity][2];
      const Kernel e = scaled_int_legendre(f.i, lam[b] - lam[a], lam[a] + lam[b]);
      const double w = lam[a] + lam[b] + lam[c];
      const Kernel q = scaled_legendre(f.j - 1, 2.0 * lam[c] - w, w);
      const double v = e.v * lam[c] * q.v;
      dlam[a] = (-e.dx + e.dt) * lam[c] * q.v + e.v * lam[c] * (-q.dx + q.dt);
      dlam[b] = (e.dx + e.dt) * lam[c] * q.v + e.v * lam[c] * (-q.dx + q.dt);
      dlam[c] = e.v * (q.v + lam[c] * (q.dx + q.dt));
      return v;
    }
    case Polytope::Cell: {
      const int e[4] = {1 + f.i, 1 + f.j, 1 + f.k,
                        1};  // exponents of lam0..lam3
      double v = 1.0;
      for (int s = 0; s < 4; ++s)
        for (int r = 0; r < e[s]; ++r) v *= lam[s];
      for (int s = 0; s < 4; ++s) {
        double d = e[s];
        for (int r = 0; r < 4; ++r) {
          const int pow = (r == s) ? e[r] - 1 : e[r];
          for (int q = 0; q < pow; ++q) d *= lam[r];
        }
        dlam[s] = d;
      }
      return v;
    }
  }
  return 0.0;
}

ScalarTetBasis up_basis(int p) {
  if (p < 1 || p > kMaxOrder)
    throw std::invalid_argument("up_basis order must be in [1," + std::to_string(kMaxOrder) +
                                "], got " + std::to_string(p));
  ScalarTetBasis basis;
  basis.order = p;
  for (int s = 0; s < 4; ++s) basis.fns.push_back({Polytope::Vertex, s});
  for (int e = 0; e < 6; ++e)
    for (int k = 2; k <= p; ++k) basis.fns.push_back({Polytope::Edge, e, k});
  for (int f = 0; f < 4; ++f)
    for (int i = 2; i <= p - 1; ++i)
      for (int j = 1; i + j <= p; ++j) basis.fns.push_back({Polytope::Face, f, i, j});
  for (int a = 0; a + 4 <= p; ++a)
    for (int b = 0; a + b + 4 <= p; ++b)
      for (int c = 0; a + b + c + 4 <= p; ++c)
        basis.fns.push_back({Polytope::Cell, 0, a, b, c});
  return basis;
}

void tet_barycentric(const Vec3& xi, double lam[4], Vec3 grad[4]) {
  lam[0] = 1.0 - xi.x - xi.y - xi.z;
  lam[1] = xi.z;
  lam[2] = xi.y;
  lam[3] = xi.x;
  grad[0] = {-1.0, -1.0, -1.0};
  grad[1] = {0.0, 0.0, 1.0};
  grad[2] = {0.0, 1.0, 0.0};
  grad[3] = {1.0, 0.0, 0.0};
}

void hex_q1(const Vec3& xi, double val[8], Vec3 grad[8]) {
  static constexpr int bits[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                                     {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  for (int v = 0; v < 8; ++v) {
    double f[3], df[3];
    for (int a = 0; a < 3; ++a) {
      f[a] = bits[v][a] ? xi[a] : 1.0 - xi[a];
      df[a] = bits[v][a] ? 1.0 : -1.0;
    }
    val[v] = f[0] * f[1] * f[2];
    grad[v] = {df[0] * f[1] * f[2], f[0] * df[1] * f[2], f[0] * f[1] * df[2]};
  }
}

}  // namespace rmfem
