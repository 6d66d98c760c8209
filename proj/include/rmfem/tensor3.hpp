#ifndef RMFEM_TENSOR3_HPP
#define RMFEM_TENSOR3_HPP

#include <array>
#include <cmath>

// Small fixed-size vector/matrix algebra for 3d continuum computations:
// orthogonal decomposition dev/skw/vol, the Anti map, row-wise cross products
// and the tangential traces they induce, and isotropic fourth-order tensors.

namespace rmfem {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double& operator[](int i) { return (&x)[i]; }
  double operator[](int i) const { return (&x)[i]; }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

// Row-major 3x3 matrix.
struct Mat3 {
  std::array<double, 9> a{};

  double& operator()(int i, int j) { return a[3 * i + j]; }
  double operator()(int i, int j) const { return a[3 * i + j]; }

  Vec3 row(int i) const { return {a[3 * i], a[3 * i + 1], a[3 * i + 2]}; }
  Vec3 col(int j) const { return {a[j], a[3 + j], a[6 + j]}; }
  void set_row(int i, const Vec3& v) { a[3 * i] = v.x; a[3 * i + 1] = v.y; a[3 * i + 2] = v.z; }

  Mat3 operator+(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[i] = a[i] + o.a[i];
    return r;
  }
  Mat3 operator-(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[i] = a[i] - o.a[i];
    return r;
  }
  Mat3 operator*(double s) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[i] = a[i] * s;
    return r;
  }
  Mat3& operator+=(const Mat3& o) {
    for (int i = 0; i < 9; ++i) a[i] += o.a[i];
    return *this;
  }
  Mat3& operator*=(double s) {
    for (int i = 0; i < 9; ++i) a[i] *= s;
    return *this;
  }
};

inline Mat3 operator*(double s, const Mat3& m) { return m * s; }

inline Mat3 identity3() {
  Mat3 m;
  m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
  return m;
}

inline Mat3 outer(const Vec3& a, const Vec3& b) {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = a[i] * b[j];
  return m;
}

inline Mat3 transpose(const Mat3& m) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = m(j, i);
  return r;
}

inline Mat3 matmul(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

inline Vec3 matvec(const Mat3& m, const Vec3& v) {
  return {m(0, 0) * v.x + m(0, 1) * v.y + m(0, 2) * v.z,
          m(1, 0) * v.x + m(1, 1) * v.y + m(1, 2) * v.z,
          m(2, 0) * v.x + m(2, 1) * v.y + m(2, 2) * v.z};
}

inline double trace(const Mat3& m) { return m(0, 0) + m(1, 1) + m(2, 2); }

// Frobenius inner product <A,B> = A_ij B_ij.
inline double inner(const Mat3& a, const Mat3& b) {
  double s = 0.0;
  for (int i = 0; i < 9; ++i) s += a.a[i] * b.a[i];
  return s;
}
inline double frob(const Mat3& m) { return std::sqrt(inner(m, m)); }

inline Mat3 sym(const Mat3& m) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = 0.5 * (m(i, j) + m(j, i));
  return r;
}
inline Mat3 skw(const Mat3& m) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = 0.5 * (m(i, j) - m(j, i));
  return r;
}
// Spherical part (tr M / 3) * I.
inline Mat3 vol(const Mat3& m) {
  Mat3 r;
  double t = trace(m) / 3.0;
  r(0, 0) = r(1, 1) = r(2, 2) = t;
  return r;
}
inline Mat3 dev(const Mat3& m) { return m - vol(m); }

// Orthogonal split M = dev sym M + skw M + (tr M / 3) I.
struct Mat3Split {
  Mat3 dev_sym, skew, sph;
};
inline Mat3Split decompose(const Mat3& m) {
  Mat3Split s;
  s.skew = skw(m);
  s.sph = vol(m);
  s.dev_sym = dev(sym(m));
  return s;
}

// Anti(v) w = v x w.
inline Mat3 anti(const Vec3& v) {
  Mat3 m;
  m(0, 1) = -v.z; m(0, 2) = v.y;
  m(1, 0) = v.z;  m(1, 2) = -v.x;
  m(2, 0) = -v.y; m(2, 1) = v.x;
  return m;
}
// axl(Anti(v)) = v for skew-symmetric input.
inline Vec3 axl(const Mat3& m) { return {m(2, 1), m(0, 2), m(1, 0)}; }

// Row-wise cross product (P x v)_ij = eps_jkl P_ik v_l, i.e. each row of P is
// crossed with v. This is the tangential-trace operation of H(Curl) matrix
// fields: P x n vanishes iff the tangential projection of every row vanishes.
inline Mat3 cross_rows(const Mat3& p, const Vec3& v) {
  Mat3 r;
  for (int i = 0; i < 3; ++i) r.set_row(i, cross(p.row(i), v));
  return r;
}

// Tangential trace of an H(Curl) matrix field on a facet with normal n.
inline Mat3 trace_hcurl(const Mat3& p, const Vec3& n) { return cross_rows(p, n); }
// Symmetrised trace, the trace operator of H(sym Curl). Identity shifts drop
// out: sym((P + q I) x n) = sym(P x n).
inline Mat3 trace_hsymcurl(const Mat3& p, const Vec3& n) { return sym(cross_rows(p, n)); }

// Isotropic fourth-order tensor C S = 2 mu S + lambda tr(S) I acting on Sym(3).
// With lambda = 0 it is the rotational coupling modulus acting on skew parts.
struct IsotropicTensor4 {
  double mu = 0.0;
  double lambda = 0.0;

  Mat3 apply(const Mat3& s) const {
    Mat3 r = s * (2.0 * mu);
    double lt = lambda * trace(s);
    r(0, 0) += lt; r(1, 1) += lt; r(2, 2) += lt;
    return r;
  }
  // <C S, T> for symmetric S, T.
  double inner_apply(const Mat3& s, const Mat3& t) const {
    return 2.0 * mu * inner(s, t) + lambda * trace(s) * trace(t);
  }
};

}  // namespace rmfem

#endif
