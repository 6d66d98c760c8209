#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "rmfem/scalar_basis.hpp"

using namespace rmfem;

namespace {

std::mt19937 rng(777);

Vec3 interior_point() {
  std::uniform_real_distribution<double> u(0.05, 0.85);
  Vec3 p;
  do {
    p = {u(rng), u(rng), u(rng)};
  } while (p.x + p.y + p.z > 0.92);
  return p;
}

}  // namespace

TEST_CASE("dimension of the hierarchical spaces") {
  CHECK(up_basis(1).size() == 4);
  CHECK(up_basis(2).size() == 10);
  CHECK(up_basis(3).size() == 20);
  CHECK(up_basis(4).size() == 35);
  CHECK(up_basis(5).size() == 56);
  CHECK_THROWS(up_basis(0));
  CHECK_THROWS(up_basis(6));
}

TEST_CASE("barycentric slots and partition of unity") {
  double lam[4];
  Vec3 g[4];
  tet_barycentric({0.3, 0.2, 0.1}, lam, g);
  CHECK(lam[0] == doctest::Approx(0.4));   // 1 - xi - eta - zeta
  CHECK(lam[1] == doctest::Approx(0.1));   // zeta
  CHECK(lam[2] == doctest::Approx(0.2));   // eta
  CHECK(lam[3] == doctest::Approx(0.3));   // xi
  CHECK(lam[0] + lam[1] + lam[2] + lam[3] == doctest::Approx(1.0));
  const Vec3 gsum = g[0] + g[1] + g[2] + g[3];
  CHECK(norm(gsum) == doctest::Approx(0.0).scale(1));
}

TEST_CASE("scaled legendre values") {
  // P_k^S(x, 1) is the Legendre polynomial
  const Kernel p2 = scaled_legendre(2, 0.3, 1.0);
  CHECK(p2.v == doctest::Approx((3 * 0.3 * 0.3 - 1) / 2));
  const Kernel p3 = scaled_legendre(3, -0.4, 1.0);
  CHECK(p3.v == doctest::Approx((5 * std::pow(-0.4, 3) - 3 * -0.4) / 2));
  // homogeneity: P_k^S(sx, st) = s^k P_k^S(x, t)
  const Kernel a = scaled_legendre(4, 0.2, 0.7);
  const Kernel b = scaled_legendre(4, 0.4, 1.4);
  CHECK(b.v == doctest::Approx(16.0 * a.v));
  // L_2^S(x,t) = (x^2 - t^2)/2 vanishes at x = +-t
  CHECK(scaled_int_legendre(2, 0.6, 0.6).v == doctest::Approx(0.0).scale(1));
  CHECK(scaled_int_legendre(2, 0.25, 0.8).v ==
        doctest::Approx((0.25 * 0.25 - 0.64) / 2));
}

TEST_CASE("non-vertex functions vanish at the vertices") {
  const ScalarTetBasis basis = up_basis(4);
  const double verts[4][4] = {
      {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  for (int f = 0; f < basis.size(); ++f) {
    if (basis.fns[f].kind == Polytope::Vertex) continue;
    for (const double* lam : verts)
      CHECK(std::abs(basis.eval(f, lam)) <= 1e-14);
  }
}

TEST_CASE("gradients match finite differences") {
  const ScalarTetBasis basis = up_basis(4);
  const double h = 1e-6;
  for (int it = 0; it < 5; ++it) {
    const Vec3 p = interior_point();
    for (int f = 0; f < basis.size(); ++f) {
      double lam[4];
      Vec3 g[4];
      tet_barycentric(p, lam, g);
      double dlam[4];
      basis.eval_grad(f, lam, dlam);
      // directional derivatives along the reference axes
      for (int d = 0; d < 3; ++d) {
        Vec3 pp = p, pm = p;
        pp[d] += h;
        pm[d] -= h;
        double lp[4], lm[4];
        Vec3 dummy[4];
        tet_barycentric(pp, lp, dummy);
        tet_barycentric(pm, lm, dummy);
        const double fd = (basis.eval(f, lp) - basis.eval(f, lm)) / (2 * h);
        double an = 0.0;
        for (int s = 0; s < 4; ++s) an += dlam[s] * g[s][d];
        CHECK(an == doctest::Approx(fd).epsilon(5e-6).scale(1.0));
      }
    }
  }
}

TEST_CASE("eval_grad returns the value") {
  const ScalarTetBasis basis = up_basis(3);
  const Vec3 p = interior_point();
  double lam[4];
  Vec3 g[4];
  tet_barycentric(p, lam, g);
  for (int f = 0; f < basis.size(); ++f) {
    double dlam[4];
    CHECK(basis.eval_grad(f, lam, dlam) == doctest::Approx(basis.eval(f, lam)));
  }
}

TEST_CASE("trilinear hex hats") {
  double v[8];
  Vec3 g[8];
  // partition of unity at a generic point
  hex_q1({0.3, 0.7, 0.2}, v, g);
  double s = 0.0;
  Vec3 gs{};
  for (int i = 0; i < 8; ++i) {
    s += v[i];
    gs += g[i];
  }
  CHECK(s == doctest::Approx(1.0));
  CHECK(norm(gs) == doctest::Approx(0.0).scale(1));
  // Kronecker property at the corners (grid order)
  const Vec3 corners[8] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                           {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  for (int cidx = 0; cidx < 8; ++cidx) {
    hex_q1(corners[cidx], v, g);
    for (int i = 0; i < 8; ++i) CHECK(v[i] == doctest::Approx(i == cidx ? 1.0 : 0.0));
  }
}
