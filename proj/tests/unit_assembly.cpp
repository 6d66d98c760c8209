#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "rmfem/assembly.hpp"

using namespace rmfem;

namespace {

Mesh two_tets() {
  return make_tet_mesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}},
                       {{0, 1, 2, 3}, {4, 1, 2, 3}});
}

Mesh kuhn_cube() { return box_tet_mesh({0, 1, 0, 1, 0, 1}, {1, 1, 1}); }

// Gradient of u = (x^2, xy, yz): linear, row-wise curl-free.
Mat3 grad_field(const Vec3& x) {
  Mat3 m;
  m(0, 0) = 2 * x.x;
  m(1, 0) = x.y;
  m(1, 1) = x.x;
  m(2, 1) = x.z;
  m(2, 2) = x.y;
  return m;
}

RmmMaterial meso_material(double mu_c) {
  RmmMaterial m;
  m.elastic = {769.0 / 9.0, 3462.0 / 27.0};
  m.micro = {769.0, 1154.0};
  m.mu_c = mu_c;
  m.mu_macro = 76.9;
  m.lc = 1.0;
  return m;
}

}  // namespace

TEST_CASE("tangential traces of shared functions are single-valued") {
  const Mesh pair = two_tets();
  const Mesh cube = kuhn_cube();
  for (ElementKind kind : all_element_kinds()) {
    if (element(kind).cell_type != CellType::Tet) continue;
    CHECK(max_facet_trace_jump(pair, kind, true) <= 1e-11);
    CHECK(max_facet_trace_jump(pair, kind, false) <= 1e-11);
  }
  for (ElementKind kind : {ElementKind::Y0, ElementKind::S0, ElementKind::Y1,
                           ElementKind::S1, ElementKind::Y2, ElementKind::M2,
                           ElementKind::D1, ElementKind::NedelecII1}) {
    CHECK(max_facet_trace_jump(cube, kind, true) <= 1e-11);
    CHECK(max_facet_trace_jump(cube, kind, false) <= 1e-11);
  }
}

TEST_CASE("boundary fit constrains only boundary trace dofs") {
  const Mesh cube = kuhn_cube();
  const ElementBasis& eb = element(ElementKind::Y1);
  const DofMap dm = build_dofmap(eb, cube);
  const MatrixField target = [](const Vec3&) { return identity3(); };
  const EssentialBc bc = fit_tangential_trace(cube, eb, dm, target, false);
  CHECK(bc.count() > 0);
  for (int d = 0; d < dm.n; ++d) {
    if (!bc.constrained[d]) continue;
    CHECK(dm.boundary_entity[d]);
    CHECK(dm.hcurl[d]);
  }
}

TEST_CASE("projection reproduces fields inside the space") {
  const Mesh mesh = box_tet_mesh({0, 1, 0, 1, 0, 1}, {2, 2, 2});
  ProjectionOptions opts;
  opts.rel_tol = 1e-12;

  // full linear space: gradient plus an arbitrary constant
  Mat3 c0;
  c0(0, 1) = 0.7;
  c0(1, 0) = -0.4;
  c0(2, 2) = 1.3;
  const MatrixField lin = [&](const Vec3& x) { return grad_field(x) + c0; };
  auto sol = solve_projection(mesh, ElementKind::Y1, lin, opts);
  CHECK(projection_rel_error(mesh, ElementKind::Y1, sol.coeff, lin) <= 1e-9);
  CHECK(boundary_trace_error(mesh, ElementKind::Y1, sol.coeff, lin, false) <= 1e-8);

  // deviatoric element: traceless linear part plus a linear identity multiple
  const MatrixField devlin = [](const Vec3& x) {
    const double q = 0.3 + 0.2 * x.x - 0.1 * x.y + 0.4 * x.z;
    return dev(grad_field(x)) + identity3() * q;
  };
  auto dsol = solve_projection(mesh, ElementKind::D1, devlin, opts);
  CHECK(projection_rel_error(mesh, ElementKind::D1, dsol.coeff, devlin) <= 1e-9);

  // constants under pure Neumann
  opts.bc = BcMode::Neumann;
  const MatrixField cf = [&](const Vec3&) { return c0; };
  auto nsol = solve_projection(mesh, ElementKind::Y0, cf, opts);
  CHECK(projection_rel_error(mesh, ElementKind::Y0, nsol.coeff, cf) <= 1e-9);
}

TEST_CASE("static condensation leaves the projection unchanged") {
  const Mesh mesh = box_tet_mesh({0, 1, 0, 1, 0, 1}, {2, 2, 2});
  const MatrixField target = [](const Vec3& x) {
    Mat3 m;
    m(0, 0) = std::sinh(x.x) / 10.0;
    return m;
  };
  ProjectionOptions plain, cond;
  plain.rel_tol = cond.rel_tol = 1e-12;
  cond.condense = true;
  auto a = solve_projection(mesh, ElementKind::Y1, target, plain);
  auto b = solve_projection(mesh, ElementKind::Y1, target, cond);
  const double ea = projection_rel_error(mesh, ElementKind::Y1, a.coeff, target);
  const double eb = projection_rel_error(mesh, ElementKind::Y1, b.coeff, target);
  CHECK(ea == doctest::Approx(eb).epsilon(1e-8));
  CHECK(b.stats.free_dofs < a.stats.free_dofs);
}

TEST_CASE("uniform dilatation patch problem has the exact closed-form energy") {
  // Single material, u = 0.1 x prescribed on the whole boundary, micro field
  // free. The optimum is Du = 0.1 I, P = c I with c balancing the meso and
  // micro moduli: energy density 1.5 * (a_e a_m / (a_e + a_m)) * 0.01 with
  // a_e = 2 mu_e + 3 lambda_e = 5000/9 and a_m = 5000, i.e. 7.5 per unit
  // volume and 480 on [-2,2]^3. The discrete minimiser attains it because
  // the optimal pair lies in every discrete space.
  const Mesh mesh = box_tet_mesh({-2, 2, -2, 2, -2, 2}, {4, 4, 4});
  RmmProblem prob;
  prob.mesh = &mesh;
  prob.region.assign(mesh.num_cells(), 0);
  prob.mat = {meso_material(0.0), meso_material(0.0)};
  prob.disp_order = 1;
  prob.micro = ElementKind::S0;
  prob.bc = BcMode::Neumann;
  prob.boundary_u = [](const Vec3& x) { return x * 0.1; };
  prob.boundary_du = [](const Vec3&) { return identity3() * 0.1; };
  prob.rel_tol = 1e-12;
  const RmmSolution sol = solve_rmm(prob);
  CHECK(sol.energy == doctest::Approx(480.0).epsilon(1e-6));
}

TEST_CASE("constant skew micro distortion carries no energy") {
  // With mu_c = 0 a constant skew-symmetric P is invisible to every energy
  // term; prescribing its trace must return (u, P) = (0, P) with zero energy.
  const Mesh mesh = box_tet_mesh({0, 1, 0, 1, 0, 1}, {2, 2, 2});
  const Mat3 sk = anti({0.3, -0.2, 0.5});
  RmmProblem prob;
  prob.mesh = &mesh;
  prob.region.assign(mesh.num_cells(), 0);
  prob.mat = {meso_material(0.0), meso_material(0.0)};
  prob.micro = ElementKind::S0;
  prob.bc = BcMode::Dirichlet;
  prob.boundary_u = [](const Vec3&) { return Vec3{}; };
  prob.boundary_du = [&](const Vec3&) { return sk; };
  prob.rel_tol = 1e-12;
  const RmmSolution sol = solve_rmm(prob);
  CHECK(std::abs(sol.energy) <= 1e-6);
}

TEST_CASE("static condensation leaves the two-field solve unchanged") {
  const Mesh mesh = box_tet_mesh({0, 1, 0, 1, 0, 1}, {2, 2, 2});
  RmmProblem prob;
  prob.mesh = &mesh;
  prob.region.resize(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) prob.region[c] = c % 2;
  prob.mat[0] = meso_material(76.9);
  prob.mat[1] = meso_material(76.9);
  prob.mat[0].elastic = {77.0, 11.0};
  prob.micro = ElementKind::S0;
  prob.bc = BcMode::Coupling;
  prob.boundary_u = [](const Vec3& x) { return x * 0.1; };
  prob.boundary_du = [](const Vec3&) { return identity3() * 0.1; };
  prob.rel_tol = 1e-12;
  const RmmSolution plain = solve_rmm(prob);
  prob.condense = true;
  const RmmSolution cond = solve_rmm(prob);
  CHECK(plain.energy == doctest::Approx(cond.energy).epsilon(1e-8));
  CHECK(cond.stats.free_dofs < plain.stats.free_dofs);
}
