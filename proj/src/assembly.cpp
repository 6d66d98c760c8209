#include "rmfem/assembly.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <stdexcept>

namespace rmfem {

long EssentialBc::count() const {
  long c = 0;
  for (char f : constrained) c += f != 0;
  return c;
}

namespace {

constexpr Vec3 kTetRefCorner[4] = {
    {0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}};
constexpr Vec3 kHexRefCorner[8] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                                   {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};

// ---------------------------------------------------------------------------
// Facet quadrature in the owner cell's reference coordinates
// ---------------------------------------------------------------------------

struct FacetRule {
  std::vector<Vec3> ref;   // points in the owner's reference cell
  std::vector<double> w;   // physical weights, sum = facet area
  std::vector<Vec3> x;     // physical points
  Vec3 n_hat;              // outward unit normal
};

FacetRule facet_rule(const Mesh& mesh, int cell, int gface, int degree) {
  FacetRule fr;
  const int* cv = mesh.cell(cell);
  const Vec3 centroid = mesh.cell_centroid(cell);
  if (mesh.cell_type == CellType::Tet) {
    const auto& fv = mesh.faces[gface];
    int slot[3];
    for (int k = 0; k < 3; ++k) {
      slot[k] = -1;
      for (int s = 0; s < 4; ++s)
        if (cv[s] == fv[k]) slot[k] = s;
      if (slot[k] < 0) throw std::logic_error("facet_rule: face not on cell");
    }
    const Vec3 p0 = mesh.vertices[fv[0]], p1 = mesh.vertices[fv[1]],
               p2 = mesh.vertices[fv[2]];
    const Vec3 cr = cross(p1 - p0, p2 - p0);
    const double two_area = norm(cr);
    Vec3 n = cr * (1.0 / two_area);
    const Vec3 fc = (p0 + p1 + p2) * (1.0 / 3.0);
    if (dot(n, fc - centroid) < 0.0) n = -n;
    fr.n_hat = n;
    const QuadRule tri = tri_rule(degree);
    for (int q = 0; q < tri.size(); ++q) {
      const double u = tri.points[q].x, v = tri.points[q].y;
      fr.ref.push_back(kTetRefCorner[slot[0]] * (1.0 - u - v) +
                       kTetRefCorner[slot[1]] * u + kTetRefCorner[slot[2]] * v);
      fr.x.push_back(p0 * (1.0 - u - v) + p1 * u + p2 * v);
      fr.w.push_back(tri.weights[q] * two_area);
    }
    return fr;
  }

  // Hexahedron: recover the cyclic corner order from the owner's face table.
  const auto& fv = mesh.faces[gface];
  int lface = -1;
  for (int f = 0; f < 6 && lface < 0; ++f) {
    std::array<int, 4> ids;
    for (int k = 0; k < 4; ++k) ids[k] = cv[kHexFaces[f][k]];
    std::sort(ids.begin(), ids.end());
    std::array<int, 4> want = fv;
    if (ids == want) lface = f;
  }
  if (lface < 0) throw std::logic_error("facet_rule: face not on hex cell");
  Vec3 rc[4], pc[4];
  for (int k = 0; k < 4; ++k) {
    rc[k] = kHexRefCorner[kHexFaces[lface][k]];
    pc[k] = mesh.vertices[cv[kHexFaces[lface][k]]];
  }
  std::vector<double> gx, gw;
  gauss_legendre(degree / 2 + 1, gx, gw);
  // Constant metric for axis-aligned cells.
  const Vec3 du = pc[1] - pc[0], dv = pc[3] - pc[0];
  const Vec3 cr = cross(du, dv);
  const double jac = norm(cr);
  Vec3 n = cr * (1.0 / jac);
  const Vec3 fc = (pc[0] + pc[1] + pc[2] + pc[3]) * 0.25;
  if (dot(n, fc - centroid) < 0.0) n = -n;
  fr.n_hat = n;
  for (size_t a = 0; a < gx.size(); ++a)
    for (size_t b = 0; b < gx.size(); ++b) {
      const double u = gx[a], v = gx[b];
      auto blend = [&](const Vec3* c) {
        return c[0] * ((1 - u) * (1 - v)) + c[1] * (u * (1 - v)) +
               c[2] * (u * v) + c[3] * ((1 - u) * v);
      };
      fr.ref.push_back(blend(rc));
      fr.x.push_back(blend(pc));
      fr.w.push_back(gw[a] * gw[b] * jac);
    }
  return fr;
}

// ---------------------------------------------------------------------------
// Sparse least-squares trace fits
// ---------------------------------------------------------------------------

CsrMatrix csr_from_map(int n, const std::map<std::pair<int, int>, double>& m) {
  CsrMatrix a;
  a.n = n;
  a.row_ptr.assign(n + 1, 0);
  for (const auto& [ij, v] : m) a.row_ptr[ij.first + 1]++;
  for (int i = 0; i < n; ++i) a.row_ptr[i + 1] += a.row_ptr[i];
  a.col.resize(m.size());
  a.val.resize(m.size());
  long k = 0;
  for (const auto& [ij, v] : m) {
    a.col[k] = ij.second;
    a.val[k] = v;
    ++k;
  }
  return a;
}

}  // namespace

EssentialBc fit_tangential_trace(const Mesh& mesh, const ElementBasis& eb,
                                 const DofMap& dm, const MatrixField& target,
                                 bool sym_trace, double tol) {
  EssentialBc bc;
  bc.constrained.assign(dm.n, 0);
  bc.value.assign(dm.n, 0.0);
  for (int d = 0; d < dm.n; ++d)
    bc.constrained[d] = dm.boundary_entity[d] && dm.hcurl[d];

  std::vector<int> cidx(dm.n, -1);
  int nb = 0;
  for (int d = 0; d < dm.n; ++d)
    if (bc.constrained[d]) cidx[d] = nb++;
  if (nb == 0) return bc;

  std::map<std::pair<int, int>, double> gram, mass;
  std::vector<double> rhs(nb, 0.0), mrhs(nb, 0.0);
  const int nfn = eb.size();
  std::vector<Mat3> val(nfn), scv(nfn);

  for (const BoundaryFacet& bfct : mesh.boundary_facets) {
    const int c = mesh.face_cells[bfct.face][0];
    CellBasis cb(eb, mesh, c);
    const FacetRule fr = facet_rule(mesh, c, bfct.face, 2 * eb.degree + 2);
    // local constrained functions
    std::vector<int> loc;
    for (int l = 0; l < nfn; ++l)
      if (bc.constrained[dm.dof(c, l)]) loc.push_back(l);
    for (size_t q = 0; q < fr.ref.size(); ++q) {
      cb.eval(fr.ref[q], val.data(), scv.data());
      const Mat3 full = target(fr.x[q]);
      Mat3 tg = trace_hcurl(full, fr.n_hat);
      if (sym_trace) tg = sym(tg);
      std::vector<Mat3> tr(loc.size());
      for (size_t i = 0; i < loc.size(); ++i) {
        tr[i] = trace_hcurl(val[loc[i]], fr.n_hat);
        if (sym_trace) tr[i] = sym(tr[i]);
      }
      for (size_t i = 0; i < loc.size(); ++i) {
        const int gi = cidx[dm.dof(c, loc[i])];
        rhs[gi] += fr.w[q] * inner(tr[i], tg);
        mrhs[gi] += fr.w[q] * inner(val[loc[i]], full);
        for (size_t j = 0; j < loc.size(); ++j) {
          const int gj = cidx[dm.dof(c, loc[j])];
          gram[{gi, gj}] += fr.w[q] * inner(tr[i], tr[j]);
          mass[{gi, gj}] += fr.w[q] * inner(val[loc[i]], val[loc[j]]);
        }
      }
    }
  }

  // The boundary trace need not see every direction of an entity's dof
  // block: on a flat boundary patch with normal n the deviatoric vertex
  // templates lose a (x) n and, for symmetric traces, n n^T - I/3. The fit
  // therefore runs in two stages. Stage one rotates each rank-deficient block
  // into the eigenbasis of its trace Gram and solves the trace fit over the
  // visible coordinates only; stage two pins the trace-invisible
  // coordinates by matching boundary values. Both stages are exact for
  // targets inside the space, and blocks with a full-rank trace pass
  // through stage one unchanged.
  const long nv = static_cast<long>(mesh.vertices.size());
  const long ne = static_cast<long>(mesh.edges.size());
  const long nfc = static_cast<long>(mesh.faces.size());
  const long voff = nv * eb.per_vertex;
  const long eoff = voff + ne * eb.per_edge;
  const long foff = eoff + nfc * eb.per_face;
  auto entity_of = [&](long d) -> long {
    if (d < voff) return d / std::max(eb.per_vertex, 1);
    if (d < eoff) return nv + (d - voff) / std::max(eb.per_edge, 1);
    if (d < foff) return nv + ne + (d - eoff) / std::max(eb.per_face, 1);
    return nv + ne + nfc + (d - foff) / std::max(eb.per_cell, 1);
  };
  std::map<long, std::vector<int>> blocks;
  for (int d = 0; d < dm.n; ++d)
    if (cidx[d] >= 0) blocks[entity_of(d)].push_back(d);

  auto entry_at = [](const std::map<std::pair<int, int>, double>& m_, int gi,
                     int gj) {
    const auto it = m_.find({gi, gj});
    return it == m_.end() ? 0.0 : it->second;
  };

  // Per constrained dof: either a plain stage-one variable, or a member of a
  // rotated block (row of the visible eigenvector slab / null slab).
  struct RotBlock {
    std::vector<int> gidx;   // constrained indices of the block
    Eigen::MatrixXd vis;     // m x (m - k) visible eigenvectors
    Eigen::MatrixXd null_;   // m x k trace-invisible eigenvectors
    int var0 = -1;           // first stage-one variable of the block
    int null0 = -1;          // first stage-two coordinate of the block
  };
  std::vector<RotBlock> rots;
  std::vector<int> plain_var(nb, -1);
  std::vector<int> rot_of(nb, -1), pos_in(nb, -1);

  int nvars = 0, nnull = 0;
  for (const auto& [ent, ds] : blocks) {
    const int m = static_cast<int>(ds.size());
    Eigen::MatrixXd blk(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        blk(i, j) = entry_at(gram, cidx[ds[i]], cidx[ds[j]]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blk);
    const double lmax = std::max(es.eigenvalues().maxCoeff(), 0.0);
    int k = 0;
    while (k < m && es.eigenvalues()(k) <= 1e-10 * lmax) ++k;
    if (k == 0) {
      for (int d : ds) plain_var[cidx[d]] = nvars++;
      continue;
    }
    RotBlock rb;
    for (int d : ds) rb.gidx.push_back(cidx[d]);
    rb.null_ = es.eigenvectors().leftCols(k);
    rb.vis = es.eigenvectors().rightCols(m - k);
    rb.var0 = nvars;
    rb.null0 = nnull;
    nvars += m - k;
    nnull += k;
    for (int i = 0; i < m; ++i) {
      rot_of[rb.gidx[i]] = static_cast<int>(rots.size());
      pos_in[rb.gidx[i]] = i;
    }
    rots.push_back(std::move(rb));
  }

  // expansion of a constrained index into stage-one variables with weights
  auto expand = [&](int gi, std::vector<std::pair<int, double>>& out) {
    out.clear();
    if (plain_var[gi] >= 0) {
      out.emplace_back(plain_var[gi], 1.0);
      return;
    }
    const RotBlock& rb = rots[rot_of[gi]];
    const int t = pos_in[gi];
    for (int a = 0; a < rb.vis.cols(); ++a)
      out.emplace_back(rb.var0 + a, rb.vis(t, a));
  };

  std::vector<double> sol1(nvars, 0.0);
  if (nvars > 0) {
    std::map<std::pair<int, int>, double> tgram;
    std::vector<double> trhs(nvars, 0.0);
    std::vector<std::pair<int, double>> ri, cj;
    for (const auto& [ij, v] : gram) {
      expand(ij.first, ri);
      expand(ij.second, cj);
      for (const auto& [a, wa] : ri)
        for (const auto& [b, wb] : cj) tgram[{a, b}] += wa * v * wb;
    }
    for (int i = 0; i < nb; ++i) {
      expand(i, ri);
      for (const auto& [a, wa] : ri) trhs[a] += wa * rhs[i];
    }
    if (nvars <= 1500) {
      std::vector<double> dense(static_cast<size_t>(nvars) * nvars, 0.0);
      for (const auto& [ij, v] : tgram)
        dense[static_cast<size_t>(ij.first) * nvars + ij.second] = v;
      sol1 = dense_solve(dense, trhs);
    } else {
      CsrMatrix G = csr_from_map(nvars, tgram);
      CgOptions copts;
      copts.rel_tol = tol;
      copts.max_iters = 20L * nvars + 200;
      cg_solve(G, trhs, sol1, copts);
    }
  }

  std::vector<double> c0(nb, 0.0);
  for (int i = 0; i < nb; ++i) {
    if (plain_var[i] >= 0) {
      c0[i] = sol1[plain_var[i]];
    } else {
      const RotBlock& rb = rots[rot_of[i]];
      const int t = pos_in[i];
      for (int a = 0; a < rb.vis.cols(); ++a)
        c0[i] += rb.vis(t, a) * sol1[rb.var0 + a];
    }
  }

  if (nnull > 0) {
    // stage two: boundary value fit of the invisible coordinates
    auto null_weights = [&](int gi, std::vector<std::pair<int, double>>& out) {
      out.clear();
      if (rot_of[gi] < 0) return;
      const RotBlock& rb = rots[rot_of[gi]];
      const int t = pos_in[gi];
      for (int a = 0; a < rb.null_.cols(); ++a)
        out.emplace_back(rb.null0 + a, rb.null_(t, a));
    };
    Eigen::MatrixXd nmn = Eigen::MatrixXd::Zero(nnull, nnull);
    Eigen::VectorXd nrhs = Eigen::VectorXd::Zero(nnull);
    std::vector<double> mc0(nb, 0.0);
    for (const auto& [ij, v] : mass) mc0[ij.first] += v * c0[ij.second];
    std::vector<std::pair<int, double>> wi, wj;
    for (const auto& [ij, v] : mass) {
      null_weights(ij.first, wi);
      if (wi.empty()) continue;
      null_weights(ij.second, wj);
      for (const auto& [a, wa] : wi)
        for (const auto& [b, wb] : wj) nmn(a, b) += wa * v * wb;
    }
    for (int i = 0; i < nb; ++i) {
      null_weights(i, wi);
      for (const auto& [a, wa] : wi) nrhs(a) += wa * (mrhs[i] - mc0[i]);
    }
    const Eigen::VectorXd alpha = nmn.ldlt().solve(nrhs);
    for (int i = 0; i < nb; ++i) {
      null_weights(i, wi);
      for (const auto& [a, wa] : wi) c0[i] += wa * alpha(a);
    }
  }

  for (int d = 0; d < dm.n; ++d)
    if (cidx[d] >= 0) bc.value[d] = c0[cidx[d]];
  return bc;
}

EssentialBc fit_displacement_trace(const Mesh& mesh, const ScalarTetBasis& basis,
                                   const DofMap& dm, const VectorField& target,
                                   double tol) {
  // dm is the scalar dof map; the vector field uses dof 3*a + comp.
  EssentialBc bc;
  bc.constrained.assign(3 * dm.n, 0);
  bc.value.assign(3 * dm.n, 0.0);
  std::vector<int> cidx(dm.n, -1);
  int nb = 0;
  for (int d = 0; d < dm.n; ++d)
    if (dm.boundary_entity[d]) {
      cidx[d] = nb++;
      for (int r = 0; r < 3; ++r) bc.constrained[3 * d + r] = 1;
    }
  if (nb == 0) return bc;

  std::map<std::pair<int, int>, double> gram;
  std::array<std::vector<double>, 3> rhs;
  for (auto& r : rhs) r.assign(nb, 0.0);
  const int nfn = basis.size();

  for (const BoundaryFacet& bfct : mesh.boundary_facets) {
    const int c = mesh.face_cells[bfct.face][0];
    const int* cv = mesh.cell(c);
    std::array<int, 4> perm = {0, 1, 2, 3};
    std::sort(perm.begin(), perm.end(),
              [cv](int a, int b) { return cv[a] < cv[b]; });
    const FacetRule fr = facet_rule(mesh, c, bfct.face, 2 * basis.order + 2);
    std::vector<int> loc;
    for (int l = 0; l < nfn; ++l)
      if (cidx[dm.dof(c, l)] >= 0) loc.push_back(l);
    for (size_t q = 0; q < fr.ref.size(); ++q) {
      double lam_raw[4], lam[4];
      Vec3 gref[4];
      tet_barycentric(fr.ref[q], lam_raw, gref);
      for (int s = 0; s < 4; ++s) lam[s] = lam_raw[perm[s]];
      const Vec3 u = target(fr.x[q]);
      std::vector<double> nv(loc.size());
      for (size_t i = 0; i < loc.size(); ++i) nv[i] = basis.eval(loc[i], lam);
      for (size_t i = 0; i < loc.size(); ++i) {
        const int gi = cidx[dm.dof(c, loc[i])];
        for (int r = 0; r < 3; ++r) rhs[r][gi] += fr.w[q] * nv[i] * u[r];
        for (size_t j = 0; j < loc.size(); ++j) {
          const int gj = cidx[dm.dof(c, loc[j])];
          gram[{gi, gj}] += fr.w[q] * nv[i] * nv[j];
        }
      }
    }
  }

  CsrMatrix G = csr_from_map(nb, gram);
  CgOptions opts;
  opts.rel_tol = tol;
  opts.max_iters = 20L * nb + 200;
  for (int r = 0; r < 3; ++r) {
    std::vector<double> sol, b = rhs[r];
    cg_solve(G, b, sol, opts);
    for (int d = 0; d < dm.n; ++d)
      if (cidx[d] >= 0) bc.value[3 * d + r] = sol[cidx[d]];
  }
  return bc;
}

// ---------------------------------------------------------------------------
// Cell-class cache keys
// ---------------------------------------------------------------------------

namespace {

struct ClassKey {
  std::array<uint64_t, 9> jbits{};
  uint32_t perm = 0;
  int region = 0;

  bool operator<(const ClassKey& o) const {
    if (jbits != o.jbits) return jbits < o.jbits;
    if (perm != o.perm) return perm < o.perm;
    return region < o.region;
  }
};

ClassKey make_key(const ElementMap& map, const std::array<int, 4>& perm, int region) {
  ClassKey k;
  static_assert(sizeof(double) == sizeof(uint64_t));
  for (int i = 0; i < 9; ++i)
    std::memcpy(&k.jbits[i], &map.J.a[i], sizeof(uint64_t));
  k.perm = 0;
  for (int s = 0; s < 4; ++s) k.perm |= static_cast<uint32_t>(perm[s]) << (4 * s);
  k.region = region;
  return k;
}

std::array<int, 4> sorted_perm(const Mesh& mesh, int c) {
  const int* cv = mesh.cell(c);
  std::array<int, 4> perm = {0, 1, 2, 3};
  std::sort(perm.begin(), perm.end(),
            [cv](int a, int b) { return cv[a] < cv[b]; });
  return perm;
}

// ---------------------------------------------------------------------------
// Generic constrained SPD system with optional per-cell static condensation
// ---------------------------------------------------------------------------

struct GlobalSystem {
  int n = 0;
  int ncells = 0, nloc = 0;
  const int* gdofs = nullptr;           // ncells x nloc
  std::vector<char> eliminated;         // per local fn (condensed interior)
  const EssentialBc* bc = nullptr;      // may be null (all free)

  CsrMatrix A;
  std::vector<double> rhs;

  bool constrained(int g) const { return bc && bc->constrained[g]; }

  void build_pattern() {
    // dof -> cell adjacency over non-eliminated dofs
    std::vector<long> count(n + 1, 0);
    for (int c = 0; c < ncells; ++c)
      for (int l = 0; l < nloc; ++l)
        if (!eliminated[l]) count[gdofs[static_cast<long>(c) * nloc + l] + 1]++;
    std::vector<long> off(count);
    for (int i = 0; i < n; ++i) off[i + 1] += off[i];
    std::vector<int> adj(off[n]);
    {
      std::vector<long> cur(off.begin(), off.end() - 1);
      for (int c = 0; c < ncells; ++c)
        for (int l = 0; l < nloc; ++l)
          if (!eliminated[l]) adj[cur[gdofs[static_cast<long>(c) * nloc + l]]++] = c;
    }
    A.n = n;
    A.row_ptr.assign(n + 1, 0);
    // Two passes with a per-row scratch buffer keep the peak memory at the
    // final CSR size (the finest meshes reach ~1e8 nonzeros).
    std::vector<int> row;
    auto gather = [&](int r) {
      row.clear();
      row.push_back(r);
      if (!constrained(r)) {
        for (long k = off[r]; k < off[r + 1]; ++k) {
          const int c = adj[k];
          for (int l = 0; l < nloc; ++l) {
            if (eliminated[l]) continue;
            const int g = gdofs[static_cast<long>(c) * nloc + l];
            if (!constrained(g)) row.push_back(g);
          }
        }
      }
      std::sort(row.begin(), row.end());
      row.erase(std::unique(row.begin(), row.end()), row.end());
    };
    for (int r = 0; r < n; ++r) {
      gather(r);
      A.row_ptr[r + 1] = A.row_ptr[r] + static_cast<long>(row.size());
    }
    A.col.resize(A.row_ptr[n]);
    A.val.assign(A.row_ptr[n], 0.0);
    for (int r = 0; r < n; ++r) {
      gather(r);
      std::copy(row.begin(), row.end(), A.col.begin() + A.row_ptr[r]);
    }
    rhs.assign(n, 0.0);
  }

  void add_entry(int gi, int gj, double v) {
    const auto b = A.col.begin() + A.row_ptr[gi];
    const auto e = A.col.begin() + A.row_ptr[gi + 1];
    const auto it = std::lower_bound(b, e, gj);
    A.val[it - A.col.begin()] += v;
  }

  // Scatter a cell's (possibly condensed) stiffness and load. K is kloc x
  // kloc over the non-eliminated local dofs in their original order.
  void add_cell(int c, const std::vector<int>& keep, const double* K,
                const double* f) {
    const int m = static_cast<int>(keep.size());
    const int* gd = gdofs + static_cast<long>(c) * nloc;
    for (int i = 0; i < m; ++i) {
      const int gi = gd[keep[i]];
      if (constrained(gi)) continue;
      if (f) rhs[gi] += f[i];
      for (int j = 0; j < m; ++j) {
        const int gj = gd[keep[j]];
        const double kij = K[static_cast<long>(i) * m + j];
        if (constrained(gj))
          rhs[gi] -= kij * bc->value[gj];
        else
          add_entry(gi, gj, kij);
      }
    }
  }

  void finalize() {
    for (int r = 0; r < n; ++r) {
      bool fixed = constrained(r);
      bool empty = A.row_ptr[r + 1] - A.row_ptr[r] == 1 && A.diag(r) == 0.0;
      if (fixed || empty) {
        add_entry(r, r, 1.0);
        rhs[r] = fixed ? bc->value[r] : 0.0;
      }
    }
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Best-approximation (projection) problem
// ---------------------------------------------------------------------------

namespace {

struct ProjClass {
  std::vector<Mat3> val, scv;  // assembly tabulation [q * nfn + i]
  std::vector<double> K;       // full local matrix
  // condensation data
  Eigen::MatrixXd kii_inv, kii_inv_kis, kschur;
};

struct ProjContext {
  const Mesh* mesh;
  const ElementBasis* eb;
  QuadRule rule;
  std::map<ClassKey, ProjClass> cache;
  std::vector<int> interior_loc, shared_loc;  // local index partition

  const ProjClass& cell_class(int c, bool condense) {
    const ElementMap map = element_map(*mesh, c);
    const ClassKey key = make_key(map, sorted_perm(*mesh, c), 0);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    ProjClass pc;
    const int nfn = eb->size();
    CellBasis cb(*eb, *mesh, c);
    pc.val.resize(static_cast<long>(rule.size()) * nfn);
    pc.scv.resize(pc.val.size());
    for (int q = 0; q < rule.size(); ++q)
      cb.eval(rule.points[q], pc.val.data() + static_cast<long>(q) * nfn,
              pc.scv.data() + static_cast<long>(q) * nfn);
    pc.K.assign(static_cast<long>(nfn) * nfn, 0.0);
    for (int q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * map.detJ;
      const Mat3* v = pc.val.data() + static_cast<long>(q) * nfn;
      const Mat3* s = pc.scv.data() + static_cast<long>(q) * nfn;
      for (int i = 0; i < nfn; ++i)
        for (int j = i; j < nfn; ++j) {
          const double kij = w * (inner(v[i], v[j]) + inner(s[i], s[j]));
          pc.K[static_cast<long>(i) * nfn + j] += kij;
          if (j != i) pc.K[static_cast<long>(j) * nfn + i] += kij;
        }
    }
    if (condense && !interior_loc.empty()) {
      const int ni = static_cast<int>(interior_loc.size());
      const int ns = static_cast<int>(shared_loc.size());
      Eigen::MatrixXd kii(ni, ni), kis(ni, ns), kss(ns, ns);
      for (int i = 0; i < ni; ++i)
        for (int j = 0; j < ni; ++j)
          kii(i, j) = pc.K[static_cast<long>(interior_loc[i]) * nfn + interior_loc[j]];
      for (int i = 0; i < ni; ++i)
        for (int j = 0; j < ns; ++j)
          kis(i, j) = pc.K[static_cast<long>(interior_loc[i]) * nfn + shared_loc[j]];
      for (int i = 0; i < ns; ++i)
        for (int j = 0; j < ns; ++j)
          kss(i, j) = pc.K[static_cast<long>(shared_loc[i]) * nfn + shared_loc[j]];
      pc.kii_inv = kii.ldlt().solve(Eigen::MatrixXd::Identity(ni, ni));
      pc.kii_inv_kis = pc.kii_inv * kis;
      pc.kschur = kss - kis.transpose() * pc.kii_inv_kis;
    }
    return cache.emplace(key, std::move(pc)).first->second;
  }
};

std::vector<double> projection_cell_rhs(const ProjContext& ctx, int c,
                                        const ProjClass& pc,
                                        const MatrixField& target) {
  const int nfn = ctx.eb->size();
  const ElementMap map = element_map(*ctx.mesh, c);
  std::vector<double> f(nfn, 0.0);
  for (int q = 0; q < ctx.rule.size(); ++q) {
    const double w = ctx.rule.weights[q] * map.detJ;
    const Mat3 t = target(map.map(ctx.rule.points[q]));
    const Mat3* v = pc.val.data() + static_cast<long>(q) * nfn;
    for (int i = 0; i < nfn; ++i) f[i] += w * inner(t, v[i]);
  }
  return f;
}

}  // namespace

ProjectionSolution solve_projection(const Mesh& mesh, ElementKind kind,
                                    const MatrixField& target,
                                    const ProjectionOptions& opts) {
  if (mesh.cell_type != CellType::Tet)
    throw std::runtime_error("solve_projection: tetrahedral meshes only");
  const ElementBasis& eb = element(kind);
  ProjectionSolution out;
  out.dm = build_dofmap(eb, mesh);
  const DofMap& dm = out.dm;
  const int nfn = eb.size();

  EssentialBc bc;
  if (opts.bc != BcMode::Neumann)
    bc = fit_tangential_trace(mesh, eb, dm, target, kind == ElementKind::D1);
  else {
    bc.constrained.assign(dm.n, 0);
    bc.value.assign(dm.n, 0.0);
  }

  ProjContext ctx{&mesh, &eb, tet_rule(2 * eb.degree + 2), {}, {}, {}};
  for (int l = 0; l < nfn; ++l) {
    if (opts.condense && eb.fns[l].entity_kind == Polytope::Cell)
      ctx.interior_loc.push_back(l);
    else
      ctx.shared_loc.push_back(l);
  }

  GlobalSystem sys;
  sys.n = dm.n;
  sys.ncells = mesh.num_cells();
  sys.nloc = nfn;
  sys.gdofs = dm.cell_dofs.data();
  sys.eliminated.assign(nfn, 0);
  if (opts.condense)
    for (int l : ctx.interior_loc) sys.eliminated[l] = 1;
  sys.bc = &bc;
  sys.build_pattern();

  std::vector<int> all_loc(nfn);
  for (int l = 0; l < nfn; ++l) all_loc[l] = l;
  const int ns = static_cast<int>(ctx.shared_loc.size());
  std::vector<double> kbuf, fbuf;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const ProjClass& pc = ctx.cell_class(c, opts.condense);
    std::vector<double> f = projection_cell_rhs(ctx, c, pc, target);
    if (!opts.condense || ctx.interior_loc.empty()) {
      sys.add_cell(c, all_loc, pc.K.data(), f.data());
    } else {
      const int ni = static_cast<int>(ctx.interior_loc.size());
      Eigen::VectorXd fi(ni);
      for (int i = 0; i < ni; ++i) fi(i) = f[ctx.interior_loc[i]];
      Eigen::VectorXd fs(ns);
      for (int i = 0; i < ns; ++i) fs(i) = f[ctx.shared_loc[i]];
      fs -= pc.kii_inv_kis.transpose() * fi;
      kbuf.assign(pc.kschur.data(), pc.kschur.data() + ns * ns);
      // Eigen default storage is column-major; kschur is symmetric, so the
      // row-major view equals the matrix.
      fbuf.assign(fs.data(), fs.data() + ns);
      sys.add_cell(c, ctx.shared_loc, kbuf.data(), fbuf.data());
    }
  }
  sys.finalize();

  CgOptions cg;
  cg.rel_tol = opts.rel_tol;
  out.coeff.assign(dm.n, 0.0);
  for (int d = 0; d < dm.n; ++d)
    if (bc.constrained[d]) out.coeff[d] = bc.value[d];
  auto res = cg_solve(sys.A, sys.rhs, out.coeff, cg);
  if (!res.converged)
    throw std::runtime_error("projection CG stalled at relative residual " +
                             std::to_string(res.rel_residual));
  out.stats.cg_iters = res.iters;
  out.stats.cg_residual = res.rel_residual;
  out.stats.total_dofs = dm.n;
  out.stats.free_dofs = dm.n - static_cast<int>(bc.count()) -
                        (opts.condense
                             ? static_cast<int>(ctx.interior_loc.size()) *
                                   mesh.num_cells()
                             : 0);

  if (opts.condense && !ctx.interior_loc.empty()) {
    // Recover interior dofs cell by cell.
    const int ni = static_cast<int>(ctx.interior_loc.size());
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const ProjClass& pc = ctx.cell_class(c, true);
      std::vector<double> f = projection_cell_rhs(ctx, c, pc, target);
      Eigen::VectorXd fi(ni);
      for (int i = 0; i < ni; ++i) fi(i) = f[ctx.interior_loc[i]];
      Eigen::VectorXd xs(ns);
      for (int i = 0; i < ns; ++i)
        xs(i) = out.coeff[dm.dof(c, ctx.shared_loc[i])];
      Eigen::VectorXd xi = pc.kii_inv * fi - pc.kii_inv_kis * xs;
      for (int i = 0; i < ni; ++i) out.coeff[dm.dof(c, ctx.interior_loc[i])] = xi(i);
    }
  }
  return out;
}

double projection_rel_error(const Mesh& mesh, ElementKind kind,
                            const std::vector<double>& coeff,
                            const MatrixField& target) {
  const ElementBasis& eb = element(kind);
  const DofMap dm = build_dofmap(eb, mesh);
  const QuadRule rule = tet_rule(std::min(eb.degree + 8, 20));
  const int nfn = eb.size();
  std::vector<Mat3> val(nfn), scv(nfn);
  double err2 = 0.0, ref2 = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    CellBasis cb(eb, mesh, c);
    const ElementMap& map = cb.map();
    for (int q = 0; q < rule.size(); ++q) {
      cb.eval(rule.points[q], val.data(), scv.data());
      Mat3 ph{};
      for (int i = 0; i < nfn; ++i) ph += val[i] * coeff[dm.dof(c, i)];
      const Mat3 t = target(map.map(rule.points[q]));
      const double w = rule.weights[q] * map.detJ;
      err2 += w * inner(ph - t, ph - t);
      ref2 += w * inner(t, t);
    }
  }
  return std::sqrt(err2 / ref2);
}

double boundary_trace_error(const Mesh& mesh, ElementKind kind,
                            const std::vector<double>& coeff,
                            const MatrixField& target, bool sym_trace) {
  const ElementBasis& eb = element(kind);
  const DofMap dm = build_dofmap(eb, mesh);
  const int nfn = eb.size();
  std::vector<Mat3> val(nfn), scv(nfn);
  double worst = 0.0;
  for (const BoundaryFacet& bfct : mesh.boundary_facets) {
    const int c = mesh.face_cells[bfct.face][0];
    CellBasis cb(eb, mesh, c);
    const FacetRule fr = facet_rule(mesh, c, bfct.face, 2 * eb.degree + 2);
    for (size_t q = 0; q < fr.ref.size(); ++q) {
      cb.eval(fr.ref[q], val.data(), scv.data());
      Mat3 ph{};
      for (int i = 0; i < nfn; ++i) ph += val[i] * coeff[dm.dof(c, i)];
      Mat3 jump = trace_hcurl(ph - target(fr.x[q]), fr.n_hat);
      if (sym_trace) jump = sym(jump);
      for (double e : jump.a) worst = std::max(worst, std::abs(e));
    }
  }
  return worst;
}

double max_facet_trace_jump(const Mesh& mesh, ElementKind kind, bool sym_trace) {
  const ElementBasis& eb = element(kind);
  const DofMap dm = build_dofmap(eb, mesh);
  const int nfn = eb.size();
  std::vector<Mat3> va(nfn), sa(nfn), vb(nfn), sb(nfn);
  double worst = 0.0;
  for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f) {
    const int ca = mesh.face_cells[f][0], cb_id = mesh.face_cells[f][1];
    if (cb_id < 0) continue;
    CellBasis ba(eb, mesh, ca), bb(eb, mesh, cb_id);
    const FacetRule fa = facet_rule(mesh, ca, f, 2 * eb.degree + 2);
    // Map of global dof -> local index on each side; missing = zero trace.
    std::map<int, int> la, lb;
    for (int l = 0; l < nfn; ++l) {
      // Identity-template functions carry no tangential continuity; they are
      // cell-local, so their one-sided symmetric trace must vanish on its own.
      if (!sym_trace && !eb.fns[l].hcurl) continue;
      la[dm.dof(ca, l)] = l;
      lb[dm.dof(cb_id, l)] = l;
    }
    std::map<int, std::pair<int, int>> both;  // dof -> (locA or -1, locB or -1)
    for (auto& [d, l] : la) both[d] = {l, -1};
    for (auto& [d, l] : lb) {
      auto it = both.find(d);
      if (it == both.end())
        both[d] = {-1, l};
      else
        it->second.second = l;
    }
    const ElementMap mb = element_map(mesh, cb_id);
    for (size_t q = 0; q < fa.ref.size(); ++q) {
      ba.eval(fa.ref[q], va.data(), sa.data());
      bb.eval(mb.pull(fa.x[q]), vb.data(), sb.data());
      for (const auto& [d, locs] : both) {
        Mat3 ta = locs.first >= 0 ? trace_hcurl(va[locs.first], fa.n_hat) : Mat3{};
        Mat3 tb = locs.second >= 0 ? trace_hcurl(vb[locs.second], fa.n_hat) : Mat3{};
        Mat3 jump = ta - tb;
        if (sym_trace) jump = sym(jump);
        for (double e : jump.a) worst = std::max(worst, std::abs(e));
      }
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Relaxed micromorphic two-field problem
// ---------------------------------------------------------------------------

namespace {

struct RmmClass {
  // displacement scalar tabulation
  std::vector<double> nval;  // [q * nsc + a]
  std::vector<Vec3> ngrad;
  // micro-distortion tabulation
  std::vector<Mat3> pval, pscv;
  std::vector<double> K;  // (3 nsc + np)^2, u dofs first
  Eigen::MatrixXd kii_inv, kii_inv_kis, kschur;
};

struct RmmContext {
  const RmmProblem* prob;
  const ScalarTetBasis* ubasis;
  const ElementBasis* peb;
  QuadRule rule;
  std::map<ClassKey, RmmClass> cache;
  std::vector<int> interior_loc, shared_loc;
  int nloc = 0, nsc = 0, np = 0;

  const RmmClass& cell_class(int c) {
    const Mesh& mesh = *prob->mesh;
    const ElementMap map = element_map(mesh, c);
    const auto perm = sorted_perm(mesh, c);
    const int region = prob->region.empty() ? 0 : prob->region[c];
    const ClassKey key = make_key(map, perm, region);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    RmmClass rc;
    const RmmMaterial& mat = prob->mat[region];
    CellBasis cb(*peb, mesh, c);
    rc.pval.resize(static_cast<long>(rule.size()) * np);
    rc.pscv.resize(rc.pval.size());
    rc.nval.resize(static_cast<long>(rule.size()) * nsc);
    rc.ngrad.resize(rc.nval.size());
    Vec3 gphys[4];
    {
      double lam0[4];
      Vec3 gref[4];
      tet_barycentric(Vec3{0.25, 0.25, 0.25}, lam0, gref);
      for (int s = 0; s < 4; ++s) gphys[s] = matvec(map.JinvT, gref[perm[s]]);
    }
    for (int q = 0; q < rule.size(); ++q) {
      cb.eval(rule.points[q], rc.pval.data() + static_cast<long>(q) * np,
              rc.pscv.data() + static_cast<long>(q) * np);
      double lam_raw[4], lam[4];
      Vec3 gref[4];
      tet_barycentric(rule.points[q], lam_raw, gref);
      for (int s = 0; s < 4; ++s) lam[s] = lam_raw[perm[s]];
      for (int a = 0; a < nsc; ++a) {
        double dlam[4];
        rc.nval[static_cast<long>(q) * nsc + a] = ubasis->eval_grad(a, lam, dlam);
        Vec3 g{0, 0, 0};
        for (int s = 0; s < 4; ++s) g += gphys[s] * dlam[s];
        rc.ngrad[static_cast<long>(q) * nsc + a] = g;
      }
    }

    // local stiffness: dofs (a, r) -> 3a + r for u, then 3 nsc + i for P
    const int m = nloc;
    rc.K.assign(static_cast<long>(m) * m, 0.0);
    std::vector<Mat3> du(3 * nsc);  // sym/skw handled below
    const double curv = mat.mu_macro * mat.lc * mat.lc;
    for (int q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * map.detJ;
      for (int a = 0; a < nsc; ++a) {
        const Vec3& g = rc.ngrad[static_cast<long>(q) * nsc + a];
        for (int r = 0; r < 3; ++r) du[3 * a + r] = outer(Vec3{r == 0 ? 1.0 : 0.0, r == 1 ? 1.0 : 0.0, r == 2 ? 1.0 : 0.0}, g);
      }
      const Mat3* pv = rc.pval.data() + static_cast<long>(q) * np;
      const Mat3* ps = rc.pscv.data() + static_cast<long>(q) * np;
      auto pair_e = [&](const Mat3& A, const Mat3& B) {
        double s = mat.elastic.inner_apply(sym(A), sym(B));
        if (mat.mu_c != 0.0) s += 2.0 * mat.mu_c * inner(skw(A), skw(B));
        return s;
      };
      // uu block
      for (int i = 0; i < 3 * nsc; ++i)
        for (int j = i; j < 3 * nsc; ++j) {
          const double kij = w * pair_e(du[i], du[j]);
          rc.K[static_cast<long>(i) * m + j] += kij;
          if (j != i) rc.K[static_cast<long>(j) * m + i] += kij;
        }
      // uP and PP
      for (int i = 0; i < np; ++i) {
        const int gi = 3 * nsc + i;
        for (int j = 0; j < 3 * nsc; ++j) {
          const double kij = -w * pair_e(du[j], pv[i]);
          rc.K[static_cast<long>(gi) * m + j] += kij;
          rc.K[static_cast<long>(j) * m + gi] += kij;
        }
        for (int j = i; j < np; ++j) {
          const int gj = 3 * nsc + j;
          double kij = pair_e(pv[i], pv[j]) +
                       mat.micro.inner_apply(sym(pv[i]), sym(pv[j])) +
                       curv * inner(ps[i], ps[j]);
          kij *= w;
          rc.K[static_cast<long>(gi) * m + gj] += kij;
          if (j != i) rc.K[static_cast<long>(gj) * m + gi] += kij;
        }
      }
    }

    if (prob->condense && !interior_loc.empty()) {
      const int ni = static_cast<int>(interior_loc.size());
      const int ns = static_cast<int>(shared_loc.size());
      Eigen::MatrixXd kii(ni, ni), kis(ni, ns), kss(ns, ns);
      for (int i = 0; i < ni; ++i)
        for (int j = 0; j < ni; ++j)
          kii(i, j) = rc.K[static_cast<long>(interior_loc[i]) * m + interior_loc[j]];
      for (int i = 0; i < ni; ++i)
        for (int j = 0; j < ns; ++j)
          kis(i, j) = rc.K[static_cast<long>(interior_loc[i]) * m + shared_loc[j]];
      for (int i = 0; i < ns; ++i)
        for (int j = 0; j < ns; ++j)
          kss(i, j) = rc.K[static_cast<long>(shared_loc[i]) * m + shared_loc[j]];
      rc.kii_inv = kii.ldlt().solve(Eigen::MatrixXd::Identity(ni, ni));
      rc.kii_inv_kis = rc.kii_inv * kis;
      rc.kschur = kss - kis.transpose() * rc.kii_inv_kis;
    }
    return cache.emplace(key, std::move(rc)).first->second;
  }
};

}  // namespace

RmmSolution solve_rmm(const RmmProblem& prob) {
  const Mesh& mesh = *prob.mesh;
  if (mesh.cell_type != CellType::Tet)
    throw std::runtime_error("solve_rmm: tetrahedral meshes only");
  if (!prob.region.empty() &&
      static_cast<int>(prob.region.size()) != mesh.num_cells())
    throw std::invalid_argument("solve_rmm: region size mismatch");

  const ScalarTetBasis ubasis = up_basis(prob.disp_order);
  const ElementBasis& peb = element(prob.micro);

  RmmSolution out;
  out.u_dm = build_scalar_dofmap(ubasis, mesh);
  out.p_dm = build_dofmap(peb, mesh);
  const int nsc = ubasis.size();
  const int np = peb.size();
  const int nu_glob = 3 * out.u_dm.n;
  const int n = nu_glob + out.p_dm.n;

  // Essential data: u everywhere on the boundary; P per mode.
  EssentialBc ubc = fit_displacement_trace(mesh, ubasis, out.u_dm, prob.boundary_u);
  EssentialBc pbc;
  if (prob.bc != BcMode::Neumann) {
    MatrixField du_target = prob.boundary_du;
    pbc = fit_tangential_trace(mesh, peb, out.p_dm, du_target,
                               prob.micro == ElementKind::D1);
  } else {
    pbc.constrained.assign(out.p_dm.n, 0);
    pbc.value.assign(out.p_dm.n, 0.0);
  }
  EssentialBc bc;
  bc.constrained.resize(n);
  bc.value.resize(n);
  std::copy(ubc.constrained.begin(), ubc.constrained.end(), bc.constrained.begin());
  std::copy(ubc.value.begin(), ubc.value.end(), bc.value.begin());
  std::copy(pbc.constrained.begin(), pbc.constrained.end(),
            bc.constrained.begin() + nu_glob);
  std::copy(pbc.value.begin(), pbc.value.end(), bc.value.begin() + nu_glob);

  // Combined per-cell dof table: u dofs (3a + r), then P.
  const int nloc = 3 * nsc + np;
  std::vector<int> gdofs(static_cast<long>(mesh.num_cells()) * nloc);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    long base = static_cast<long>(c) * nloc;
    for (int a = 0; a < nsc; ++a)
      for (int r = 0; r < 3; ++r)
        gdofs[base + 3 * a + r] = 3 * out.u_dm.dof(c, a) + r;
    for (int i = 0; i < np; ++i)
      gdofs[base + 3 * nsc + i] = nu_glob + out.p_dm.dof(c, i);
  }

  RmmContext ctx;
  ctx.prob = &prob;
  ctx.ubasis = &ubasis;
  ctx.peb = &peb;
  ctx.rule = tet_rule(2 * std::max(peb.degree, prob.disp_order) + 2);
  ctx.nloc = nloc;
  ctx.nsc = nsc;
  ctx.np = np;
  for (int a = 0; a < nsc; ++a)
    for (int r = 0; r < 3; ++r) {
      if (prob.condense && ubasis.fns[a].kind == Polytope::Cell)
        ctx.interior_loc.push_back(3 * a + r);
      else
        ctx.shared_loc.push_back(3 * a + r);
    }
  for (int i = 0; i < np; ++i) {
    if (prob.condense && peb.fns[i].entity_kind == Polytope::Cell)
      ctx.interior_loc.push_back(3 * nsc + i);
    else
      ctx.shared_loc.push_back(3 * nsc + i);
  }

  GlobalSystem sys;
  sys.n = n;
  sys.ncells = mesh.num_cells();
  sys.nloc = nloc;
  sys.gdofs = gdofs.data();
  sys.eliminated.assign(nloc, 0);
  if (prob.condense)
    for (int l : ctx.interior_loc) sys.eliminated[l] = 1;
  sys.bc = &bc;
  sys.build_pattern();

  std::vector<int> all_loc(nloc);
  for (int l = 0; l < nloc; ++l) all_loc[l] = l;
  const int ns = static_cast<int>(ctx.shared_loc.size());
  const int ni = static_cast<int>(ctx.interior_loc.size());
  std::vector<double> kbuf;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const RmmClass& rc = ctx.cell_class(c);
    if (!prob.condense || ni == 0) {
      sys.add_cell(c, all_loc, rc.K.data(), nullptr);
    } else {
      kbuf.resize(static_cast<long>(ns) * ns);
      for (int i = 0; i < ns; ++i)
        for (int j = 0; j < ns; ++j)
          kbuf[static_cast<long>(i) * ns + j] = rc.kschur(i, j);
      sys.add_cell(c, ctx.shared_loc, kbuf.data(), nullptr);
    }
  }
  sys.finalize();

  CgOptions cg;
  cg.rel_tol = prob.rel_tol;
  std::vector<double> x(n, 0.0);
  for (int d = 0; d < n; ++d)
    if (bc.constrained[d]) x[d] = bc.value[d];
  auto res = cg_solve(sys.A, sys.rhs, x, cg);
  if (!res.converged)
    throw std::runtime_error("two-field CG stalled at relative residual " +
                             std::to_string(res.rel_residual));
  out.stats.cg_iters = res.iters;
  out.stats.cg_residual = res.rel_residual;
  out.stats.total_dofs = n;
  out.stats.free_dofs = n - static_cast<int>(bc.count()) -
                        (prob.condense ? ni * mesh.num_cells() : 0);

  if (prob.condense && ni > 0) {
    for (int c = 0; c < mesh.num_cells(); ++c) {
      const RmmClass& rc = ctx.cell_class(c);
      const int* gd = gdofs.data() + static_cast<long>(c) * nloc;
      Eigen::VectorXd xs(ns);
      for (int i = 0; i < ns; ++i) xs(i) = x[gd[ctx.shared_loc[i]]];
      Eigen::VectorXd xi = -rc.kii_inv_kis * xs;  // zero interior load
      for (int i = 0; i < ni; ++i) x[gd[ctx.interior_loc[i]]] = xi(i);
    }
  }

  out.u.assign(x.begin(), x.begin() + nu_glob);
  out.p.assign(x.begin() + nu_glob, x.end());

  // Energy 1/2 x^T K x summed per cell from the cached full local matrices.
  double energy = 0.0;
  std::vector<double> xl(nloc);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const RmmClass& rc = ctx.cell_class(c);
    const int* gd = gdofs.data() + static_cast<long>(c) * nloc;
    for (int l = 0; l < nloc; ++l) xl[l] = x[gd[l]];
    double cell_e = 0.0;
    for (int i = 0; i < nloc; ++i) {
      double row = 0.0;
      for (int j = 0; j < nloc; ++j)
        row += rc.K[static_cast<long>(i) * nloc + j] * xl[j];
      cell_e += xl[i] * row;
    }
    energy += 0.5 * cell_e;
  }
  out.energy = energy;
  return out;
}

}  // namespace rmfem
