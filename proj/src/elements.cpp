#include "rmfem/elements.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace rmfem {

namespace {

// Edge index of a slot pair (kTetEdges order), -1 on the diagonal.
constexpr int kEdgeOfPair[4][4] = {
    {-1, 0, 1, 2},
    {0, -1, 3, 4},
    {1, 3, -1, 5},
    {2, 4, 5, -1},
};

// Edges of face f by position: (a,b), (a,c), (b,c) for face slots a < b < c.
int face_edge(int f, int pos) {
  const auto& fv = kTetFaces[f];
  switch (pos) {
    case 0: return kEdgeOfPair[fv[0]][fv[1]];
    case 1: return kEdgeOfPair[fv[0]][fv[2]];
    default: return kEdgeOfPair[fv[1]][fv[2]];
  }
}

Vec3 basis_vec(int r) {
  return Vec3{r == 0 ? 1.0 : 0.0, r == 1 ? 1.0 : 0.0, r == 2 ? 1.0 : 0.0};
}

// Face kernel exponents (i,j) with i >= 2, j >= 1, i + j <= p, lexicographic.
std::vector<std::array<int, 2>> face_kernel_indices(int p) {
  std::vector<std::array<int, 2>> out;
  for (int i = 2; i <= p - 1; ++i)
    for (int j = 1; i + j <= p; ++j) out.push_back({i, j});
  return out;
}

// Cell monomial exponents (a,b,c) with a + b + c <= p - 4, lexicographic.
std::vector<std::array<int, 3>> cell_kernel_indices(int p) {
  std::vector<std::array<int, 3>> out;
  for (int a = 0; a <= p - 4; ++a)
    for (int b = 0; a + b <= p - 4; ++b)
      for (int c = 0; a + b + c <= p - 4; ++c) out.push_back({a, b, c});
  return out;
}

// The sl(3) basis used by the deviatoric linear element.
std::array<Mat3, 8> sl3_basis() {
  std::array<Mat3, 8> B{};
  auto unit = [](int a, int b) {
    Mat3 m{};
    m(a, b) = 1.0;
    return m;
  };
  B[0] = unit(0, 1);
  B[1] = unit(0, 2);
  B[2] = unit(1, 0);
  B[3] = unit(1, 2);
  B[4] = unit(2, 0);
  B[5] = unit(2, 1);
  B[6] = unit(0, 0) - unit(1, 1);
  B[7] = unit(1, 1) - unit(2, 2);
  return B;
}

struct YpShape {
  int p = 2;
  bool reduced = false;  // M variant: identity block stops at degree p
  int id_order() const { return reduced ? p : p + 1; }
  int per_edge() const { return 6 + 2 * (p - 1); }
  int per_face() const {
    return 9 * (p - 1) + 5 * static_cast<int>(face_kernel_indices(p).size());
  }
  int identities() const {
    int q = id_order();
    return 6 * (q - 1) + 4 * static_cast<int>(face_kernel_indices(q).size()) +
           static_cast<int>(cell_kernel_indices(q).size());
  }
  int per_cell() const {
    int face_cell = (p >= 3)
        ? 3 * 4 * static_cast<int>(face_kernel_indices(p).size())
        : 0;
    return identities() + face_cell;
  }
};

ElementBasis build(ElementKind kind) {
  ElementBasis eb;
  eb.kind = kind;
  auto add_block = [&eb](Polytope pk, int count, int per, bool hcurl) {
    for (int e = 0; e < count; ++e)
      for (int c = 0; c < per; ++c) eb.fns.push_back({pk, e, c, hcurl});
  };
  auto add_cell = [&eb](int from, int count, bool hcurl) {
    for (int c = from; c < from + count; ++c)
      eb.fns.push_back({Polytope::Cell, 0, c, hcurl});
  };

  switch (kind) {
    case ElementKind::NedelecI0:
      eb.order = 0;
      eb.degree = 1;
      eb.per_edge = 3;
      add_block(Polytope::Edge, 6, 3, true);
      break;
    case ElementKind::NedelecII1:
      eb.order = 1;
      eb.degree = 1;
      eb.per_edge = 6;
      add_block(Polytope::Edge, 6, 6, true);
      break;
    case ElementKind::Y0:
      eb.order = 0;
      eb.degree = 1;
      eb.per_edge = 3;
      eb.per_cell = 3;
      add_block(Polytope::Edge, 6, 3, true);
      add_cell(0, 3, false);
      break;
    case ElementKind::S0:
      eb.order = 0;
      eb.degree = 2;
      eb.per_edge = 3;
      eb.per_cell = 9;
      add_block(Polytope::Edge, 6, 3, true);
      add_cell(0, 9, false);
      break;
    case ElementKind::Y1:
      eb.order = 1;
      eb.degree = 2;
      eb.per_edge = 6;
      eb.per_cell = 6;
      add_block(Polytope::Edge, 6, 6, true);
      add_cell(0, 6, false);
      break;
    case ElementKind::S1:
      eb.order = 1;
      eb.degree = 3;
      eb.per_edge = 6;
      eb.per_cell = 16;
      add_block(Polytope::Edge, 6, 6, true);
      add_cell(0, 16, false);
      break;
    case ElementKind::Y2:
    case ElementKind::M2:
    case ElementKind::Y3:
    case ElementKind::M3: {
      YpShape s;
      s.p = (kind == ElementKind::Y2 || kind == ElementKind::M2) ? 2 : 3;
      s.reduced = (kind == ElementKind::M2 || kind == ElementKind::M3);
      eb.order = s.p;
      eb.degree = s.reduced ? s.p : s.p + 1;
      eb.per_edge = s.per_edge();
      eb.per_face = s.per_face();
      eb.per_cell = s.per_cell();
      add_block(Polytope::Edge, 6, eb.per_edge, true);
      add_block(Polytope::Face, 4, eb.per_face, true);
      add_cell(0, s.identities(), false);
      add_cell(s.identities(), eb.per_cell - s.identities(), true);
      break;
    }
    case ElementKind::HexS0:
      eb.cell_type = CellType::Hex;
      eb.order = 0;
      eb.degree = 3;
      eb.per_vertex = 2;
      eb.per_edge = 2;
      eb.per_cell = 8;
      add_block(Polytope::Vertex, 8, 2, true);
      add_block(Polytope::Edge, 12, 2, true);
      add_cell(0, 8, false);
      break;
    case ElementKind::L1Mat:
      eb.order = 1;
      eb.degree = 1;
      eb.per_vertex = 9;
      add_block(Polytope::Vertex, 4, 9, true);
      break;
    case ElementKind::D1:
      eb.order = 1;
      eb.degree = 1;
      eb.per_vertex = 8;
      eb.per_cell = 4;
      add_block(Polytope::Vertex, 4, 8, true);
      add_cell(0, 4, false);
      break;
  }
  return eb;
}

}  // namespace

const ElementBasis& element(ElementKind kind) {
  static const std::map<ElementKind, ElementBasis>* reg = [] {
    auto* m = new std::map<ElementKind, ElementBasis>;
    for (ElementKind k : all_element_kinds()) (*m)[k] = build(k);
    return m;
  }();
  return reg->at(kind);
}

const std::vector<ElementKind>& all_element_kinds() {
  static const std::vector<ElementKind> kinds = {
      ElementKind::NedelecI0, ElementKind::NedelecII1, ElementKind::Y0,
      ElementKind::S0,        ElementKind::Y1,         ElementKind::S1,
      ElementKind::Y2,        ElementKind::M2,         ElementKind::Y3,
      ElementKind::M3,        ElementKind::HexS0,      ElementKind::L1Mat,
      ElementKind::D1,
  };
  return kinds;
}

std::string element_name(ElementKind kind) {
  switch (kind) {
    case ElementKind::NedelecI0: return "NI0";
    case ElementKind::NedelecII1: return "NII1";
    case ElementKind::Y0: return "Y0";
    case ElementKind::S0: return "S0";
    case ElementKind::Y1: return "Y1";
    case ElementKind::S1: return "S1";
    case ElementKind::Y2: return "Y2";
    case ElementKind::M2: return "M2";
    case ElementKind::Y3: return "Y3";
    case ElementKind::M3: return "M3";
    case ElementKind::HexS0: return "HexS0";
    case ElementKind::L1Mat: return "L1";
    case ElementKind::D1: return "D1";
  }
  return "?";
}

std::optional<ElementKind> parse_element(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  s.erase(std::remove(s.begin(), s.end(), '_'), s.end());
  for (ElementKind k : all_element_kinds()) {
    std::string n = element_name(k);
    std::transform(n.begin(), n.end(), n.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (s == n) return k;
  }
  if (s == "l1mat") return ElementKind::L1Mat;
  if (s == "hexs0" || s == "hex") return ElementKind::HexS0;
  return std::nullopt;
}

void orthogonal_pair(const Vec3& t, Vec3& d1, Vec3& d2) {
  auto sgn = [](double x) { return x >= 0.0 ? 1.0 : -1.0; };
  d2 = Vec3{sgn(t.x) * std::abs(t.z), sgn(t.y) * std::abs(t.z),
            -sgn(t.z) * (std::abs(t.x) + std::abs(t.y))};
  d1 = cross(d2, t);
}

TemplateFrame template_frame(const Mesh& mesh, int cell) {
  if (mesh.cell_type != CellType::Tet)
    throw std::runtime_error("template_frame: tetrahedral meshes only");
  TemplateFrame fr;
  const int* cv = mesh.cell(cell);
  std::array<int, 4> perm = {0, 1, 2, 3};
  std::sort(perm.begin(), perm.end(),
            [cv](int a, int b) { return cv[a] < cv[b]; });
  fr.sorted_to_storage = perm;
  for (int s = 0; s < 4; ++s) {
    fr.sorted_vertices[s] = cv[perm[s]];
    fr.vertex[s] = mesh.vertices[fr.sorted_vertices[s]];
  }
  for (int e = 0; e < 6; ++e) {
    int a = kTetEdges[e][0], b = kTetEdges[e][1];
    fr.t[e] = fr.vertex[b] - fr.vertex[a];
    orthogonal_pair(fr.t[e], fr.d1[e], fr.d2[e]);
  }
  for (int f = 0; f < 4; ++f) {
    int a = kTetFaces[f][0], b = kTetFaces[f][1], c = kTetFaces[f][2];
    fr.normal[f] = cross(fr.vertex[b] - fr.vertex[a], fr.vertex[c] - fr.vertex[a]);
    std::array<int, 3> face_slots = {a, b, c};
    int opp = 6 - a - b - c;  // the slot not in the face
    for (int pos = 0; pos < 3; ++pos) {
      int e = face_edge(f, pos);
      int ea = kTetEdges[e][0], eb = kTetEdges[e][1];
      // third vertex of this face, not on the edge
      int q = face_slots[0] + face_slots[1] + face_slots[2] - ea - eb;
      // k is orthogonal to the edge and to the opposite face through the
      // edge, normalised against the in-face direction.
      Vec3 u = cross(fr.t[e], fr.vertex[opp] - fr.vertex[ea]);
      double den = dot(u, fr.vertex[q] - fr.vertex[ea]);
      fr.k[f][pos] = u * (-1.0 / den);
      const Vec3& n = fr.normal[f];
      fr.m[f][pos] = fr.k[f][pos] * dot(n, n) - n * dot(n, fr.k[f][pos]);
    }
  }
  return fr;
}

CellBasis::CellBasis(const ElementBasis& eb, const Mesh& mesh, int cell)
    : eb_(&eb), map_(element_map(mesh, cell)) {
  if (eb.cell_type != mesh.cell_type)
    throw std::runtime_error("CellBasis: element/mesh cell type mismatch");
  if (mesh.cell_type == CellType::Tet) {
    frame_ = template_frame(mesh, cell);
    double lam[4];
    Vec3 gref[4];
    tet_barycentric(Vec3{0.25, 0.25, 0.25}, lam, gref);
    for (int s = 0; s < 4; ++s)
      grad_lam_[s] = matvec(map_.JinvT, gref[frame_.sorted_to_storage[s]]);
    for (int e = 0; e < 6; ++e) {
      int a = kTetEdges[e][0], b = kTetEdges[e][1];
      whitney_curl_[e] = cross(grad_lam_[a], grad_lam_[b]) * 2.0;
    }
  } else {
    for (int d = 0; d < 3; ++d) hex_h_[d] = map_.J(d, d);
    const int* cv = mesh.cell(cell);
    for (int e = 0; e < 12; ++e) {
      Vec3 dv = mesh.vertices[cv[kHexEdges[e][1]]] -
                mesh.vertices[cv[kHexEdges[e][0]]];
      int axis = 0;
      double best = std::abs(dv.x);
      if (std::abs(dv.y) > best) { axis = 1; best = std::abs(dv.y); }
      if (std::abs(dv.z) > best) axis = 2;
      int mu = (axis + 1) % 3, nu = (axis + 2) % 3;
      Mat3 tmu{}, tnu{};
      tmu(mu, axis) = hex_h_[mu] / hex_h_[axis];
      tnu(nu, axis) = hex_h_[nu] / hex_h_[axis];
      hex_edge_mat_[e] = tmu;
      hex_edge_pair_[e] = tnu;
    }
  }
}

void CellBasis::eval(const Vec3& xi, Mat3* value, Mat3* symcurl) const {
  if (eb_->cell_type == CellType::Tet)
    eval_tet(xi, value, symcurl);
  else
    eval_hex(xi, value, symcurl);
}

namespace {
struct SV {
  double v;
  Vec3 g;
};
}  // namespace

void CellBasis::eval_tet(const Vec3& xi, Mat3* val, Mat3* sc) const {
  double lam_raw[4];
  Vec3 gref_unused[4];
  tet_barycentric(xi, lam_raw, gref_unused);
  double lam[4];
  for (int s = 0; s < 4; ++s) lam[s] = lam_raw[frame_.sorted_to_storage[s]];
  const auto& g = grad_lam_;

  auto edge_kernel = [&](int k, int e) -> SV {
    int a = kTetEdges[e][0], b = kTetEdges[e][1];
    Kernel L = scaled_int_legendre(k, lam[b] - lam[a], lam[a] + lam[b]);
    return {L.v, (g[b] - g[a]) * L.dx + (g[a] + g[b]) * L.dt};
  };
  auto face_kernel = [&](int i, int j, int f) -> SV {
    int a = kTetFaces[f][0], b = kTetFaces[f][1], c = kTetFaces[f][2];
    Kernel E = scaled_int_legendre(i, lam[b] - lam[a], lam[a] + lam[b]);
    double w = lam[a] + lam[b] + lam[c];
    Kernel Q = scaled_legendre(j - 1, 2.0 * lam[c] - w, w);
    Vec3 gE = (g[b] - g[a]) * E.dx + (g[a] + g[b]) * E.dt;
    Vec3 gw = g[a] + g[b] + g[c];
    Vec3 gQ = (g[c] * 2.0 - gw) * Q.dx + gw * Q.dt;
    return {E.v * lam[c] * Q.v,
            gE * (lam[c] * Q.v) + g[c] * (E.v * Q.v) + gQ * (E.v * lam[c])};
  };
  auto monomial = [&](std::array<int, 4> e) -> SV {
    double v = 1.0;
    for (int s = 0; s < 4; ++s) v *= std::pow(lam[s], e[s]);
    Vec3 gr{0, 0, 0};
    for (int s = 0; s < 4; ++s) {
      if (e[s] == 0) continue;
      double part = e[s] * std::pow(lam[s], e[s] - 1);
      for (int r = 0; r < 4; ++r)
        if (r != s) part *= std::pow(lam[r], e[r]);
      gr = gr + g[s] * part;
    }
    return {v, gr};
  };

  int idx = 0;
  auto emit = [&](const Mat3& C, const SV& s) {
    val[idx] = C * s.v;
    sc[idx] = sym(cross_rows(C, s.g)) * (-1.0);
    ++idx;
  };
  auto emit_whitney = [&](int e, int r) {
    int a = kTetEdges[e][0], b = kTetEdges[e][1];
    Vec3 w = g[b] * lam[a] - g[a] * lam[b];
    val[idx] = outer(basis_vec(r), w);
    sc[idx] = sym(outer(basis_vec(r), whitney_curl_[e]));
    ++idx;
  };
  auto emit_gradient = [&](int e, int r) {
    SV s = edge_kernel(2, e);
    val[idx] = outer(basis_vec(r), s.g);
    sc[idx] = Mat3{};  // rows are gradients, exactly curl-free
    ++idx;
  };
  const Mat3 I = identity3();
  Vec3 x = map_.map(xi);
  Vec3 c = map_.map(Vec3{0.25, 0.25, 0.25});
  auto linear_coord = [&](int i) -> SV {
    return {x[i] - c[i], basis_vec(i)};
  };

  switch (eb_->kind) {
    case ElementKind::NedelecI0:
      for (int e = 0; e < 6; ++e)
        for (int r = 0; r < 3; ++r) emit_whitney(e, r);
      break;
    case ElementKind::NedelecII1:
      for (int e = 0; e < 6; ++e) {
        for (int r = 0; r < 3; ++r) emit_whitney(e, r);
        for (int r = 0; r < 3; ++r) emit_gradient(e, r);
      }
      break;
    case ElementKind::Y0:
      for (int e = 0; e < 6; ++e)
        for (int r = 0; r < 3; ++r) emit_whitney(e, r);
      for (int i = 0; i < 3; ++i) emit(I, linear_coord(i));
      break;
    case ElementKind::S0:
      for (int e = 0; e < 6; ++e)
        for (int r = 0; r < 3; ++r) emit_whitney(e, r);
      for (int i = 0; i < 3; ++i) emit(I, linear_coord(i));
      for (int e = 0; e < 6; ++e) emit(I, edge_kernel(2, e));
      break;
    case ElementKind::Y1:
      for (int e = 0; e < 6; ++e) {
        for (int r = 0; r < 3; ++r) emit_whitney(e, r);
        for (int r = 0; r < 3; ++r) emit_gradient(e, r);
      }
      for (int e = 0; e < 6; ++e) emit(I, edge_kernel(2, e));
      break;
    case ElementKind::S1:
      for (int e = 0; e < 6; ++e) {
        for (int r = 0; r < 3; ++r) emit_whitney(e, r);
        for (int r = 0; r < 3; ++r) emit_gradient(e, r);
      }
      for (int e = 0; e < 6; ++e) emit(I, edge_kernel(2, e));
      for (int e = 0; e < 6; ++e) emit(I, edge_kernel(3, e));
      for (int f = 0; f < 4; ++f) emit(I, face_kernel(2, 1, f));
      break;
    case ElementKind::Y2:
    case ElementKind::M2:
    case ElementKind::Y3:
    case ElementKind::M3: {
      int p = eb_->order;
      bool reduced = (eb_->kind == ElementKind::M2 || eb_->kind == ElementKind::M3);
      int id_order = reduced ? p : p + 1;
      for (int e = 0; e < 6; ++e) {
        for (int r = 0; r < 3; ++r) emit_whitney(e, r);
        for (int r = 0; r < 3; ++r) emit_gradient(e, r);
        for (int k = 2; k <= p; ++k) {
          SV s = edge_kernel(k, e);
          emit(outer(frame_.d1[e], frame_.t[e]), s);
          emit(outer(frame_.d2[e], frame_.t[e]), s);
        }
      }
      for (int f = 0; f < 4; ++f) {
        const Vec3& nf = frame_.normal[f];
        for (int pos = 0; pos < 3; ++pos) {
          int e = face_edge(f, pos);
          const Vec3& kv = frame_.k[f][pos];
          for (int k = 2; k <= p; ++k) {
            SV s = edge_kernel(k, e);
            emit(outer(frame_.t[e], kv), s);
            emit(outer(frame_.m[f][pos], kv), s);
            emit(outer(nf, kv), s);
          }
        }
        if (p >= 3) {
          const Vec3& t0 = frame_.t[face_edge(f, 0)];
          const Vec3& m0 = frame_.m[f][0];
          for (auto [i, j] : face_kernel_indices(p)) {
            SV s = face_kernel(i, j, f);
            emit(outer(t0, m0), s);
            emit(outer(m0, t0), s);
            emit(outer(t0, t0) - outer(m0, m0), s);
            emit(outer(nf, t0), s);
            emit(outer(nf, m0), s);
          }
        }
      }
      for (int e = 0; e < 6; ++e)
        for (int k = 2; k <= id_order; ++k) emit(I, edge_kernel(k, e));
      for (int f = 0; f < 4; ++f)
        for (auto [i, j] : face_kernel_indices(id_order))
          emit(I, face_kernel(i, j, f));
      for (auto [a, b, c3] : cell_kernel_indices(id_order))
        emit(I, monomial({1 + a, 1 + b, 1 + c3, 1}));
      if (p >= 3) {
        for (int f = 0; f < 4; ++f) {
          const Vec3& nf = frame_.normal[f];
          const Vec3& t0 = frame_.t[face_edge(f, 0)];
          const Vec3& m0 = frame_.m[f][0];
          for (auto [i, j] : face_kernel_indices(p)) {
            SV s = face_kernel(i, j, f);
            emit(outer(t0, nf), s);
            emit(outer(m0, nf), s);
            emit(outer(nf, nf), s);
          }
        }
      }
      break;
    }
    case ElementKind::L1Mat:
      for (int v = 0; v < 4; ++v)
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            emit(outer(basis_vec(a), basis_vec(b)), SV{lam[v], g[v]});
      break;
    case ElementKind::D1: {
      static const std::array<Mat3, 8> B = sl3_basis();
      for (int v = 0; v < 4; ++v)
        for (const Mat3& b : B) emit(b, SV{lam[v], g[v]});
      emit(I, SV{1.0, Vec3{0, 0, 0}});
      for (int i = 0; i < 3; ++i) emit(I, linear_coord(i));
      break;
    }
    case ElementKind::HexS0:
      throw std::logic_error("eval_tet called for hex element");
  }
}

void CellBasis::eval_hex(const Vec3& xi, Mat3* val, Mat3* sc) const {
  double lv[8];
  Vec3 gref[8];
  hex_q1(xi, lv, gref);
  Vec3 g[8];
  for (int v = 0; v < 8; ++v) g[v] = matvec(map_.JinvT, gref[v]);

  int idx = 0;
  auto emit = [&](const Mat3& C, double v, const Vec3& gr) {
    val[idx] = C * v;
    sc[idx] = sym(cross_rows(C, gr)) * (-1.0);
    ++idx;
  };
  Mat3 e11_22{}, e22_33{};
  e11_22(0, 0) = 1.0;
  e11_22(1, 1) = -1.0;
  e22_33(1, 1) = 1.0;
  e22_33(2, 2) = -1.0;
  for (int v = 0; v < 8; ++v) {
    emit(e11_22, lv[v], g[v]);
    emit(e22_33, lv[v], g[v]);
  }
  for (int e = 0; e < 12; ++e) {
    int a = kHexEdges[e][0], b = kHexEdges[e][1];
    double v = lv[a] + lv[b];
    Vec3 gr = g[a] + g[b];
    emit(hex_edge_mat_[e], v, gr);
    emit(hex_edge_pair_[e], v, gr);
  }
  const Mat3 I = identity3();
  for (int v = 0; v < 8; ++v) emit(I, lv[v], g[v]);
}

}  // namespace rmfem
