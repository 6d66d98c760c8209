#include "rmfem/sequence.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rmfem/quadrature.hpp"

#include "json.hpp"

namespace rmfem {

namespace {

constexpr double kRankTol = 1e-9;

Mesh reference_tet() {
  return make_tet_mesh(
      {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}},
      {{{0, 1, 2, 3}}});
}

Mesh mapped_tet() {
  return make_tet_mesh(
      {{0.12, 0.07, -0.05}, {0.25, 0.18, 1.08}, {-0.2, 0.95, 0.3},
       {1.15, 0.12, 0.22}},
      {{{0, 1, 2, 3}}});
}

Mesh reference_hex() { return box_hex_mesh({0, 1, 0, 1, 0, 1}, {1, 1, 1}); }

Mesh mapped_hex() { return box_hex_mesh({0, 1.7, 0, 0.9, 0, 1.3}, {1, 1, 1}); }

struct Sampler {
  QuadRule rule;
  std::vector<Vec3> x;    // physical points
  std::vector<double> sw;  // sqrt(w * detJ)
};

Sampler make_sampler(const Mesh& mesh, int cell, int degree) {
  Sampler s;
  s.rule = mesh.cell_type == CellType::Tet ? tet_rule(degree) : hex_rule(degree);
  const ElementMap map = element_map(mesh, cell);
  s.x.resize(s.rule.size());
  s.sw.resize(s.rule.size());
  for (int q = 0; q < s.rule.size(); ++q) {
    s.x[q] = map.map(s.rule.points[q]);
    s.sw[q] = std::sqrt(s.rule.weights[q] * map.detJ);
  }
  return s;
}

void put_sample(SpanTab& tab, int col, int q, double sw, const Mat3& m) {
  double* c = tab.col(col);
  for (int k = 0; k < 9; ++k) c[9 * q + k] = sw * m.a[k];
}

double col_norm(const SpanTab& tab, int c) {
  const double* p = tab.col(c);
  double s = 0.0;
  for (int r = 0; r < tab.rows; ++r) s += p[r] * p[r];
  return std::sqrt(s);
}

void scale_col(SpanTab& tab, int c, double f) {
  double* p = tab.col(c);
  for (int r = 0; r < tab.rows; ++r) p[r] *= f;
}

SpanTab normalized(const SpanTab& tab) {
  SpanTab out = tab;
  for (int c = 0; c < out.cols; ++c) {
    const double n = col_norm(out, c);
    if (n > 0.0) scale_col(out, c, 1.0 / n);
  }
  return out;
}

Eigen::MatrixXd to_eigen(const SpanTab& tab) {
  return Eigen::Map<const Eigen::MatrixXd>(tab.a.data(), tab.rows, tab.cols);
}

struct Monomial {
  int a = 0, b = 0, c = 0;
};

std::vector<Monomial> monomials(int lo, int hi) {
  std::vector<Monomial> out;
  for (int d = lo; d <= hi; ++d)
    for (int a = d; a >= 0; --a)
      for (int b = d - a; b >= 0; --b) out.push_back({a, b, d - a - b});
  return out;
}

double mono_eval(const Monomial& m, const Vec3& x) {
  return std::pow(x.x, m.a) * std::pow(x.y, m.b) * std::pow(x.z, m.c);
}

Vec3 mono_grad(const Monomial& m, const Vec3& x) {
  auto dpow = [](double v, int e) {
    return e == 0 ? 0.0 : e * std::pow(v, e - 1);
  };
  return {dpow(x.x, m.a) * std::pow(x.y, m.b) * std::pow(x.z, m.c),
          std::pow(x.x, m.a) * dpow(x.y, m.b) * std::pow(x.z, m.c),
          std::pow(x.x, m.a) * std::pow(x.y, m.b) * dpow(x.z, m.c)};
}

SpanTab alloc_tab(const Sampler& s, int cols) {
  SpanTab tab;
  tab.rows = 9 * s.rule.size();
  tab.cols = cols;
  tab.a.assign(static_cast<long>(tab.rows) * cols, 0.0);
  return tab;
}

SpanTab identity_tab(const Sampler& s, const std::vector<Monomial>& ms) {
  SpanTab tab = alloc_tab(s, static_cast<int>(ms.size()));
  const Mat3 I = identity3();
  for (size_t c = 0; c < ms.size(); ++c)
    for (int q = 0; q < s.rule.size(); ++q)
      put_sample(tab, static_cast<int>(c), q, s.sw[q],
                 I * mono_eval(ms[c], s.x[q]));
  return tab;
}

}  // namespace

void SpanTab::append(const SpanTab& other) {
  if (cols == 0 && rows == 0) rows = other.rows;
  if (rows != other.rows)
    throw std::invalid_argument("SpanTab::append: row mismatch");
  a.insert(a.end(), other.a.begin(), other.a.end());
  cols += other.cols;
}

ElementTab tabulate_element(const Mesh& mesh, int cell, ElementKind kind,
                            int degree) {
  const ElementBasis& eb = element(kind);
  const Sampler s = make_sampler(mesh, cell, degree);
  const int nfn = eb.size();
  ElementTab out;
  out.value = alloc_tab(s, nfn);
  out.symcurl = alloc_tab(s, nfn);
  CellBasis cb(eb, mesh, cell);
  std::vector<Mat3> val(nfn), scv(nfn);
  for (int q = 0; q < s.rule.size(); ++q) {
    cb.eval(s.rule.points[q], val.data(), scv.data());
    for (int i = 0; i < nfn; ++i) {
      put_sample(out.value, i, q, s.sw[q], val[i]);
      put_sample(out.symcurl, i, q, s.sw[q], scv[i]);
    }
  }
  for (int i = 0; i < nfn; ++i) {
    const double n = col_norm(out.value, i);
    if (n > 0.0) {
      scale_col(out.value, i, 1.0 / n);
      scale_col(out.symcurl, i, 1.0 / n);
    }
  }
  return out;
}

SpanTab tabulate_dev_gradients(const Mesh& mesh, int cell, int lo, int hi,
                               int degree) {
  const Sampler s = make_sampler(mesh, cell, degree);
  const auto ms = monomials(lo, hi);
  SpanTab tab = alloc_tab(s, 3 * static_cast<int>(ms.size()));
  for (size_t m = 0; m < ms.size(); ++m)
    for (int r = 0; r < 3; ++r) {
      const int c = 3 * static_cast<int>(m) + r;
      Vec3 er{r == 0 ? 1.0 : 0.0, r == 1 ? 1.0 : 0.0, r == 2 ? 1.0 : 0.0};
      for (int q = 0; q < s.rule.size(); ++q)
        put_sample(tab, c, q, s.sw[q], dev(outer(er, mono_grad(ms[m], s.x[q]))));
    }
  return tab;
}

SpanTab tabulate_identities(const Mesh& mesh, int cell, int lo, int hi,
                            int degree) {
  const Sampler s = make_sampler(mesh, cell, degree);
  return identity_tab(s, monomials(lo, hi));
}

SpanTab tabulate_matrix_polynomials(const Mesh& mesh, int cell, int order,
                                    int degree) {
  const Sampler s = make_sampler(mesh, cell, degree);
  const auto ms = monomials(0, order);
  SpanTab tab = alloc_tab(s, 9 * static_cast<int>(ms.size()));
  for (size_t m = 0; m < ms.size(); ++m)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const int c = 9 * static_cast<int>(m) + 3 * i + j;
        Mat3 E{};
        E(i, j) = 1.0;
        for (int q = 0; q < s.rule.size(); ++q)
          put_sample(tab, c, q, s.sw[q], E * mono_eval(ms[m], s.x[q]));
      }
  return tab;
}

int span_rank(const SpanTab& tab) {
  if (tab.cols == 0) return 0;
  Eigen::MatrixXd A = to_eigen(normalized(tab));
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
  const auto& sig = svd.singularValues();
  if (sig.size() == 0 || sig(0) == 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < sig.size(); ++i)
    if (sig(i) >= kRankTol * sig(0)) ++rank;
  return rank;
}

RankResult symcurl_rank(const Mesh& mesh, int cell, ElementKind kind) {
  const ElementBasis& eb = element(kind);
  const int degree = std::min(2 * eb.degree + 2, 20);
  const ElementTab tab = tabulate_element(mesh, cell, kind, degree);
  Eigen::MatrixXd A = to_eigen(tab.symcurl);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
  const auto& sig = svd.singularValues();
  RankResult rr;
  if (sig.size() > 0 && sig(0) > 0.0)
    for (int i = 0; i < sig.size(); ++i)
      if (sig(i) >= kRankTol * sig(0)) ++rr.rank;
  rr.kernel = tab.symcurl.cols - rr.rank;
  return rr;
}

double subspace_inclusion(const SpanTab& span_a, const SpanTab& span_b) {
  if (span_a.cols == 0) return 0.0;
  if (span_a.rows != span_b.rows)
    throw std::invalid_argument("subspace_inclusion: tabulation mismatch");
  Eigen::MatrixXd B = to_eigen(span_b);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU);
  const auto& sig = svd.singularValues();
  int keep = 0;
  for (int i = 0; i < sig.size(); ++i)
    if (sig(0) > 0.0 && sig(i) >= 1e-12 * sig(0)) ++keep;
  Eigen::MatrixXd U = svd.matrixU().leftCols(keep);
  double worst = 0.0;
  for (int c = 0; c < span_a.cols; ++c) {
    Eigen::Map<const Eigen::VectorXd> a(span_a.col(c), span_a.rows);
    const double n = a.norm();
    if (n == 0.0) continue;
    Eigen::VectorXd v = a / n;
    Eigen::VectorXd res = v - U * (U.transpose() * v);
    worst = std::max(worst, res.norm());
  }
  return worst;
}

namespace {

struct Expectation {
  int rank = -1;
  int kernel = -1;
  int dev_hi = -1;  // deviatoric gradient block: monomial degrees [1, dev_hi]
  int id_hi = -1;   // identity block: degrees [0, id_hi]; exclusion at id_hi+1
};

Expectation expectation(ElementKind kind) {
  switch (kind) {
    case ElementKind::NedelecI0: return {6, 12, 1, 0};
    case ElementKind::NedelecII1: return {6, 30, 2, 1};
    case ElementKind::L1Mat: return {6, 30, 2, 1};
    case ElementKind::D1: return {6, 30, 2, 1};
    case ElementKind::Y0: return {6, 15, 1, 1};
    case ElementKind::S0: return {6, 21, 1, 2};
    case ElementKind::Y1: return {6, 36, 2, 2};
    case ElementKind::S1: return {6, 46, 2, 3};
    case ElementKind::Y2: return {24, 76, 3, 3};
    case ElementKind::M2: return {24, 66, 3, 2};
    case ElementKind::Y3: return {59, 136, 4, 4};
    case ElementKind::M3: return {59, 121, 4, 3};
    case ElementKind::HexS0: return {-1, -1, -1, -1};
  }
  return {};
}

}  // namespace

SequenceReport sequence_report(ElementKind kind) {
  const ElementBasis& eb = element(kind);
  const bool tet = eb.cell_type == CellType::Tet;
  const Mesh m1 = tet ? reference_tet() : reference_hex();
  const Mesh m2 = tet ? mapped_tet() : mapped_hex();
  const int degree = std::min(2 * eb.degree + 2, 20);
  const Expectation ex = expectation(kind);

  SequenceReport rep;
  rep.kind = kind;
  rep.dim = eb.size();
  const RankResult r1 = symcurl_rank(m1, 0, kind);
  const RankResult r2 = symcurl_rank(m2, 0, kind);
  rep.rank = r1.rank;
  rep.kernel = r1.kernel;
  rep.expected_rank = ex.rank;
  rep.expected_kernel = ex.kernel;
  rep.mapped_cell_consistent = r1.rank == r2.rank && r1.kernel == r2.kernel;

  const ElementTab tab = tabulate_element(m1, 0, kind, degree);

  // Identity-template functions must have an exactly vanishing sym Curl.
  int n_ids = 0;
  double id_norm = 0.0;
  for (int i = 0; i < eb.size(); ++i)
    if (eb.fns[i].entity_kind == Polytope::Cell && !eb.fns[i].hcurl) {
      ++n_ids;
      const double* c = tab.symcurl.col(i);
      for (int r = 0; r < tab.symcurl.rows; ++r)
        id_norm = std::max(id_norm, std::abs(c[r]));
    }
  rep.identity_symcurl_norm = id_norm;

  const Sampler s = make_sampler(m1, 0, degree);
  if (tet) {
    if (ex.dev_hi >= 1) {
      const SpanTab devs = tabulate_dev_gradients(m1, 0, 1, ex.dev_hi, degree);
      rep.dev_grad_residual = subspace_inclusion(devs, tab.value);
    }
    if (ex.id_hi >= 0) {
      const SpanTab ids = tabulate_identities(m1, 0, 0, ex.id_hi, degree);
      rep.identity_residual = subspace_inclusion(ids, tab.value);
      const SpanTab excl =
          tabulate_identities(m1, 0, ex.id_hi + 1, ex.id_hi + 1, degree);
      rep.excluded_identity_residual = subspace_inclusion(excl, tab.value);
    }
  } else {
    // Hexahedron: the identity block spans q * Identity over the trilinear
    // scalars; one degree up (x^2) must stay outside.
    std::vector<Monomial> q1;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) q1.push_back({a, b, c});
    rep.identity_residual = subspace_inclusion(identity_tab(s, q1), tab.value);
    rep.excluded_identity_residual =
        subspace_inclusion(identity_tab(s, {{2, 0, 0}}), tab.value);
  }

  rep.pass = rep.rank + rep.kernel == rep.dim && rep.mapped_cell_consistent &&
             rep.kernel >= n_ids && rep.identity_symcurl_norm <= 1e-12;
  if (rep.expected_rank >= 0)
    rep.pass = rep.pass && rep.rank == rep.expected_rank &&
               rep.kernel == rep.expected_kernel;
  if (rep.dev_grad_residual >= 0.0)
    rep.pass = rep.pass && rep.dev_grad_residual <= 1e-10;
  if (rep.identity_residual >= 0.0)
    rep.pass = rep.pass && rep.identity_residual <= 1e-10;
  if (rep.excluded_identity_residual >= 0.0)
    rep.pass = rep.pass && rep.excluded_identity_residual > 0.01;
  return rep;
}

std::vector<SequenceReport> run_sequence_lab() {
  std::vector<SequenceReport> out;
  for (ElementKind k : all_element_kinds()) out.push_back(sequence_report(k));
  return out;
}

StackReport stacked_dependence_report() {
  const Mesh m = reference_tet();
  const int degree = 6;
  const ElementTab y0 = tabulate_element(m, 0, ElementKind::Y0, degree);
  SpanTab stack = y0.value;
  stack.append(tabulate_dev_gradients(m, 0, 2, 2, degree));
  StackReport rep;
  rep.dim = stack.cols;
  rep.rank = span_rank(stack);
  rep.deficiency = rep.dim - rep.rank;
  return rep;
}

std::string sequence_json(const std::vector<SequenceReport>& reports,
                          const StackReport& stack) {
  nlohmann::json j;
  bool all = true;
  j["elements"] = nlohmann::json::array();
  for (const SequenceReport& r : reports) {
    nlohmann::json e;
    e["element"] = element_name(r.kind);
    e["dim"] = r.dim;
    e["rank"] = r.rank;
    e["kernel"] = r.kernel;
    if (r.expected_rank >= 0) {
      e["expected_rank"] = r.expected_rank;
      e["expected_kernel"] = r.expected_kernel;
    }
    e["mapped_cell_consistent"] = r.mapped_cell_consistent;
    if (r.dev_grad_residual >= 0.0)
      e["dev_gradient_residual"] = r.dev_grad_residual;
    if (r.identity_residual >= 0.0)
      e["identity_residual"] = r.identity_residual;
    if (r.excluded_identity_residual >= 0.0)
      e["excluded_identity_residual"] = r.excluded_identity_residual;
    e["identity_symcurl_norm"] = r.identity_symcurl_norm;
    e["pass"] = r.pass;
    all = all && r.pass;
    j["elements"].push_back(e);
  }
  j["stack"] = {{"dim", stack.dim},
                {"rank", stack.rank},
                {"deficiency", stack.deficiency}};
  all = all && stack.deficiency >= 1;
  j["pass"] = all;
  return j.dump(2);
}

}  // namespace rmfem
