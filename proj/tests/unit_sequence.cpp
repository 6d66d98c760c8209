#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "rmfem/sequence.hpp"

using namespace rmfem;

namespace {

Mesh one_tet() {
  return make_tet_mesh({{0.12, 0.07, -0.05},
                        {0.25, 0.18, 1.08},
                        {-0.2, 0.95, 0.3},
                        {1.15, 0.12, 0.22}},
                       {{0, 1, 2, 3}});
}

}  // namespace

TEST_CASE("rank and kernel of the symmetric curl per element") {
  const std::map<ElementKind, RankResult> frozen = {
      {ElementKind::NedelecI0, {6, 12}}, {ElementKind::NedelecII1, {6, 30}},
      {ElementKind::L1Mat, {6, 30}},     {ElementKind::D1, {6, 30}},
      {ElementKind::Y0, {6, 15}},        {ElementKind::S0, {6, 21}},
      {ElementKind::Y1, {6, 36}},        {ElementKind::S1, {6, 46}},
      {ElementKind::Y2, {24, 76}},       {ElementKind::M2, {24, 66}},
      {ElementKind::Y3, {59, 136}},      {ElementKind::M3, {59, 121}},
  };
  const Mesh tet = one_tet();
  for (const auto& [kind, expect] : frozen) {
    const RankResult rr = symcurl_rank(tet, 0, kind);
    CHECK(rr.rank == expect.rank);
    CHECK(rr.kernel == expect.kernel);
    CHECK(rr.rank + rr.kernel == element(kind).size());
  }
  // the reduced space drops exactly the ten cubic identity fields
  CHECK(frozen.at(ElementKind::Y2).kernel - frozen.at(ElementKind::M2).kernel == 10);
}

TEST_CASE("sequence lab passes for the whole zoo") {
  const std::vector<SequenceReport> reports = run_sequence_lab();
  CHECK(reports.size() == all_element_kinds().size());
  for (const SequenceReport& r : reports) {
    INFO("element ", element_name(r.kind));
    CHECK(r.pass);
    CHECK(r.rank + r.kernel == r.dim);
    CHECK(r.mapped_cell_consistent);
    CHECK(r.identity_symcurl_norm <= 1e-12);
    if (r.expected_rank >= 0) CHECK(r.rank == r.expected_rank);
  }
}

TEST_CASE("linear identity fields are not spanned by the plain edge space") {
  const Mesh tet = one_tet();
  const int degree = 6;
  const ElementTab ni0 =
      tabulate_element(tet, 0, ElementKind::NedelecI0, degree);
  const SpanTab linear_ids = tabulate_identities(tet, 0, 1, 1, degree);
  CHECK(subspace_inclusion(linear_ids, ni0.value) > 0.1);
  // while the constant identity is (rows are constant vectors)
  const SpanTab const_id = tabulate_identities(tet, 0, 0, 0, degree);
  CHECK(subspace_inclusion(const_id, ni0.value) <= 1e-10);
}

TEST_CASE("tabulation helpers produce the expected spans") {
  const Mesh tet = one_tet();
  const int degree = 6;
  const SpanTab full_linear = tabulate_matrix_polynomials(tet, 0, 1, degree);
  CHECK(full_linear.cols == 36);
  CHECK(span_rank(full_linear) == 36);
  // deviatoric gradients of quadratics are traceless linear fields
  const SpanTab devs = tabulate_dev_gradients(tet, 0, 2, 2, degree);
  CHECK(devs.cols == 18);
  CHECK(subspace_inclusion(devs, full_linear) <= 1e-10);
  const SpanTab ids = tabulate_identities(tet, 0, 0, 1, degree);
  CHECK(ids.cols == 4);
  CHECK(span_rank(ids) == 4);
  CHECK(subspace_inclusion(ids, full_linear) <= 1e-10);
}

TEST_CASE("stacked span is linearly dependent") {
  // Y0 plus the deviatoric gradients of all quadratics overlap in the
  // three-parameter family Q_i = sym(e_i g^T): the stacked 39 columns have
  // rank 36.
  const StackReport st = stacked_dependence_report();
  CHECK(st.dim == 39);
  CHECK(st.deficiency >= 1);
  CHECK(st.deficiency == 3);
  CHECK(st.rank == 36);
  CHECK(st.rank < 45);
}

TEST_CASE("json summary carries the verdicts") {
  const std::vector<SequenceReport> reports = {
      sequence_report(ElementKind::Y0), sequence_report(ElementKind::HexS0)};
  const StackReport st = stacked_dependence_report();
  const std::string js = sequence_json(reports, st);
  CHECK(js.find("\"element\": \"Y0\"") != std::string::npos);
  CHECK(js.find("\"element\": \"HexS0\"") != std::string::npos);
  CHECK(js.find("\"deficiency\"") != std::string::npos);
  CHECK(js.find("\"pass\": true") != std::string::npos);
}
