// Acceptance suite: ten go/no-go checks covering the element zoo, the
// conformity and kernel structure, the four regularity benchmarks and the
// dilatation experiment. Prints one PASS/FAIL line per criterion on stdout
// (progress goes to stderr) and exits nonzero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rmfem/assembly.hpp"
#include "rmfem/benchmark.hpp"
#include "rmfem/sequence.hpp"

using namespace rmfem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool g_all = true;

void report(int id, bool ok, const std::string& detail) {
  std::printf("C%-2d %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  g_all = g_all && ok;
}

Mesh two_tets() {
  return make_tet_mesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}},
                       {{0, 1, 2, 3}, {4, 1, 2, 3}});
}

Mesh one_tet() {
  return make_tet_mesh({{0.12, 0.07, -0.05},
                        {0.25, 0.18, 1.08},
                        {-0.2, 0.95, 0.3},
                        {1.15, 0.12, 0.22}},
                       {{0, 1, 2, 3}});
}

const std::vector<ElementKind>& zoo() {
  static const std::vector<ElementKind> z = {
      ElementKind::NedelecI0, ElementKind::NedelecII1, ElementKind::Y0,
      ElementKind::S0,        ElementKind::Y1,         ElementKind::S1,
      ElementKind::Y2,        ElementKind::M2,         ElementKind::L1Mat,
      ElementKind::D1};
  return z;
}

struct Study {
  double runtime = 0.0;
  std::map<ElementKind, ConvergenceReport> reports;
};

Study run_study(BenchField field) {
  Study st;
  const auto t0 = Clock::now();
  ConvergenceOptions opts;
  opts.levels = 4;
  opts.bc = BcMode::Neumann;
  opts.rel_tol = 1e-10;
  opts.condense = true;
  for (ElementKind kind : zoo()) {
    const auto te = Clock::now();
    st.reports.emplace(kind, run_convergence(kind, field, opts));
    std::fprintf(stderr, "  %s %s done in %.1f s\n", field_name(field),
                 element_name(kind).c_str(), seconds_since(te));
  }
  st.runtime = seconds_since(t0);
  return st;
}

double final_eoc(const Study& st, ElementKind kind) {
  return st.reports.at(kind).levels.back().eoc;
}

bool in_band(double x, double lo, double hi) { return x >= lo && x <= hi; }

// Shared sanity of every study: dof counts strictly increase and the
// relative error never grows under refinement (the spaces nest).
bool study_invariants(const Study& st, std::string& why) {
  for (const auto& [kind, rep] : st.reports) {
    for (size_t k = 1; k < rep.levels.size(); ++k) {
      const auto& a = rep.levels[k - 1];
      const auto& b = rep.levels[k];
      if (b.dofs <= a.dofs) {
        why = std::string(" [dofs not increasing for ") + element_name(kind) + "]";
        return false;
      }
      if (b.rel_l2_error > a.rel_l2_error * (1.0 + 1e-6)) {
        why = std::string(" [error grew for ") + element_name(kind) + "]";
        return false;
      }
    }
  }
  return true;
}

std::string rate_table(const Study& st) {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed;
  for (ElementKind kind : zoo())
    os << ' ' << element_name(kind) << ' ' << final_eoc(st, kind);
  return os.str();
}

// Log-log interpolation of an error curve at a dof count (extrapolates with
// the terminal slope when n lies beyond the last level).
double error_at_dofs(const ConvergenceReport& rep, double n) {
  const auto& lv = rep.levels;
  size_t hi = lv.size() - 1;
  for (size_t k = 1; k < lv.size(); ++k)
    if (lv[k].dofs >= n) {
      hi = k;
      break;
    }
  const auto& a = lv[hi - 1];
  const auto& b = lv[hi];
  const double t = (std::log(n) - std::log(a.dofs)) /
                   (std::log(static_cast<double>(b.dofs)) - std::log(a.dofs));
  return std::exp(std::log(a.rel_l2_error) +
                  t * (std::log(b.rel_l2_error) - std::log(a.rel_l2_error)));
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

}  // namespace

int main() {
  // --- 1: dimension table -------------------------------------------------
  {
    const auto t0 = Clock::now();
    const bool ok = element(ElementKind::Y0).size() == 21 &&
                    element(ElementKind::S0).size() == 27 &&
                    element(ElementKind::Y1).size() == 42 &&
                    element(ElementKind::S1).size() == 52 &&
                    element(ElementKind::Y2).size() == 100 &&
                    element(ElementKind::M2).size() == 90 &&
                    element(ElementKind::HexS0).size() == 48 &&
                    element(ElementKind::NedelecI0).size() == 18 &&
                    element(ElementKind::NedelecII1).size() == 36;
    const double dt = seconds_since(t0);
    report(1, ok && dt < 1.0, fmt("dimension table exact (%.3f s)", dt));
  }

  // --- 2: conformity on two meshes ----------------------------------------
  {
    const Mesh pair = two_tets();
    const Mesh cube = box_tet_mesh({0, 1, 0, 1, 0, 1}, {1, 1, 1});
    double worst_sym = 0.0, worst_full = 0.0;
    for (ElementKind kind : all_element_kinds()) {
      if (element(kind).cell_type != CellType::Tet) continue;
      for (const Mesh* m : {&pair, &cube}) {
        worst_sym = std::max(worst_sym, max_facet_trace_jump(*m, kind, true));
        worst_full = std::max(worst_full, max_facet_trace_jump(*m, kind, false));
      }
    }
    report(2, worst_sym <= 1e-11 && worst_full <= 1e-11,
           fmt("max symmetric jump %.2e, max full tangential jump %.2e",
               worst_sym, worst_full));
  }

  // --- 3: rank/kernel of the symmetric curl -------------------------------
  {
    const Mesh tet = one_tet();
    auto rr = [&](ElementKind k) { return symcurl_rank(tet, 0, k); };
    const RankResult y0 = rr(ElementKind::Y0), s0 = rr(ElementKind::S0),
                     y1 = rr(ElementKind::Y1), s1 = rr(ElementKind::S1),
                     y2 = rr(ElementKind::Y2), m2 = rr(ElementKind::M2);
    const bool ok = y0.rank == 6 && y0.kernel == 15 && s0.rank == 6 &&
                    s0.kernel == 21 && y1.rank == 6 && y1.kernel == 36 &&
                    s1.rank == 6 && s1.kernel == 46 && y2.rank == 24 &&
                    y2.kernel == 76 && m2.kernel == y2.kernel - 10;
    std::ostringstream os;
    os << "(rank,kernel): Y0(" << y0.rank << ',' << y0.kernel << ") S0("
       << s0.rank << ',' << s0.kernel << ") Y1(" << y1.rank << ',' << y1.kernel
       << ") S1(" << s1.rank << ',' << s1.kernel << ") Y2(" << y2.rank << ','
       << y2.kernel << ") M2(" << m2.rank << ',' << m2.kernel << ")";
    report(3, ok, os.str());
  }

  // --- 4: linearly dependent stacked span ---------------------------------
  {
    const StackReport st = stacked_dependence_report();
    std::ostringstream os;
    os << "stacked span dim " << st.dim << " rank " << st.rank
       << " deficiency " << st.deficiency;
    report(4, st.rank < 45 && st.deficiency >= 1, os.str());
  }

  // --- 5-8: convergence studies -------------------------------------------
  std::fprintf(stderr, "running convergence studies (4 fields x %zu elements x 4 levels)\n",
               zoo().size());
  std::map<BenchField, Study> studies;
  for (BenchField f : {BenchField::B1, BenchField::B2, BenchField::B3, BenchField::B4}) {
    try {
      studies.emplace(f, run_study(f));
    } catch (const std::exception& e) {
      std::fprintf(stderr, "study %s failed: %s\n", field_name(f), e.what());
    }
  }

  auto study_ready = [&](BenchField f) { return studies.count(f) != 0; };

  if (!study_ready(BenchField::B1)) {
    report(5, false, "study B1 did not complete");
  } else {
    const Study& st = studies.at(BenchField::B1);
    std::string why;
    bool ok = study_invariants(st, why);
    for (ElementKind k : {ElementKind::Y0, ElementKind::S0, ElementKind::NedelecI0})
      ok = ok && in_band(final_eoc(st, k), 0.8, 1.2);
    for (ElementKind k : {ElementKind::Y1, ElementKind::S1, ElementKind::NedelecII1,
                          ElementKind::L1Mat, ElementKind::D1})
      ok = ok && in_band(final_eoc(st, k), 1.7, 2.3);
    for (ElementKind k : {ElementKind::Y2, ElementKind::M2})
      ok = ok && in_band(final_eoc(st, k), 2.6, 3.3);
    ok = ok && st.runtime <= 1800.0;
    report(5, ok, "smooth field rates:" + rate_table(st) + why +
                      fmt(" (%.0f s)", st.runtime));
  }

  if (!study_ready(BenchField::B2)) {
    report(6, false, "study B2 did not complete");
  } else {
    const Study& st = studies.at(BenchField::B2);
    std::string why;
    bool ok = study_invariants(st, why);
    for (ElementKind k : {ElementKind::L1Mat, ElementKind::D1})
      ok = ok && final_eoc(st, k) <= 0.8;
    for (ElementKind k : {ElementKind::NedelecI0, ElementKind::Y0, ElementKind::S0})
      ok = ok && in_band(final_eoc(st, k), 0.8, 1.2);
    for (ElementKind k : {ElementKind::NedelecII1, ElementKind::Y1, ElementKind::S1})
      ok = ok && in_band(final_eoc(st, k), 1.7, 2.3);
    for (ElementKind k : {ElementKind::Y2, ElementKind::M2})
      ok = ok && in_band(final_eoc(st, k), 2.6, 3.3);
    report(6, ok, "jumping normal rates:" + rate_table(st) + why +
                      fmt(" (%.0f s)", st.runtime));
  }

  if (!study_ready(BenchField::B3)) {
    report(7, false, "study B3 did not complete");
  } else {
    const Study& st = studies.at(BenchField::B3);
    std::string why;
    bool ok = study_invariants(st, why);
    for (ElementKind k : {ElementKind::Y0, ElementKind::NedelecI0})
      ok = ok && in_band(final_eoc(st, k), 0.8, 1.2);
    for (ElementKind k : {ElementKind::S0, ElementKind::D1})
      ok = ok && in_band(final_eoc(st, k), 1.7, 2.3);
    ok = ok && final_eoc(st, ElementKind::L1Mat) <= 0.8;
    for (ElementKind k : {ElementKind::NedelecII1, ElementKind::Y1, ElementKind::S1,
                          ElementKind::Y2, ElementKind::M2})
      ok = ok && final_eoc(st, k) < 1.5;
    // the added identity fields pay off: S1 beats Y1 at matched dof counts
    const ConvergenceReport& y1 = st.reports.at(ElementKind::Y1);
    const ConvergenceReport& s1 = st.reports.at(ElementKind::S1);
    const double n_ref = y1.levels.back().dofs;
    const double e_y1 = y1.levels.back().rel_l2_error;
    const double e_s1 = error_at_dofs(s1, n_ref);
    ok = ok && e_s1 < e_y1;
    report(7, ok, "jumping identity rates:" + rate_table(st) + why +
                      fmt(" S1-at-equal-dofs %.3e vs Y1 %.3e", e_s1, e_y1));
  }

  if (!study_ready(BenchField::B4)) {
    report(8, false, "study B4 did not complete");
  } else {
    const Study& st = studies.at(BenchField::B4);
    std::string why;
    bool ok = study_invariants(st, why);
    ok = ok && in_band(final_eoc(st, ElementKind::Y0), 0.8, 1.2);
    ok = ok && in_band(final_eoc(st, ElementKind::S0), 1.7, 2.3);
    for (ElementKind k : {ElementKind::L1Mat, ElementKind::NedelecI0,
                          ElementKind::NedelecII1, ElementKind::Y1, ElementKind::S1,
                          ElementKind::Y2, ElementKind::M2})
      ok = ok && final_eoc(st, k) <= 0.8;
    double worst_d1 = 0.0;
    for (const auto& lv : st.reports.at(ElementKind::D1).levels)
      worst_d1 = std::max(worst_d1, lv.rel_l2_error);
    ok = ok && worst_d1 <= 1e-9;
    report(8, ok, "characteristic identity rates:" + rate_table(st) + why +
                      fmt(" D1 max error %.2e", worst_d1));
  }

  // --- 9: dilatation experiment -------------------------------------------
  {
    const auto t0 = Clock::now();
    bool ok = true;
    std::ostringstream os;
    try {
      const MesoParams inner = compute_meso_params(76.9, 115.4, 769.0, 1154.0);
      const MesoParams outer = compute_meso_params(76.9, 11.54, 769.0, 1154.0);
      ok = ok && std::abs(inner.mu_e - 85.44) <= 0.01 &&
           std::abs(inner.lambda_e - 128.22) <= 0.01 &&
           std::abs(outer.lambda_e - 8.3) <= 0.05;
      os << "mu_e " << inner.mu_e << " lambda_e " << inner.lambda_e << "/"
         << outer.lambda_e;

      DilatationOptions dopt;
      dopt.levels = 3;
      dopt.condense = true;

      std::fprintf(stderr, "dilatation: S0 coupling\n");
      dopt.micro = ElementKind::S0;
      dopt.bc = BcMode::Coupling;
      const DilatationReport s0c = run_dilatation(dopt);

      std::fprintf(stderr, "dilatation: NI0 free\n");
      dopt.micro = ElementKind::NedelecI0;
      dopt.bc = BcMode::Neumann;
      const DilatationReport n0f = run_dilatation(dopt);

      std::fprintf(stderr, "dilatation: NI0 dirichlet\n");
      dopt.bc = BcMode::Dirichlet;
      const DilatationReport n0d = run_dilatation(dopt);

      const DilatationLevel& mid = s0c.levels[1];
      ok = ok && mid.cells == 3072 &&
           std::abs(mid.energy - 425.4) <= 0.02 * 425.4;
      os << "; coupling energy " << mid.energy << " at " << mid.cells << " cells";

      const double es0 = s0c.levels.back().energy;
      const double en0 = n0f.levels.back().energy;
      ok = ok && es0 < en0 && (en0 - es0) / es0 <= 0.01;
      os << "; free/coupling gap " << 100.0 * (en0 - es0) / es0 << "%";

      bool dir_ok = true;
      for (const auto& lv : n0d.levels) dir_ok = dir_ok && lv.energy > 1000.0;
      for (size_t k = 1; k < n0d.levels.size(); ++k)
        dir_ok = dir_ok && n0d.levels[k].energy >= n0d.levels[k - 1].energy - 1e-9;
      ok = ok && dir_ok;
      os << "; dirichlet energies";
      for (const auto& lv : n0d.levels) os << ' ' << lv.energy;
    } catch (const std::exception& e) {
      ok = false;
      os << "; exception: " << e.what();
    }
    const double dt = seconds_since(t0);
    ok = ok && dt <= 3600.0;
    os << fmt(" (%.0f s)", dt);
    report(9, ok, os.str());
  }

  // --- 10: hexahedral element ---------------------------------------------
  {
    const Mesh hexes = box_hex_mesh({0, 2, 0, 1, 0, 1}, {2, 1, 1});
    const double jump = max_facet_trace_jump(hexes, ElementKind::HexS0, true);

    // the transformed deviatoric vertex templates stay traceless
    double worst_trace = 0.0;
    Mat3 rho[2]{};
    rho[0](0, 0) = 1.0;
    rho[0](1, 1) = -1.0;
    rho[1](1, 1) = 1.0;
    rho[1](2, 2) = -1.0;
    for (int c = 0; c < hexes.num_cells(); ++c) {
      const ElementMap map = element_map(hexes, c);
      for (const Mat3& r : rho) {
        const Mat3 t = matmul(map.J, matmul(r, map.Jinv));
        worst_trace = std::max(worst_trace, std::abs(trace(t)));
      }
    }
    const bool ok = jump <= 1e-11 && worst_trace <= 1e-14 &&
                    element(ElementKind::HexS0).size() == 48;
    report(10, ok, fmt("hex jump %.2e, transformed template trace %.2e, dim 48",
                       jump, worst_trace));
  }

  std::printf("%s\n", g_all ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL");
  return g_all ? 0 : 1;
}
