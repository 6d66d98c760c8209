#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rmfem/benchmark.hpp"
#include "rmfem/sequence.hpp"
#include "rmfem/vtk.hpp"

// Command-line driver: convergence studies of the H(sym Curl) elements,
// the two-material dilatation experiment, the polynomial-sequence lab and
// mesh export. Exit codes: 0 success, 2 invalid configuration, 3 solver
// failure.

namespace {

using namespace rmfem;

BcMode parse_bc(const std::string& s) {
  if (s == "coupling") return BcMode::Coupling;
  if (s == "neumann") return BcMode::Neumann;
  if (s == "dirichlet") return BcMode::Dirichlet;
  throw std::invalid_argument("unknown boundary mode: " + s);
}

ElementKind need_element(const std::string& s) {
  auto kind = parse_element(s);
  if (!kind) throw std::invalid_argument("unknown element: " + s);
  return *kind;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << text;
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

std::filesystem::path ensure_dir(const std::string& dir) {
  std::filesystem::path p = dir.empty() ? "." : dir;
  std::filesystem::create_directories(p);
  return p;
}

int cmd_converge(const std::string& elem, const std::string& field_s, int levels,
                 const std::string& bc, const std::string& out_dir,
                 const std::string& format, double tol, int threads,
                 bool condense) {
  ConvergenceOptions opts;
  opts.levels = levels;
  opts.bc = parse_bc(bc);
  opts.rel_tol = tol;
  opts.condense = condense;
  opts.threads = threads;
  const ElementKind kind = need_element(elem);
  const BenchField field = parse_field(field_s);

  ConvergenceReport rep = run_convergence(kind, field, opts);

  const std::string csv = convergence_csv(rep);
  std::cout << csv;
  const auto dir = ensure_dir(out_dir);
  const std::string stem =
      element_name(kind) + std::string("_") + field_name(field);
  if (format == "csv" || format == "all") write_file(dir / (stem + ".csv"), csv);
  if (format == "json" || format == "all")
    write_file(dir / (stem + ".json"), convergence_json(rep));
  return 0;
}

int cmd_dilatation(int order, const std::string& elem, const std::string& bc,
                   int levels, const std::string& out_dir,
                   const std::string& format, double tol, int threads,
                   bool condense) {
  DilatationOptions opts;
  opts.disp_order = order;
  opts.micro = need_element(elem);
  opts.bc = parse_bc(bc);
  opts.levels = levels;
  opts.rel_tol = tol;
  opts.condense = condense;
  opts.threads = threads;

  DilatationReport rep = run_dilatation(opts);
  const std::string json = dilatation_json(rep);
  std::cout << json;
  const auto dir = ensure_dir(out_dir);
  const std::string stem = "dilatation_U" + std::to_string(order) + "_" +
                           element_name(opts.micro) + "_" + bc;
  if (format == "json" || format == "all") write_file(dir / (stem + ".json"), json);
  if (format == "vtk" || format == "all") {
    // Re-solve the finest level to export the visualised trace field.
    const Mesh mesh = dilatation_mesh(levels - 1);
    const std::vector<int> region = dilatation_region(mesh);
    RmmSolution sol = solve_rmm(dilatation_problem(mesh, region, opts));
    std::vector<double> reg(region.begin(), region.end());
    write_vtk((dir / (stem + ".vtk")).string(), mesh,
              {{"region", reg},
               {"trace_P", cell_average_trace(mesh, opts.micro, sol.p_dm, sol.p)}});
  }
  return 0;
}

int cmd_sequence(const std::string& elem, const std::string& out_dir) {
  std::vector<SequenceReport> reports;
  if (elem.empty()) {
    reports = run_sequence_lab();
  } else {
    reports.push_back(sequence_report(need_element(elem)));
  }
  const StackReport stack = stacked_dependence_report();
  const std::string json = sequence_json(reports, stack);
  std::cout << json;
  if (!out_dir.empty())
    write_file(ensure_dir(out_dir) / "sequence.json", json);
  return 0;
}

int cmd_mesh_export(const std::string& which, int level,
                    const std::string& out_dir) {
  const auto dir = ensure_dir(out_dir);
  if (which == "converge") {
    write_vtk((dir / ("converge_mesh_l" + std::to_string(level) + ".vtk")).string(),
              convergence_mesh(level));
  } else if (which == "dilatation") {
    const Mesh mesh = dilatation_mesh(level);
    const std::vector<int> region = dilatation_region(mesh);
    write_vtk((dir / ("dilatation_mesh_l" + std::to_string(level) + ".vtk")).string(),
              mesh, {{"region", std::vector<double>(region.begin(), region.end())}});
  } else {
    throw std::invalid_argument("unknown mesh family: " + which);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"H(sym Curl) finite element studies"};
  app.require_subcommand(1);

  std::string element, field = "B1", bc, out_dir = ".", format, mesh_family;
  int levels = 0, order = 1, threads = 1;
  double tol = 1e-10;
  bool condense = false;

  CLI::App* conv = app.add_subcommand(
      "converge", "Best-approximation convergence study for one element/field");
  conv->add_option("--element", element, "element name (e.g. Y0, S1, NI0, D1)")
      ->required();
  conv->add_option("--field", field, "benchmark field B1..B4")->required();
  conv->add_option("--levels", levels, "number of refinement levels")
      ->default_val(4)
      ->check(CLI::Range(1, 8));
  conv->add_option("--bc", bc, "boundary handling")
      ->default_val("neumann")
      ->check(CLI::IsMember({"coupling", "neumann", "dirichlet"}));
  conv->add_option("--out-dir", out_dir, "output directory")->capture_default_str();
  conv->add_option("--format", format, "emitted files")
      ->default_val("all")
      ->check(CLI::IsMember({"csv", "json", "all"}));
  conv->add_option("--tol", tol, "CG relative tolerance")->capture_default_str();
  conv->add_option("--threads", threads, "worker cap")->check(CLI::PositiveNumber);
  conv->add_flag("--condense", condense, "statically condense cell dofs");

  CLI::App* dil = app.add_subcommand(
      "dilatation", "Two-material dilatation energy study");
  dil->add_option("--order", order, "displacement order (1 or 2)")
      ->default_val(1)
      ->check(CLI::Range(1, 2));
  dil->add_option("--element", element, "micro-distortion element")
      ->default_val("S0");
  dil->add_option("--bc", bc, "micro-distortion boundary mode")
      ->default_val("coupling")
      ->check(CLI::IsMember({"coupling", "neumann", "dirichlet"}));
  dil->add_option("--levels", levels, "number of refinement levels")
      ->default_val(3)
      ->check(CLI::Range(1, 7));
  dil->add_option("--out-dir", out_dir, "output directory")->capture_default_str();
  dil->add_option("--format", format, "emitted files")
      ->default_val("json")
      ->check(CLI::IsMember({"json", "vtk", "all"}));
  dil->add_option("--tol", tol, "CG relative tolerance")->capture_default_str();
  dil->add_option("--threads", threads, "worker cap")->check(CLI::PositiveNumber);
  dil->add_flag("--condense", condense, "statically condense cell dofs");

  CLI::App* seq = app.add_subcommand(
      "sequence", "Rank/kernel and inclusion reports on reference cells");
  std::string seq_elem, seq_out;
  seq->add_option("--element", seq_elem, "restrict to one element");
  seq->add_option("--out-dir", seq_out, "also write sequence.json here");

  CLI::App* mex = app.add_subcommand("mesh-export", "Write a study mesh as VTK");
  mex->add_option("--mesh", mesh_family, "mesh family")
      ->default_val("dilatation")
      ->check(CLI::IsMember({"converge", "dilatation"}));
  mex->add_option("--levels", levels, "refinement level")
      ->default_val(0)
      ->check(CLI::Range(0, 8));
  mex->add_option("--out-dir", out_dir, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (conv->parsed())
      return cmd_converge(element, field, levels, bc, out_dir, format, tol,
                          threads, condense);
    if (dil->parsed())
      return cmd_dilatation(order, element, bc, levels, out_dir, format, tol,
                            threads, condense);
    if (seq->parsed()) return cmd_sequence(seq_elem, seq_out);
    if (mex->parsed()) return cmd_mesh_export(mesh_family, levels, out_dir);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
