#include "rmfem/vtk.hpp"

#include <fstream>
#include <stdexcept>

namespace rmfem {

void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<std::pair<std::string, std::vector<double>>>&
                   cell_fields) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os.precision(12);

  const bool tet = mesh.cell_type == CellType::Tet;
  const int nv = tet ? 4 : 8;
  const int vtk_type = tet ? 10 : 12;
  const int ncells = mesh.num_cells();

  os << "# vtk DataFile Version 3.0\n";
  os << "rmfem field export\n";
  os << "ASCII\n";
  os << "DATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.vertices.size() << " double\n";
  for (const Vec3& v : mesh.vertices) os << v.x << ' ' << v.y << ' ' << v.z << '\n';

  os << "CELLS " << ncells << ' ' << static_cast<long>(ncells) * (nv + 1) << '\n';
  for (int c = 0; c < ncells; ++c) {
    os << nv;
    // VTK_HEXAHEDRON expects the bottom quad then the top quad, matching the
    // stored grid order; tets are emitted as stored.
    for (int k = 0; k < nv; ++k) os << ' ' << mesh.cell(c)[k];
    os << '\n';
  }
  os << "CELL_TYPES " << ncells << '\n';
  for (int c = 0; c < ncells; ++c) os << vtk_type << '\n';

  if (!cell_fields.empty()) {
    os << "CELL_DATA " << ncells << '\n';
    for (const auto& [name, values] : cell_fields) {
      if (static_cast<int>(values.size()) != ncells)
        throw std::runtime_error("cell field '" + name + "' has wrong size");
      os << "SCALARS " << name << " double 1\n";
      os << "LOOKUP_TABLE default\n";
      for (double v : values) os << v << '\n';
    }
  }
  if (!os) throw std::runtime_error("write failed for " + path);
}

}  // namespace rmfem
