#ifndef RMFEM_VTK_HPP
#define RMFEM_VTK_HPP

#include <string>
#include <utility>
#include <vector>

#include "rmfem/mesh.hpp"

namespace rmfem {

// Legacy ASCII VTK (DataFile Version 3.0) unstructured-grid export with
// optional piecewise constant cell fields. Throws std::runtime_error when
// the file cannot be written.
void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<std::pair<std::string, std::vector<double>>>&
                   cell_fields = {});

}  // namespace rmfem

#endif
