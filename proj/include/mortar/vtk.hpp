#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mortar/mesh.hpp"

namespace mortar {

// Legacy ASCII VTK unstructured grid holding both subdomain meshes.  Always
// writes the integer cell field "subdomain"; optionally a point scalar "u"
// (nodal values of mesh 1 followed by mesh 2) and a cell field "marked".
void write_vtk(std::ostream& out, const SubdomainMesh& m1, const SubdomainMesh& m2,
               const std::vector<double>* u = nullptr, const RefinementMarks* marks = nullptr);

void write_vtk_file(const std::string& path, const SubdomainMesh& m1, const SubdomainMesh& m2,
                    const std::vector<double>* u = nullptr,
                    const RefinementMarks* marks = nullptr);

} // namespace mortar
