#include "mortar/vtk.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace mortar {

void write_vtk(std::ostream& out, const SubdomainMesh& m1, const SubdomainMesh& m2,
               const std::vector<double>* u, const RefinementMarks* marks) {
    const std::size_t npoints = m1.vertices.size() + m2.vertices.size();
    const std::size_t ncells = m1.triangles.size() + m2.triangles.size();
    const std::size_t offset = m1.vertices.size();

    out << "# vtk DataFile Version 3.0\n";
    out << "two-subdomain transmission problem\n";
    out << "ASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";

    char buf[128];
    out << "POINTS " << npoints << " double\n";
    for (const SubdomainMesh* mesh : {&m1, &m2})
        for (const Point2& p : mesh->vertices) {
            std::snprintf(buf, sizeof(buf), "%.12g %.12g 0\n", p.x, p.y);
            out << buf;
        }

    out << "CELLS " << ncells << " " << 4 * ncells << "\n";
    for (const auto& t : m1.triangles)
        out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
    for (const auto& t : m2.triangles)
        out << "3 " << t[0] + offset << " " << t[1] + offset << " " << t[2] + offset << "\n";

    out << "CELL_TYPES " << ncells << "\n";
    for (std::size_t c = 0; c < ncells; ++c) out << "5\n";

    out << "CELL_DATA " << ncells << "\n";
    out << "SCALARS subdomain int 1\nLOOKUP_TABLE default\n";
    for (std::size_t c = 0; c < m1.triangles.size(); ++c) out << "1\n";
    for (std::size_t c = 0; c < m2.triangles.size(); ++c) out << "2\n";

    if (marks) {
        out << "SCALARS marked int 1\nLOOKUP_TABLE default\n";
        for (std::size_t t = 0; t < m1.triangles.size(); ++t)
            out << (marks->marked.count({1, static_cast<int>(t)}) ? 1 : 0) << "\n";
        for (std::size_t t = 0; t < m2.triangles.size(); ++t)
            out << (marks->marked.count({2, static_cast<int>(t)}) ? 1 : 0) << "\n";
    }

    if (u) {
        if (u->size() != npoints)
            throw std::invalid_argument("write_vtk: point data size mismatch");
        out << "POINT_DATA " << npoints << "\n";
        out << "SCALARS u double 1\nLOOKUP_TABLE default\n";
        for (double v : *u) {
            std::snprintf(buf, sizeof(buf), "%.12g\n", v);
            out << buf;
        }
    }
}

void write_vtk_file(const std::string& path, const SubdomainMesh& m1, const SubdomainMesh& m2,
                    const std::vector<double>* u, const RefinementMarks* marks) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_vtk: cannot open '" + path + "'");
    write_vtk(out, m1, m2, u, marks);
    if (!out)
        throw std::runtime_error("write_vtk: write failed for '" + path + "'");
}

} // namespace mortar
