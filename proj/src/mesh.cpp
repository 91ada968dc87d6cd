#include "mortar/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace mortar {

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

Point2 outward_normal_of(const SubdomainMesh& mesh, int tri, int va, int vb) {
    const auto& t = mesh.tri(tri);
    int opposite = -1;
    for (int v : t)
        if (v != va && v != vb) opposite = v;
    const Point2 a = mesh.vertex(va);
    const Point2 b = mesh.vertex(vb);
    Point2 n{b.y - a.y, a.x - b.x}; // perpendicular to the edge
    const Point2 mid = 0.5 * (a + b);
    if (dot(n, mesh.vertex(opposite) - mid) > 0.0) n = -1.0 * n;
    const double len = norm(n);
    return {n.x / len, n.y / len};
}

} // namespace

double SubdomainMesh::triangle_area(int t) const {
    const auto& tr = tri(t);
    return signed_area(vertex(tr[0]), vertex(tr[1]), vertex(tr[2]));
}

double SubdomainMesh::triangle_diameter(int t) const {
    const auto& tr = tri(t);
    return mortar::triangle_diameter(vertex(tr[0]), vertex(tr[1]), vertex(tr[2]));
}

double SubdomainMesh::total_area() const {
    double area = 0.0;
    for (std::size_t t = 0; t < triangles.size(); ++t)
        area += triangle_area(static_cast<int>(t));
    return area;
}

double SubdomainMesh::min_angle() const {
    double angle = 4.0; // > pi
    for (const auto& tr : triangles)
        angle = std::min(angle, triangle_min_angle(vertex(tr[0]), vertex(tr[1]), vertex(tr[2])));
    return angle;
}

SubdomainMesh assemble_mesh(int subdomain_id, std::vector<Point2> vertices,
                            std::vector<std::array<int, 3>> triangles,
                            const std::vector<std::pair<std::array<int, 2>, FacetClass>>& boundary_class) {
    SubdomainMesh mesh;
    mesh.subdomain_id = subdomain_id;
    mesh.vertices = std::move(vertices);
    mesh.triangles = std::move(triangles);

    std::map<EdgeKey, std::vector<int>> edge_tris;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tr = mesh.triangles[t];
        if (signed_area(mesh.vertex(tr[0]), mesh.vertex(tr[1]), mesh.vertex(tr[2])) <= 0.0)
            throw std::runtime_error("assemble_mesh: triangle " + std::to_string(t) +
                                     " is degenerate or negatively oriented");
        for (int e = 0; e < 3; ++e)
            edge_tris[edge_key(tr[e], tr[(e + 1) % 3])].push_back(static_cast<int>(t));
    }

    std::map<EdgeKey, FacetClass> boundary_lookup;
    for (const auto& [edge, cls] : boundary_class)
        boundary_lookup[edge_key(edge[0], edge[1])] = cls;

    for (const auto& [key, tris] : edge_tris) {
        Facet f;
        f.v = {key.first, key.second};
        if (tris.size() == 2) {
            f.tri = {tris[0], tris[1]};
            mesh.interior_facets.push_back(f);
        } else if (tris.size() == 1) {
            f.tri = {tris[0], -1};
            f.normal = outward_normal_of(mesh, tris[0], key.first, key.second);
            const auto it = boundary_lookup.find(key);
            if (it == boundary_lookup.end())
                throw std::runtime_error("assemble_mesh: unclassified boundary facet");
            if (it->second == FacetClass::Interface)
                mesh.interface_facets.push_back(f);
            else
                mesh.dirichlet_facets.push_back(f);
        } else {
            throw std::runtime_error("assemble_mesh: facet shared by more than two triangles");
        }
    }
    return mesh;
}

namespace {

// Structured grid of (x0,x1)x(y0,y1) with nx*ny cells, two triangles each.
void structured_grid(double x0, double x1, double y0, double y1, int nx, int ny,
                     std::vector<Point2>& vertices, std::vector<std::array<int, 3>>& triangles) {
    auto vid = [&](int i, int j) { return j * (nx + 1) + i; };
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            vertices.push_back({x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny});
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int v00 = vid(i, j), v10 = vid(i + 1, j);
            const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
            triangles.push_back({v00, v10, v11});
            triangles.push_back({v00, v11, v01});
        }
}

SubdomainMesh build_rectangle(int subdomain_id, double x0, double x1, double y0, double y1,
                              int nx, int ny, double interface_x, double interface_ymax) {
    if (nx < 1 || ny < 1)
        throw std::invalid_argument("build mesh: subdivision counts must be >= 1");
    std::vector<Point2> vertices;
    std::vector<std::array<int, 3>> triangles;
    structured_grid(x0, x1, y0, y1, nx, ny, vertices, triangles);

    // Boundary edges classified geometrically on the initial mesh only;
    // refinement inherits the classification.
    const double tol = 1e-12;
    std::map<EdgeKey, int> edge_count;
    for (const auto& tr : triangles)
        for (int e = 0; e < 3; ++e)
            edge_count[edge_key(tr[e], tr[(e + 1) % 3])] += 1;

    std::vector<std::pair<std::array<int, 2>, FacetClass>> boundary_class;
    for (const auto& [key, count] : edge_count) {
        if (count != 1) continue;
        const Point2 a = vertices[static_cast<std::size_t>(key.first)];
        const Point2 b = vertices[static_cast<std::size_t>(key.second)];
        const Point2 mid = 0.5 * (a + b);
        const bool on_interface = std::abs(a.x - interface_x) < tol &&
                                  std::abs(b.x - interface_x) < tol &&
                                  mid.y < interface_ymax - tol;
        boundary_class.push_back({{key.first, key.second},
                                  on_interface ? FacetClass::Interface : FacetClass::Dirichlet});
    }
    return assemble_mesh(subdomain_id, std::move(vertices), std::move(triangles), boundary_class);
}

} // namespace

std::pair<SubdomainMesh, SubdomainMesh> build_two_rectangles(int nx1, int ny1, int nx2, int ny2) {
    SubdomainMesh m1 = build_rectangle(1, 0.0, 1.0, 0.0, 1.0, nx1, ny1, 1.0, 1.0);
    SubdomainMesh m2 = build_rectangle(2, 1.0, 2.0, 0.0, 1.0, nx2, ny2, 1.0, 1.0);
    return {std::move(m1), std::move(m2)};
}

std::pair<SubdomainMesh, SubdomainMesh> build_lshape(int n) {
    SubdomainMesh m1 = build_rectangle(1, 0.0, 1.0, 0.0, 1.0, n, n, 1.0, 1.0);
    // Omega_2 spans y in (0,2); only the part of x = 1 below y = 1 couples.
    SubdomainMesh m2 = build_rectangle(2, 1.0, 2.0, 0.0, 2.0, n, 2 * n, 1.0, 1.0);
    return {std::move(m1), std::move(m2)};
}

namespace {

struct RefineWorkspace {
    std::map<EdgeKey, int> midpoint;             // marked edge -> new vertex id
    std::map<EdgeKey, FacetClass> boundary_class; // old and split boundary edges
};

// Local index of the reference edge: longest edge, ties broken by the
// smallest (min,max) vertex-index pair.
int reference_edge(const SubdomainMesh& mesh, const std::array<int, 3>& tr) {
    int best = 0;
    double best_len = -1.0;
    EdgeKey best_key{0, 0};
    for (int e = 0; e < 3; ++e) {
        const int a = tr[e], b = tr[(e + 1) % 3];
        const double len = dist(mesh.vertex(a), mesh.vertex(b));
        const EdgeKey key = edge_key(a, b);
        if (len > best_len + 1e-14 * (1.0 + best_len) ||
            (std::abs(len - best_len) <= 1e-14 * (1.0 + best_len) && key < best_key)) {
            best = e;
            best_len = len;
            best_key = key;
        }
    }
    return best;
}

} // namespace

SubdomainMesh refine_rgb(const SubdomainMesh& mesh, const RefinementMarks& marks) {
    std::vector<int> marked_tris;
    for (const auto& [sd, t] : marks.marked) {
        if (sd != mesh.subdomain_id) continue;
        if (t < 0 || t >= static_cast<int>(mesh.triangles.size()))
            throw std::invalid_argument("refine_rgb: mark index out of range");
        marked_tris.push_back(t);
    }
    if (marked_tris.empty()) return mesh;

    const std::size_t ntri = mesh.triangles.size();
    std::vector<int> ref_edge(ntri);
    for (std::size_t t = 0; t < ntri; ++t)
        ref_edge[t] = reference_edge(mesh, mesh.triangles[t]);

    std::set<EdgeKey> marked_edges;
    for (int t : marked_tris) {
        const auto& tr = mesh.triangles[static_cast<std::size_t>(t)];
        for (int e = 0; e < 3; ++e)
            marked_edges.insert(edge_key(tr[e], tr[(e + 1) % 3]));
    }

    // Closure: a triangle with any marked edge must have its reference edge
    // marked.  Terminates since each pass marks at least one new edge.
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t t = 0; t < ntri; ++t) {
            const auto& tr = mesh.triangles[t];
            bool any = false;
            for (int e = 0; e < 3; ++e)
                any = any || marked_edges.count(edge_key(tr[e], tr[(e + 1) % 3])) > 0;
            if (!any) continue;
            const int r = ref_edge[t];
            const EdgeKey rk = edge_key(tr[r], tr[(r + 1) % 3]);
            if (marked_edges.insert(rk).second) changed = true;
        }
    }

    RefineWorkspace ws;
    std::vector<Point2> vertices = mesh.vertices;
    for (const EdgeKey& key : marked_edges) {
        const Point2 mid = 0.5 * (mesh.vertex(key.first) + mesh.vertex(key.second));
        ws.midpoint[key] = static_cast<int>(vertices.size());
        vertices.push_back(mid);
    }

    auto record_boundary = [&](const std::vector<Facet>& facets, FacetClass cls) {
        for (const Facet& f : facets) {
            const EdgeKey key = edge_key(f.v[0], f.v[1]);
            const auto mid = ws.midpoint.find(key);
            if (mid == ws.midpoint.end()) {
                ws.boundary_class[key] = cls;
            } else {
                ws.boundary_class[edge_key(key.first, mid->second)] = cls;
                ws.boundary_class[edge_key(key.second, mid->second)] = cls;
            }
        }
    };
    record_boundary(mesh.interface_facets, FacetClass::Interface);
    record_boundary(mesh.dirichlet_facets, FacetClass::Dirichlet);

    std::vector<std::array<int, 3>> triangles;
    triangles.reserve(2 * ntri);
    for (std::size_t t = 0; t < ntri; ++t) {
        const auto& tr = mesh.triangles[t];
        // Rotate so the reference edge runs from w0 to w1.
        const int r = ref_edge[t];
        const int w0 = tr[r], w1 = tr[(r + 1) % 3], w2 = tr[(r + 2) % 3];

        auto mid = [&](int a, int b) -> int {
            const auto it = ws.midpoint.find(edge_key(a, b));
            return it == ws.midpoint.end() ? -1 : it->second;
        };
        const int m01 = mid(w0, w1), m12 = mid(w1, w2), m20 = mid(w2, w0);

        if (m01 < 0) {
            triangles.push_back(tr); // untouched (closure guarantees m12 = m20 = -1)
        } else if (m12 < 0 && m20 < 0) { // green
            triangles.push_back({w0, m01, w2});
            triangles.push_back({m01, w1, w2});
        } else if (m12 >= 0 && m20 < 0) { // blue
            triangles.push_back({w0, m01, w2});
            triangles.push_back({m01, w1, m12});
            triangles.push_back({m01, m12, w2});
        } else if (m12 < 0 && m20 >= 0) { // blue
            triangles.push_back({w0, m01, m20});
            triangles.push_back({m01, w2, m20});
            triangles.push_back({m01, w1, w2});
        } else { // red
            triangles.push_back({w0, m01, m20});
            triangles.push_back({m01, w1, m12});
            triangles.push_back({m20, m12, w2});
            triangles.push_back({m01, m12, m20});
        }
    }

    std::vector<std::pair<std::array<int, 2>, FacetClass>> boundary_class;
    boundary_class.reserve(ws.boundary_class.size());
    for (const auto& [key, cls] : ws.boundary_class)
        boundary_class.push_back({{key.first, key.second}, cls});

    return assemble_mesh(mesh.subdomain_id, std::move(vertices), std::move(triangles), boundary_class);
}

SubdomainMesh refine_uniform(const SubdomainMesh& mesh) {
    RefinementMarks marks;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
        marks.add(mesh.subdomain_id, static_cast<int>(t));
    return refine_rgb(mesh, marks);
}

void audit_conformity(const SubdomainMesh& mesh, bool exhaustive) {
    std::map<EdgeKey, int> edge_count;
    for (const auto& tr : mesh.triangles)
        for (int e = 0; e < 3; ++e)
            edge_count[edge_key(tr[e], tr[(e + 1) % 3])] += 1;

    const std::size_t boundary =
        mesh.interface_facets.size() + mesh.dirichlet_facets.size();
    std::size_t boundary_seen = 0;
    for (const auto& [key, count] : edge_count) {
        if (count == 1)
            ++boundary_seen;
        else if (count != 2)
            throw std::runtime_error("conformity audit: facet with more than two parents");
    }
    if (boundary_seen != boundary)
        throw std::runtime_error("conformity audit: boundary facet count mismatch");
    if (edge_count.size() != boundary + mesh.interior_facets.size())
        throw std::runtime_error("conformity audit: interior facet count mismatch");

    // A midpoint of a facet that exists as a mesh vertex would be a hanging
    // node.  All refinement vertices are edge midpoints, so this check is
    // sufficient for meshes produced here; the exhaustive variant tests every
    // vertex against every facet.
    std::map<std::pair<long long, long long>, int> vertex_hash;
    auto quantize = [](Point2 p) {
        return std::pair<long long, long long>{std::llround(p.x * 1e12), std::llround(p.y * 1e12)};
    };
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
        vertex_hash[quantize(mesh.vertices[v])] = static_cast<int>(v);

    auto check_facet = [&](const Facet& f) {
        const Point2 a = mesh.vertex(f.v[0]);
        const Point2 b = mesh.vertex(f.v[1]);
        const auto it = vertex_hash.find(quantize(0.5 * (a + b)));
        if (it != vertex_hash.end())
            throw std::runtime_error("conformity audit: hanging vertex on a facet");
        if (!exhaustive) return;
        for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
            if (static_cast<int>(v) == f.v[0] || static_cast<int>(v) == f.v[1]) continue;
            const Point2 p = mesh.vertices[v];
            const double len = dist(a, b);
            if (std::abs(cross(b - a, p - a)) > 1e-12 * len * len) continue;
            const double s = dot(p - a, b - a) / (len * len);
            if (s > 1e-12 && s < 1.0 - 1e-12)
                throw std::runtime_error("conformity audit: hanging vertex on a facet");
        }
    };
    for (const auto& f : mesh.interior_facets) check_facet(f);
    for (const auto& f : mesh.interface_facets) check_facet(f);
    for (const auto& f : mesh.dirichlet_facets) check_facet(f);
}

} // namespace mortar
