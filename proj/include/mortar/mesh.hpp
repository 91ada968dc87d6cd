#pragma once

#include <array>
#include <set>
#include <utility>
#include <vector>

#include "mortar/geometry.hpp"

namespace mortar {

enum class FacetClass { Interior, Interface, Dirichlet };

// An edge of the triangulation.  Interior facets have two parent triangles,
// boundary facets one (tri[1] == -1).  Boundary facets carry the outward
// unit normal of their subdomain.
struct Facet {
    std::array<int, 2> v{-1, -1};
    std::array<int, 2> tri{-1, -1};
    Point2 normal{0.0, 0.0};
};

// Conforming triangulation of one subdomain.  Immutable after construction;
// refinement produces a new mesh.
struct SubdomainMesh {
    int subdomain_id = 1;
    std::vector<Point2> vertices;
    std::vector<std::array<int, 3>> triangles; // counterclockwise
    std::vector<Facet> interior_facets;
    std::vector<Facet> interface_facets;
    std::vector<Facet> dirichlet_facets;

    Point2 vertex(int i) const { return vertices[static_cast<std::size_t>(i)]; }
    const std::array<int, 3>& tri(int t) const { return triangles[static_cast<std::size_t>(t)]; }

    double triangle_area(int t) const;
    double triangle_diameter(int t) const;
    double facet_length(const Facet& f) const { return dist(vertex(f.v[0]), vertex(f.v[1])); }
    double total_area() const;
    double min_angle() const;
};

struct RefinementMarks {
    std::set<std::pair<int, int>> marked; // (subdomain_id, triangle index)

    void add(int subdomain_id, int triangle) { marked.insert({subdomain_id, triangle}); }
    bool empty() const { return marked.empty(); }
};

// Structured right-triangle meshes of the two-rectangle geometry
// Omega_1 = (0,1)^2, Omega_2 = (1,2)x(0,1) with the interface on x = 1.
std::pair<SubdomainMesh, SubdomainMesh> build_two_rectangles(int nx1, int ny1, int nx2, int ny2);

// L-shaped geometry Omega_1 = (0,1)^2, Omega_2 = (1,2)x(0,2); the interface
// is {1}x(0,1) and the reentrant corner (1,1) lies on the outer boundary.
std::pair<SubdomainMesh, SubdomainMesh> build_lshape(int n);

// Red-green-blue refinement.  Marked triangles are quadrisected; neighbours
// receive green/blue closures so the result is conforming.  Boundary facet
// classification is inherited by child facets.
SubdomainMesh refine_rgb(const SubdomainMesh& mesh, const RefinementMarks& marks);

// Refines every triangle (one red sweep).
SubdomainMesh refine_uniform(const SubdomainMesh& mesh);

// Checks interior facet counts and (optionally, by exhaustive point tests)
// the absence of hanging vertices.  Throws on violation.
void audit_conformity(const SubdomainMesh& mesh, bool exhaustive = false);

// Rebuilds facet lists from scratch for a triangle soup whose boundary edges
// are classified by `boundary_class`.  Used by the mesh builders.
SubdomainMesh assemble_mesh(int subdomain_id, std::vector<Point2> vertices,
                            std::vector<std::array<int, 3>> triangles,
                            const std::vector<std::pair<std::array<int, 2>, FacetClass>>& boundary_class);

} // namespace mortar
