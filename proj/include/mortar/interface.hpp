#pragma once

#include <vector>

#include "mortar/mesh.hpp"

namespace mortar {

// One cell of the intersection mesh: a subinterval of Gamma contained in
// exactly one interface facet of each side.
struct InterfaceSegment {
    double t0 = 0.0, t1 = 0.0; // arclength parameters along Gamma
    Point2 a, b;               // physical endpoints, a at t0
    int parent1 = -1;          // index into mesh 1 interface_facets
    int parent2 = -1;          // index into mesh 2 interface_facets
    double h1 = 0.0, h2 = 0.0; // diameters of the parent facets

    double length() const { return t1 - t0; }
    Point2 point(double s) const { return {a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)}; }
};

// Common refinement of the two one-sided traces of a straight interface.
struct InterfaceMesh {
    Point2 gamma_start, gamma_end;
    Point2 normal; // unit normal pointing from Omega_1 into Omega_2
    std::vector<InterfaceSegment> segments;
    std::vector<std::vector<int>> segments_of_facet1; // per side-1 facet
    std::vector<std::vector<int>> segments_of_facet2; // per side-2 facet

    double length() const { return dist(gamma_start, gamma_end); }
};

// Merges the breakpoints of the two interface traces.  Throws if the meshes
// do not share the same straight Gamma within tolerance.
InterfaceMesh intersect_interface(const SubdomainMesh& m1, const SubdomainMesh& m2);

} // namespace mortar
