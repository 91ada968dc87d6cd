#include "mortar/interface.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mortar {

namespace {

struct FacetInterval {
    double tmin, tmax;
    int facet;
};

// Endpoints of Gamma as the extreme interface facet endpoints of a mesh,
// validated to be collinear.
std::pair<Point2, Point2> gamma_endpoints(const SubdomainMesh& mesh) {
    if (mesh.interface_facets.empty())
        throw std::runtime_error("intersect_interface: mesh has no interface facets");
    auto less = [](Point2 p, Point2 q) { return p.x < q.x || (p.x == q.x && p.y < q.y); };
    Point2 lo = mesh.vertex(mesh.interface_facets.front().v[0]);
    Point2 hi = lo;
    for (const Facet& f : mesh.interface_facets)
        for (int v : f.v) {
            const Point2 p = mesh.vertex(v);
            if (less(p, lo)) lo = p;
            if (less(hi, p)) hi = p;
        }
    const Point2 dir = hi - lo;
    const double len = norm(dir);
    for (const Facet& f : mesh.interface_facets)
        for (int v : f.v)
            if (std::abs(cross(dir, mesh.vertex(v) - lo)) > 1e-12 * len * len)
                throw std::runtime_error("intersect_interface: interface facets are not collinear");
    return {lo, hi};
}

} // namespace

InterfaceMesh intersect_interface(const SubdomainMesh& m1, const SubdomainMesh& m2) {
    const auto [a1, b1] = gamma_endpoints(m1);
    const auto [a2, b2] = gamma_endpoints(m2);
    const double len = dist(a1, b1);
    if (dist(a1, a2) > 1e-12 * len || dist(b1, b2) > 1e-12 * len)
        throw std::runtime_error("intersect_interface: meshes disagree on the Gamma endpoints");

    InterfaceMesh gamma;
    gamma.gamma_start = a1;
    gamma.gamma_end = b1;
    const Point2 unit = (1.0 / len) * (b1 - a1);

    auto param = [&](Point2 p) { return dot(p - a1, unit); };

    auto collect = [&](const SubdomainMesh& mesh, std::vector<FacetInterval>& intervals,
                       std::vector<double>& breaks) {
        for (std::size_t f = 0; f < mesh.interface_facets.size(); ++f) {
            const Facet& facet = mesh.interface_facets[f];
            double ta = param(mesh.vertex(facet.v[0]));
            double tb = param(mesh.vertex(facet.v[1]));
            if (ta > tb) std::swap(ta, tb);
            intervals.push_back({ta, tb, static_cast<int>(f)});
            breaks.push_back(ta);
            breaks.push_back(tb);
        }
        std::sort(intervals.begin(), intervals.end(),
                  [](const FacetInterval& u, const FacetInterval& v) { return u.tmin < v.tmin; });
    };

    std::vector<FacetInterval> iv1, iv2;
    std::vector<double> breaks;
    collect(m1, iv1, breaks);
    collect(m2, iv2, breaks);

    // Merge breakpoints; coincident points are identified with an absolute
    // tolerance proportional to |Gamma| to avoid sliver segments.
    const double tol = 1e-12 * len;
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> merged;
    for (double t : breaks)
        if (merged.empty() || t - merged.back() > tol) merged.push_back(t);
    if (merged.size() < 2)
        throw std::runtime_error("intersect_interface: degenerate interface");

    auto find_parent = [&](const std::vector<FacetInterval>& intervals, double tmid) -> int {
        for (const FacetInterval& iv : intervals)
            if (tmid >= iv.tmin - tol && tmid <= iv.tmax + tol) return iv.facet;
        return -1;
    };

    gamma.segments_of_facet1.resize(m1.interface_facets.size());
    gamma.segments_of_facet2.resize(m2.interface_facets.size());
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        InterfaceSegment seg;
        seg.t0 = merged[i];
        seg.t1 = merged[i + 1];
        seg.a = a1 + seg.t0 * unit;
        seg.b = a1 + seg.t1 * unit;
        const double tmid = 0.5 * (seg.t0 + seg.t1);
        seg.parent1 = find_parent(iv1, tmid);
        seg.parent2 = find_parent(iv2, tmid);
        if (seg.parent1 < 0 || seg.parent2 < 0)
            throw std::runtime_error("intersect_interface: interface traces do not cover Gamma");
        seg.h1 = m1.facet_length(m1.interface_facets[static_cast<std::size_t>(seg.parent1)]);
        seg.h2 = m2.facet_length(m2.interface_facets[static_cast<std::size_t>(seg.parent2)]);
        const int id = static_cast<int>(gamma.segments.size());
        gamma.segments_of_facet1[static_cast<std::size_t>(seg.parent1)].push_back(id);
        gamma.segments_of_facet2[static_cast<std::size_t>(seg.parent2)].push_back(id);
        gamma.segments.push_back(seg);
    }

    gamma.normal = m1.interface_facets[static_cast<std::size_t>(gamma.segments.front().parent1)].normal;
    const Point2 n2 =
        m2.interface_facets[static_cast<std::size_t>(gamma.segments.front().parent2)].normal;
    if (norm(gamma.normal + n2) > 1e-10)
        throw std::runtime_error("intersect_interface: inconsistent interface normals");

    double covered = 0.0;
    for (const auto& seg : gamma.segments) covered += seg.length();
    if (std::abs(covered - len) > 1e-12 * len)
        throw std::runtime_error("intersect_interface: segments do not partition Gamma");

    return gamma;
}

} // namespace mortar
