#pragma once

#include <array>
#include <vector>

#include "mortar/geometry.hpp"

namespace mortar {

// Quadrature on the reference triangle {(r,s) : r,s >= 0, r+s <= 1} and the
// reference segment [0,1].  The triangle rule is exact for polynomials up to
// degree 5, the segment rule up to degree 5; both have positive weights
// summing to the reference measure (1/2 and 1 respectively).
struct QuadratureRule {
    struct TrianglePoint {
        std::array<double, 3> bary; // barycentric coordinates
        double weight;              // includes the reference area factor
    };
    struct SegmentPoint {
        double t;      // coordinate in [0,1]
        double weight; // weights sum to 1
    };

    std::vector<TrianglePoint> triangle;
    std::vector<SegmentPoint> segment;

    static const QuadratureRule& instance();
};

// Maps a reference triangle point to physical coordinates.
inline Point2 map_to_triangle(const std::array<double, 3>& bary, Point2 a, Point2 b, Point2 c) {
    return {bary[0] * a.x + bary[1] * b.x + bary[2] * c.x,
            bary[0] * a.y + bary[1] * b.y + bary[2] * c.y};
}

} // namespace mortar
