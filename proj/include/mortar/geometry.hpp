#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace mortar {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }

// Signed area of the triangle (a, b, c); positive for counterclockwise order.
inline double signed_area(Point2 a, Point2 b, Point2 c) {
    return 0.5 * cross(b - a, c - a);
}

// Longest edge length.
inline double triangle_diameter(Point2 a, Point2 b, Point2 c) {
    return std::max({dist(a, b), dist(b, c), dist(c, a)});
}

// Smallest interior angle in radians.
double triangle_min_angle(Point2 a, Point2 b, Point2 c);

// Barycentric coordinates of p with respect to (a, b, c).
std::array<double, 3> barycentric(Point2 a, Point2 b, Point2 c, Point2 p);

} // namespace mortar
