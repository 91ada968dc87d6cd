#include "mortar/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace mortar {

double triangle_min_angle(Point2 a, Point2 b, Point2 c) {
    const double la = dist(b, c);
    const double lb = dist(c, a);
    const double lc = dist(a, b);
    auto angle = [](double opp, double s1, double s2) {
        double cosv = (s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2);
        cosv = std::clamp(cosv, -1.0, 1.0);
        return std::acos(cosv);
    };
    return std::min({angle(la, lb, lc), angle(lb, lc, la), angle(lc, la, lb)});
}

std::array<double, 3> barycentric(Point2 a, Point2 b, Point2 c, Point2 p) {
    const double area = signed_area(a, b, c);
    if (area == 0.0)
        throw std::runtime_error("barycentric: degenerate triangle");
    const double l0 = signed_area(p, b, c) / area;
    const double l1 = signed_area(a, p, c) / area;
    return {l0, l1, 1.0 - l0 - l1};
}

} // namespace mortar
