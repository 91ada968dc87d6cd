#include "mortar/quadrature.hpp"

#include <cmath>

namespace mortar {

namespace {

QuadratureRule build_rule() {
    QuadratureRule rule;

    // 7-point degree-5 triangle rule (centroid plus two symmetric orbits).
    // Normalized weights 9/40, (155 +- sqrt(15))/1200 sum to one; the stored
    // weights carry the reference area 1/2.
    const double s15 = std::sqrt(15.0);
    const double a1 = (6.0 + s15) / 21.0;
    const double a2 = (6.0 - s15) / 21.0;
    const double w0 = 9.0 / 80.0;
    const double w1 = (155.0 + s15) / 2400.0;
    const double w2 = (155.0 - s15) / 2400.0;

    rule.triangle.push_back({{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, w0});
    auto orbit = [&](double a, double w) {
        const double b = 1.0 - 2.0 * a;
        rule.triangle.push_back({{b, a, a}, w});
        rule.triangle.push_back({{a, b, a}, w});
        rule.triangle.push_back({{a, a, b}, w});
    };
    orbit(a1, w1);
    orbit(a2, w2);

    // 3-point Gauss-Legendre on [0,1], exact through degree 5.
    const double g = 0.5 * std::sqrt(3.0 / 5.0);
    rule.segment.push_back({0.5 - g, 5.0 / 18.0});
    rule.segment.push_back({0.5, 8.0 / 18.0});
    rule.segment.push_back({0.5 + g, 5.0 / 18.0});

    return rule;
}

} // namespace

const QuadratureRule& QuadratureRule::instance() {
    static const QuadratureRule rule = build_rule();
    return rule;
}

} // namespace mortar
