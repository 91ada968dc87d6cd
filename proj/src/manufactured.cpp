#include "mortar/manufactured.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mortar {

ManufacturedSolution manufactured_solution(const std::string& tag, double k1, double k2) {
    if (!(k1 > 0.0) || !(k2 > 0.0))
        throw std::invalid_argument("manufactured_solution: material parameters must be positive");

    ManufacturedSolution ms;
    ms.tag = tag;

    if (tag == "linear_patch") {
        // u1 = x, u2 = 1 + (k1/k2)(x - 1); flux k1 across the interface.
        const double slope2 = k1 / k2;
        ms.u = [slope2](int side, Point2 p) {
            return side == 1 ? p.x : 1.0 + slope2 * (p.x - 1.0);
        };
        ms.grad = [slope2](int side, Point2) {
            return side == 1 ? Point2{1.0, 0.0} : Point2{slope2, 0.0};
        };
        ms.f = [](int, Point2) { return 0.0; };
        ms.lambda = [k1](Point2) { return k1; };
        return ms;
    }

    if (tag == "smooth_transmission") {
        const double pi = std::numbers::pi;
        const double c = 1.0 / k1 + 1.0 / k2;
        auto X = [=](int side, double x) {
            if (side == 1) return x / k1;
            const double d = x - 1.0;
            return 1.0 / k1 + d / k2 - c * d * d;
        };
        auto dX = [=](int side, double x) {
            if (side == 1) return 1.0 / k1;
            return 1.0 / k2 - 2.0 * c * (x - 1.0);
        };
        auto ddX = [=](int side) { return side == 1 ? 0.0 : -2.0 * c; };

        ms.u = [=](int side, Point2 p) { return X(side, p.x) * std::sin(pi * p.y); };
        ms.grad = [=](int side, Point2 p) {
            return Point2{dX(side, p.x) * std::sin(pi * p.y),
                          X(side, p.x) * pi * std::cos(pi * p.y)};
        };
        ms.f = [=](int side, Point2 p) {
            const double k = side == 1 ? k1 : k2;
            return -k * (ddX(side) - pi * pi * X(side, p.x)) * std::sin(pi * p.y);
        };
        ms.lambda = [=](Point2 p) { return std::sin(pi * p.y); };
        return ms;
    }

    throw std::invalid_argument("manufactured_solution: unknown tag '" + tag + "'");
}

} // namespace mortar
