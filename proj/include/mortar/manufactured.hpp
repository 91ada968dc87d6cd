#pragma once

#include <functional>
#include <string>

#include "mortar/geometry.hpp"

namespace mortar {

// Exact transmission solutions for verification runs.  `side` is 1 or 2.
//
// linear_patch: piecewise linear in x, continuous at x = 1 with continuous
// flux; exactly representable in the P1 spaces (needs lifted Dirichlet data).
//
// smooth_transmission: u_i = X_i(x) sin(pi y) with
//   X_1 = x/k1,  X_2 = 1/k1 + (x-1)/k2 - (1/k1 + 1/k2)(x-1)^2,
// which vanishes on x = 0 and x = 2, is continuous at x = 1 and carries the
// continuous interface flux lambda = sin(pi y).
struct ManufacturedSolution {
    std::string tag;
    std::function<double(int side, Point2)> u;
    std::function<Point2(int side, Point2)> grad;
    std::function<double(int side, Point2)> f; // -k_i Laplace(u_i)
    std::function<double(Point2)> lambda;      // interface flux, n = +x
};

ManufacturedSolution manufactured_solution(const std::string& tag, double k1, double k2);

} // namespace mortar
