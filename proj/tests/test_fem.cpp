#include <doctest.h>

#include <cmath>

#include "mortar/fem.hpp"
#include "mortar/quadrature.hpp"

using namespace mortar;

namespace {

SubdomainMesh unit_right_triangle() {
    std::vector<Point2> pts{{0, 0}, {1, 0}, {0, 1}};
    std::vector<std::array<int, 3>> tris{{0, 1, 2}};
    std::vector<std::pair<std::array<int, 2>, FacetClass>> cls{
        {{0, 1}, FacetClass::Dirichlet},
        {{1, 2}, FacetClass::Dirichlet},
        {{0, 2}, FacetClass::Dirichlet}};
    return assemble_mesh(1, pts, tris, cls);
}

// Exact integral of x^a y^b over the unit right triangle: a! b! / (a+b+2)!.
double monomial_integral(int a, int b) {
    auto fact = [](int n) {
        double f = 1.0;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    return fact(a) * fact(b) / fact(a + b + 2);
}

} // namespace

TEST_CASE("quadrature: triangle rule exact through degree 4") {
    const auto& quad = QuadratureRule::instance().triangle;
    double wsum = 0.0;
    for (const auto& qp : quad) {
        CHECK(qp.weight > 0.0);
        wsum += qp.weight;
    }
    CHECK(wsum == doctest::Approx(0.5).epsilon(1e-15)); // reference measure

    const Point2 a{0, 0}, b{1, 0}, c{0, 1};
    for (int da = 0; da + 0 <= 4; ++da)
        for (int db = 0; da + db <= 4; ++db) {
            double val = 0.0;
            for (const auto& qp : quad) {
                const Point2 p = map_to_triangle(qp.bary, a, b, c);
                val += 2.0 * 0.5 * qp.weight * std::pow(p.x, da) * std::pow(p.y, db);
            }
            const double exact = monomial_integral(da, db);
            CHECK(std::abs(val - exact) <= 1e-13 * std::max(1.0, std::abs(exact)));
        }
}

TEST_CASE("quadrature: segment rule exact through degree 5") {
    const auto& quad = QuadratureRule::instance().segment;
    double wsum = 0.0;
    for (const auto& qp : quad) {
        CHECK(qp.weight > 0.0);
        wsum += qp.weight;
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-15));
    for (int d = 0; d <= 5; ++d) {
        double val = 0.0;
        for (const auto& qp : quad) val += qp.weight * std::pow(qp.t, d);
        CHECK(val == doctest::Approx(1.0 / (d + 1)).epsilon(1e-13));
    }
}

TEST_CASE("stiffness: unit right triangle local matrix") {
    const SubdomainMesh mesh = unit_right_triangle();
    SparseSymMatrix A = assemble_stiffness(mesh, 1.0);
    A.compress();
    const double expected[3][3] = {{1.0, -0.5, -0.5}, {-0.5, 0.5, 0.0}, {-0.5, 0.0, 0.5}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(A.entry(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-14));
}

TEST_CASE("stiffness: linear in the material parameter, zero row sums") {
    const auto [m1, m2] = build_two_rectangles(3, 2, 1, 1);
    SparseSymMatrix A1 = assemble_stiffness(m1, 1.0);
    SparseSymMatrix A2 = assemble_stiffness(m1, 2.0);
    A1.compress();
    A2.compress();
    for (int i = 0; i < A1.dim(); ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < A1.dim(); ++j) {
            CHECK(A2.entry(i, j) == doctest::Approx(2.0 * A1.entry(i, j)).epsilon(1e-14));
            row_sum += A1.entry(i, j);
        }
        CHECK(std::abs(row_sum) < 1e-13); // constants in the kernel
    }
}

TEST_CASE("stiffness: degenerate triangle rejected") {
    std::vector<Point2> pts{{0, 0}, {1, 0}, {2, 0}};
    std::vector<std::array<int, 3>> tris{{0, 1, 2}};
    CHECK_THROWS_AS(assemble_mesh(1, pts, tris, {}), std::runtime_error);
}

TEST_CASE("assembly determinism: identical sparse structures") {
    const auto [m1, m2] = build_two_rectangles(4, 3, 2, 5);
    SparseSymMatrix A = assemble_stiffness(m1, 3.7);
    SparseSymMatrix B = assemble_stiffness(m1, 3.7);
    A.compress();
    B.compress();
    CHECK(A.row_ptr() == B.row_ptr());
    CHECK(A.col_idx() == B.col_idx());
    CHECK(A.values() == B.values()); // bitwise
}

TEST_CASE("load vector") {
    const auto [m1, m2] = build_two_rectangles(3, 3, 1, 1);
    SUBCASE("f = 0") {
        const auto b = assemble_load(m1, [](Point2) { return 0.0; });
        for (double v : b) CHECK(v == 0.0);
    }
    SUBCASE("f = 1 integrates to the area") {
        const auto b = assemble_load(m1, [](Point2) { return 1.0; });
        double sum = 0.0;
        for (double v : b) sum += v;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12)); // partition of unity
    }
    SUBCASE("f = x on the unit square") {
        const auto [s1, s2] = build_two_rectangles(1, 1, 1, 1);
        const auto b = assemble_load(s1, [](Point2 p) { return p.x; });
        double sum = 0.0;
        for (double v : b) sum += v;
        CHECK(sum == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("traces on the intersection mesh") {
    const auto [m1, m2] = build_two_rectangles(2, 2, 2, 3);
    const InterfaceMesh gamma = intersect_interface(m1, m2);

    SUBCASE("globally linear field has no jump") {
        Solution u;
        for (const Point2& p : m1.vertices) u.u1.push_back(p.x + 2.0 * p.y);
        for (const Point2& p : m2.vertices) u.u2.push_back(p.x + 2.0 * p.y);
        const TraceEvaluator trace(m1, m2, gamma, u);
        const auto& quad = QuadratureRule::instance().segment;
        for (std::size_t s = 0; s < gamma.segments.size(); ++s)
            for (const auto& qp : quad) {
                const Point2 p = gamma.segments[s].point(qp.t);
                CHECK(std::abs(trace.jump(static_cast<int>(s), p)) < 1e-13);
            }
    }

    SUBCASE("constant-gradient flux") {
        Solution u;
        for (const Point2& p : m1.vertices) u.u1.push_back(p.x);
        for (const Point2& p : m2.vertices) u.u2.push_back(0.0);
        const TraceEvaluator trace(m1, m2, gamma, u);
        CHECK(trace.normal_flux(0, 1, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
    }

    SUBCASE("patch field has a continuous normal flux") {
        const double k1 = 2.0, k2 = 0.5;
        Solution u;
        for (const Point2& p : m1.vertices) u.u1.push_back(p.x);
        for (const Point2& p : m2.vertices) u.u2.push_back(1.0 + k1 / k2 * (p.x - 1.0));
        const TraceEvaluator trace(m1, m2, gamma, u);
        for (std::size_t s = 0; s < gamma.segments.size(); ++s) {
            const double jump = trace.normal_flux(static_cast<int>(s), 1, k1) -
                                trace.normal_flux(static_cast<int>(s), 2, k2);
            CHECK(std::abs(jump) < 1e-10);
        }
    }

    SUBCASE("point off the segment is rejected") {
        Solution u;
        u.u1.assign(m1.vertices.size(), 0.0);
        u.u2.assign(m2.vertices.size(), 0.0);
        const TraceEvaluator trace(m1, m2, gamma, u);
        CHECK_THROWS_AS(trace.value(0, 1, Point2{0.5, 0.5}), std::runtime_error);
    }
}

TEST_CASE("project_f: elementwise L2 projection") {
    const SubdomainMesh tri = unit_right_triangle();
    SUBCASE("reproduces constants and linears") {
        const auto c = project_f(tri, [](Point2) { return 3.25; });
        for (double v : c[0]) CHECK(v == doctest::Approx(3.25).epsilon(1e-13));
        const auto l = project_f(tri, [](Point2 p) { return 1.0 + 2.0 * p.x - 0.5 * p.y; });
        CHECK(l[0][0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(l[0][1] == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(l[0][2] == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("f = x^2: hand-solved 3x3 mass system") {
        // M c = b with b = (1/60, 1/20, 1/60) gives c = (-0.1, 0.7, -0.1),
        // i.e. f_h = 0.8 x - 0.1.
        const auto c = project_f(tri, [](Point2 p) { return p.x * p.x; });
        CHECK(c[0][0] == doctest::Approx(-0.1).epsilon(1e-12));
        CHECK(c[0][1] == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(c[0][2] == doctest::Approx(-0.1).epsilon(1e-12));
        // Orthogonality of the residual against P1.
        const auto& quad = QuadratureRule::instance().triangle;
        for (auto g : {0, 1, 2}) {
            double resid = 0.0;
            for (const auto& qp : quad) {
                const Point2 p = map_to_triangle(qp.bary, {0, 0}, {1, 0}, {0, 1});
                const double fh = -0.1 * qp.bary[0] + 0.7 * qp.bary[1] - 0.1 * qp.bary[2];
                const double test = g == 0 ? 1.0 : (g == 1 ? p.x : p.y);
                resid += qp.weight * (p.x * p.x - fh) * test;
            }
            CHECK(std::abs(resid) < 1e-12);
        }
    }
}

TEST_CASE("dirichlet elimination") {
    const auto [m1, m2] = build_two_rectangles(1, 1, 1, 1);
    const InterfaceMesh gamma = intersect_interface(m1, m2);
    const DofMap dofs = build_dofmap(m1, m2, gamma);

    SUBCASE("all primal dofs of the coarsest mesh are Dirichlet") {
        // Every vertex of the 1x1 grids lies on a Dirichlet facet.
        CHECK(dofs.n_free_primal() == 0);
        SparseSymMatrix A(dofs.n_primal());
        for (int i = 0; i < A.dim(); ++i) A.add(i, i, 1.0);
        A.compress();
        std::vector<double> b(static_cast<std::size_t>(A.dim()), 1.0);
        const ReducedSystem sys = eliminate_dirichlet(A, b, dofs);
        CHECK(sys.matrix.dim() == 0);
        const auto full = sys.expand({});
        for (double v : full) CHECK(v == 0.0);
    }

    SUBCASE("no Dirichlet dofs leaves the system unchanged") {
        DofMap free = dofs;
        std::fill(free.dirichlet.begin(), free.dirichlet.end(), false);
        SparseSymMatrix A(free.n_primal());
        for (int i = 0; i < A.dim(); ++i) A.add(i, i, 2.0);
        A.compress();
        std::vector<double> b(static_cast<std::size_t>(A.dim()), 1.0);
        const ReducedSystem sys = eliminate_dirichlet(A, b, free);
        CHECK(sys.matrix.dim() == A.dim());
        CHECK(sys.rhs == b);
    }

    SUBCASE("strip with two eliminated dofs, inhomogeneous data") {
        // 1D-like chain: -u'' with u(0) = 1, u(2) = 3; interior value is the
        // average of the neighbours: A = tridiag(-1, 2, -1).
        DofMap chain;
        chain.n1 = 3;
        chain.n2 = 0;
        chain.dirichlet = {true, false, true};
        SparseSymMatrix A(3);
        A.add(0, 0, 2.0); A.add(0, 1, -1.0);
        A.add(1, 0, -1.0); A.add(1, 1, 2.0); A.add(1, 2, -1.0);
        A.add(2, 1, -1.0); A.add(2, 2, 2.0);
        A.compress();
        const std::vector<double> b{0.0, 0.0, 0.0};
        const std::vector<double> g{1.0, 0.0, 3.0};
        const ReducedSystem sys = eliminate_dirichlet(A, b, chain, &g);
        REQUIRE(sys.matrix.dim() == 1);
        CHECK(sys.matrix.entry(0, 0) == doctest::Approx(2.0));
        CHECK(sys.rhs[0] == doctest::Approx(4.0)); // -(-1)*1 - (-1)*3
        const auto full = sys.expand({2.0});
        CHECK(full[0] == 1.0);
        CHECK(full[1] == 2.0);
        CHECK(full[2] == 3.0);
    }
}
