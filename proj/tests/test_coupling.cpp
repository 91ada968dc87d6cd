#include <doctest.h>

#include <cmath>
#include <vector>

#include "mortar/coupling.hpp"
#include "mortar/linalg.hpp"
#include "mortar/quadrature.hpp"

using namespace mortar;

namespace {

std::pair<SubdomainMesh, SubdomainMesh> nonmatching() { return build_two_rectangles(2, 2, 2, 3); }

// Deterministic pseudo-random values in [-1, 1].
struct Lcg {
    unsigned state = 777;
    double operator()() {
        state = state * 1664525u + 1013904223u;
        return static_cast<double>(state) / 2147483648.0 - 1.0;
    }
};

} // namespace

TEST_CASE("segment coefficients") {
    SUBCASE("symmetric parameters") {
        const CouplingParams params(1.0, 1.0, 1e-2, Method::NitscheI);
        const SegmentCoefficients c = segment_coefficients(0.1, 0.1, params);
        CHECK(c.beta == doctest::Approx(500.0).epsilon(1e-14));
        CHECK(c.gamma == doctest::Approx(5e-4).epsilon(1e-14));
        CHECK(c.w1 == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(c.w2 == doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("strong material contrast") {
        const CouplingParams params(10.0, 0.1, 1e-2, Method::NitscheI);
        const SegmentCoefficients c = segment_coefficients(0.25, 0.25, params);
        CHECK(c.w1 == doctest::Approx(0.1 / 10.1).epsilon(1e-12));
        CHECK(c.w2 == doctest::Approx(10.0 / 10.1).epsilon(1e-12));
        CHECK(c.w1 + c.w2 == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("joint scaling of the materials") {
        const CouplingParams p1(2.0, 0.5, 1e-2, Method::NitscheI);
        const CouplingParams p2(6.0, 1.5, 1e-2, Method::NitscheI);
        const SegmentCoefficients a = segment_coefficients(0.3, 0.2, p1);
        const SegmentCoefficients b = segment_coefficients(0.3, 0.2, p2);
        CHECK(b.w1 == doctest::Approx(a.w1).epsilon(1e-14));
        CHECK(b.w2 == doctest::Approx(a.w2).epsilon(1e-14));
        CHECK(b.beta == doctest::Approx(3.0 * a.beta).epsilon(1e-14));
    }
    SUBCASE("weights approach the stiff side monotonically") {
        double prev = 0.5;
        for (double ratio : {1e1, 1e2, 1e3, 1e4}) {
            const CouplingParams params(ratio, 1.0, 1e-2, Method::NitscheI);
            const SegmentCoefficients c = segment_coefficients(0.1, 0.1, params);
            CHECK(c.w1 + c.w2 == 1.0); // exact: complementary formulas
            CHECK(c.w2 > prev);
            prev = c.w2;
        }
        CHECK(prev > 0.999);
    }
    SUBCASE("invalid inputs") {
        const CouplingParams params(1.0, 1.0, 1e-2, Method::NitscheI);
        CHECK_THROWS_AS(segment_coefficients(0.0, 0.1, params), std::invalid_argument);
        CHECK_THROWS_AS(CouplingParams(1.0, -1.0, 1e-2, Method::NitscheI), std::invalid_argument);
        CHECK_THROWS_AS(CouplingParams(1.0, 1.0, 0.0, Method::NitscheI), std::invalid_argument);
    }
}

TEST_CASE("method II rejects a slave side stiffer than the master") {
    CHECK_THROWS_AS(CouplingParams(0.1, 10.0, 1e-2, Method::NitscheII), std::invalid_argument);
    CHECK_THROWS_AS(CouplingParams(0.1, 10.0, 1e-2, Method::MixedII), std::invalid_argument);
    CHECK_NOTHROW(CouplingParams(0.1, 10.0, 1e-2, Method::NitscheI));
    CHECK_NOTHROW(CouplingParams(10.0, 10.0, 1e-2, Method::NitscheII));
}

TEST_CASE("nitsche matrices are bitwise symmetric") {
    const auto [m1, m2] = nonmatching();
    const InterfaceMesh gamma = intersect_interface(m1, m2);
    for (Method m : {Method::NitscheI, Method::NitscheII, Method::NitscheIII}) {
        const CouplingParams params(2.0, 0.5, 1e-2, m);
        const SparseSymMatrix A = assemble_nitsche(m1, m2, gamma, params);
        CHECK(A.symmetry_defect() == 0.0);
    }
    CHECK_THROWS_AS(
        assemble_nitsche(m1, m2, gamma, CouplingParams(1.0, 1.0, 1e-2, Method::MixedI)),
        std::invalid_argument);
}

TEST_CASE("mixed matrices are bitwise symmetric") {
    const auto [m1, m2] = nonmatching();
    const InterfaceMesh gamma = intersect_interface(m1, m2);
    for (Method m : {Method::MixedI, Method::MixedII, Method::MixedIII}) {
        const CouplingParams params(2.0, 0.5, 1e-2, m);
        const SparseSymMatrix A = assemble_mixed(m1, m2, gamma, params);
        CHECK(A.dim() == static_cast<int>(m1.vertices.size() + m2.vertices.size() +
                                          2 * gamma.segments.size()));
        CHECK(A.symmetry_defect() == 0.0);
    }
    CHECK_THROWS_AS(
        assemble_mixed(m1, m2, gamma, CouplingParams(1.0, 1.0, 1e-2, Method::NitscheI)),
        std::invalid_argument);
}

TEST_CASE("nitsche matrices are positive definite for admissible alpha") {
    const auto [m1, m2] = nonmatching();
    const InterfaceMesh gamma = intersect_interface(m1, m2);
    const DofMap dofs = build_dofmap(m1, m2, gamma);
    for (Method m : {Method::NitscheI, Method::NitscheII, Method::NitscheIII}) {
        const CouplingParams params(1.0, 1.0, 1e-2, m);
        const SparseSymMatrix A = assemble_nitsche(m1, m2, gamma, params);
        std::vector<double> b(static_cast<std::size_t>(A.dim()), 1.0);
        const ReducedSystem sys = eliminate_dirichlet(A, b, dofs);
        CHECK_NOTHROW(solve_spd(sys.matrix, sys.rhs)); // Cholesky pivots > 0
    }
}

TEST_CASE("method I loses definiteness for an inadmissible alpha") {
    const auto [m1, m2] = build_two_rectangles(4, 4, 4, 4);
    const InterfaceMesh gamma = intersect_interface(m1, m2);
    const DofMap dofs = build_dofmap(m1, m2, gamma);
    const CouplingParams params(1.0, 1.0, 1e3, Method::NitscheI);
    const SparseSymMatrix A = assemble_nitsche(m1, m2, gamma, params);
    std::vector<double> b(static_cast<std::size_t>(A.dim()), 1.0);
    const ReducedSystem sys = eliminate_dirichlet(A, b, dofs);
    CHECK_THROWS_AS(solve_spd(sys.matrix, sys.rhs), IndefiniteError);
}

TEST_CASE("methods I and III differ exactly by the gamma term") {
    const auto [m1, m2] = build_two_rectangles(3, 3, 3, 3);
    const InterfaceMesh gamma = intersect_interface(m1, m2);
    const CouplingParams pI(1.0, 1.0, 1e-2, Method::NitscheI);
    const CouplingParams pIII(1.0, 1.0, 1e-2, Method::NitscheIII);
    const SparseSymMatrix AI = assemble_nitsche(m1, m2, gamma, pI);
    const SparseSymMatrix AIII = assemble_nitsche(m1, m2, gamma, pIII);

    // Reference gamma term assembled directly per segment.
    const int n1 = static_cast<int>(m1.vertices.size());
    SparseSymMatrix G(AI.dim());
    for (const InterfaceSegment& seg : gamma.segments) {
        const SegmentCoefficients co = segment_coefficients(seg.h1, seg.h2, pI);
        for (int side_a = 1; side_a <= 2; ++side_a)
            for (int side_b = 1; side_b <= 2; ++side_b) {
                const SubdomainMesh& ma = side_a == 1 ? m1 : m2;
                const SubdomainMesh& mb = side_b == 1 ? m1 : m2;
                const Facet& fa = ma.interface_facets[static_cast<std::size_t>(
                    side_a == 1 ? seg.parent1 : seg.parent2)];
                const Facet& fb = mb.interface_facets[static_cast<std::size_t>(
                    side_b == 1 ? seg.parent1 : seg.parent2)];
                const auto& ta = ma.tri(fa.tri[0]);
                const auto& tb = mb.tri(fb.tri[0]);
                const auto ga = p1_basis_gradients(ma.vertex(ta[0]), ma.vertex(ta[1]), ma.vertex(ta[2]));
                const auto gb = p1_basis_gradients(mb.vertex(tb[0]), mb.vertex(tb[1]), mb.vertex(tb[2]));
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) {
                        const double fja = (side_a == 1 ? 1.0 : -1.0) * 1.0 *
                                           dot(ga[static_cast<std::size_t>(i)], gamma.normal);
                        const double fjb = (side_b == 1 ? 1.0 : -1.0) * 1.0 *
                                           dot(gb[static_cast<std::size_t>(j)], gamma.normal);
                        G.add((side_a == 1 ? 0 : n1) + ta[static_cast<std::size_t>(i)],
                              (side_b == 1 ? 0 : n1) + tb[static_cast<std::size_t>(j)],
                              co.gamma * seg.length() * fja * fjb);
                    }
            }
    }
    G.compress();
    for (int i = 0; i < AI.dim(); ++i)
        for (int p = AIII.row_ptr()[static_cast<std::size_t>(i)];
             p < AIII.row_ptr()[static_cast<std::size_t>(i) + 1]; ++p) {
            const int j = AIII.col_idx()[static_cast<std::size_t>(p)];
            const double diff = AIII.values()[static_cast<std::size_t>(p)] - AI.entry(i, j);
            CHECK(diff == doctest::Approx(G.entry(i, j)).epsilon(1e-12));
        }
}

TEST_CASE("mixed multiplier rows reproduce the per-segment multiplier equation") {
    const auto [m1, m2] = nonmatching();
    const InterfaceMesh gamma = intersect_interface(m1, m2);
    const DofMap dofs = build_dofmap(m1, m2, gamma);
    const auto& quad = QuadratureRule::instance().segment;

    for (Method method : {Method::MixedI, Method::MixedII, Method::MixedIII}) {
        const CouplingParams params(2.0, 1.0, 1e-2, method);
        const SparseSymMatrix M = assemble_mixed(m1, m2, gamma, params);

        Lcg rng;
        std::vector<double> coeff(static_cast<std::size_t>(M.dim()));
        for (double& v : coeff) v = rng();
        const std::vector<double> y = M.multiply(coeff);

        Solution u;
        u.u1.assign(coeff.begin(), coeff.begin() + dofs.n1);
        u.u2.assign(coeff.begin() + dofs.n1, coeff.begin() + dofs.n_primal());
        u.lambda.resize(gamma.segments.size());
        for (int s = 0; s < dofs.n_segments; ++s)
            u.lambda[static_cast<std::size_t>(s)] = {
                coeff[static_cast<std::size_t>(dofs.multiplier_dof(s, 0))],
                coeff[static_cast<std::size_t>(dofs.multiplier_dof(s, 1))]};
        const TraceEvaluator trace(m1, m2, gamma, u);

        for (int s = 0; s < dofs.n_segments; ++s) {
            const InterfaceSegment& seg = gamma.segments[static_cast<std::size_t>(s)];
            const SegmentCoefficients co = segment_coefficients(seg.h1, seg.h2, params);
            const double f1 = trace.normal_flux(s, 1, params.k1);
            const double f2 = trace.normal_flux(s, 2, params.k2);
            for (int m = 0; m < 2; ++m) {
                double expected = 0.0;
                for (const auto& qp : quad) {
                    const double psi = m == 0 ? 1.0 - qp.t : qp.t;
                    const double lam = trace.multiplier(s, qp.t);
                    const double jump = trace.jump(s, seg.point(qp.t));
                    double stab = 0.0;
                    if (method == Method::MixedI)
                        stab = params.alpha * (seg.h1 / params.k1 * (lam - f1) +
                                               seg.h2 / params.k2 * (lam - f2));
                    else if (method == Method::MixedII)
                        stab = params.alpha * seg.h2 / params.k2 * (lam - f2);
                    else
                        stab = (lam - (co.w1 * f1 + co.w2 * f2)) / co.beta;
                    expected += qp.weight * psi * (jump + stab);
                }
                expected *= -seg.length();
                const double got = y[static_cast<std::size_t>(dofs.multiplier_dof(s, m))];
                CHECK(got == doctest::Approx(expected).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("mixed multiplier block scales linearly in alpha") {
    const auto [m1, m2] = build_two_rectangles(3, 3, 3, 3); // matching traces
    const InterfaceMesh gamma = intersect_interface(m1, m2);
    const DofMap dofs = build_dofmap(m1, m2, gamma);
    const double alpha = 1e-3;
    const SparseSymMatrix A1 =
        assemble_mixed(m1, m2, gamma, CouplingParams(1.0, 1.0, alpha, Method::MixedI));
    const SparseSymMatrix A2 =
        assemble_mixed(m1, m2, gamma, CouplingParams(1.0, 1.0, 2.0 * alpha, Method::MixedI));
    for (int s = 0; s < dofs.n_segments; ++s)
        for (int e = 0; e < 2; ++e)
            for (int f = 0; f < 2; ++f) {
                const int i = dofs.multiplier_dof(s, e);
                const int j = dofs.multiplier_dof(s, f);
                CHECK(A2.entry(i, j) == doctest::Approx(2.0 * A1.entry(i, j)).epsilon(1e-14));
            }
}

TEST_CASE("multiplier recovery") {
    const auto [m1, m2] = build_two_rectangles(4, 4, 4, 5);
    const InterfaceMesh gamma = intersect_interface(m1, m2);

    SUBCASE("patch field gives the exact constant flux") {
        const double k1 = 2.0, k2 = 1.0;
        Solution u;
        for (const Point2& p : m1.vertices) u.u1.push_back(p.x);
        for (const Point2& p : m2.vertices) u.u2.push_back(1.0 + k1 / k2 * (p.x - 1.0));
        for (Method m : {Method::NitscheI, Method::NitscheII, Method::NitscheIII}) {
            const CouplingParams params(k1, k2, 1e-2, m);
            const auto lambda = recover_multiplier(u, m1, m2, gamma, params);
            for (const auto& lam : lambda) {
                CHECK(std::abs(lam[0] - k1) < 1e-10);
                CHECK(std::abs(lam[1] - k1) < 1e-10);
            }
        }
    }

    SUBCASE("zero jump and equal one-sided fluxes reproduce the flux") {
        // u_i = x on both sides with k1 = k2: fluxes equal, jump zero.
        Solution u;
        for (const Point2& p : m1.vertices) u.u1.push_back(p.x);
        for (const Point2& p : m2.vertices) u.u2.push_back(p.x);
        const CouplingParams params(3.0, 3.0, 1e-2, Method::NitscheIII);
        const auto lambda = recover_multiplier(u, m1, m2, gamma, params);
        for (const auto& lam : lambda) {
            CHECK(lam[0] == doctest::Approx(3.0).epsilon(1e-14));
            CHECK(lam[1] == doctest::Approx(3.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("consistency: interpolated linear field with continuous flux") {
    const auto [m1, m2] = build_two_rectangles(4, 4, 4, 5);
    const InterfaceMesh gamma = intersect_interface(m1, m2);
    const double k1 = 2.0, k2 = 0.5;
    // u = x (side 1), 1 + (k1/k2)(x-1) (side 2), plus a tangential part c*y
    // that leaves jumps and normal fluxes untouched.
    const double c = 0.5;
    std::vector<double> coeff;
    for (const Point2& p : m1.vertices) coeff.push_back(p.x + c * p.y);
    for (const Point2& p : m2.vertices) coeff.push_back(1.0 + k1 / k2 * (p.x - 1.0) + c * p.y);

    for (Method m : {Method::NitscheI, Method::NitscheII, Method::NitscheIII}) {
        const CouplingParams params(k1, k2, 1e-2, m);
        const SparseSymMatrix A = assemble_nitsche(m1, m2, gamma, params);
        const std::vector<double> r = A.multiply(coeff);
        // With f = 0 the residual at free dofs must vanish.
        const DofMap dofs = build_dofmap(m1, m2, gamma);
        for (int i = 0; i < dofs.n_primal(); ++i)
            if (!dofs.dirichlet[static_cast<std::size_t>(i)])
                CHECK(std::abs(r[static_cast<std::size_t>(i)]) < 1e-10);
    }
}
