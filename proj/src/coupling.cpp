#include "mortar/coupling.hpp"

#include <cmath>
#include <stdexcept>

#include "mortar/quadrature.hpp"

namespace mortar {

bool is_nitsche(Method m) {
    return m == Method::NitscheI || m == Method::NitscheII || m == Method::NitscheIII;
}

int method_family(Method m) {
    switch (m) {
    case Method::NitscheI:
    case Method::MixedI: return 1;
    case Method::NitscheII:
    case Method::MixedII: return 2;
    default: return 3;
    }
}

Method to_mixed(Method m) {
    switch (method_family(m)) {
    case 1: return Method::MixedI;
    case 2: return Method::MixedII;
    default: return Method::MixedIII;
    }
}

Method to_nitsche(Method m) {
    switch (method_family(m)) {
    case 1: return Method::NitscheI;
    case 2: return Method::NitscheII;
    default: return Method::NitscheIII;
    }
}

std::string method_name(Method m) {
    switch (m) {
    case Method::NitscheI: return "nitsche-I";
    case Method::NitscheII: return "nitsche-II";
    case Method::NitscheIII: return "nitsche-III";
    case Method::MixedI: return "mixed-I";
    case Method::MixedII: return "mixed-II";
    default: return "mixed-III";
    }
}

Method parse_method(const std::string& name) {
    if (name == "I" || name == "nitsche-I") return Method::NitscheI;
    if (name == "II" || name == "nitsche-II") return Method::NitscheII;
    if (name == "III" || name == "nitsche-III") return Method::NitscheIII;
    if (name == "mixed-I") return Method::MixedI;
    if (name == "mixed-II") return Method::MixedII;
    if (name == "mixed-III") return Method::MixedIII;
    throw std::invalid_argument("unknown method '" + name +
                                "' (expected I, II, III, mixed-I, mixed-II or mixed-III)");
}

CouplingParams::CouplingParams(double k1_, double k2_, double alpha_, Method method_)
    : k1(k1_), k2(k2_), alpha(alpha_), method(method_) {
    if (!(k1 > 0.0) || !(k2 > 0.0))
        throw std::invalid_argument("coupling: material parameters must be positive");
    if (!(alpha > 0.0))
        throw std::invalid_argument("coupling: stabilisation parameter must be positive");
    if (method_family(method) == 2 && k1 < k2)
        throw std::invalid_argument(
            "coupling: Method II requires k1 >= k2 (Omega_1 is the master side); "
            "relabel the subdomains so the stiffer one is the master");
}

SegmentCoefficients segment_coefficients(double h1, double h2, const CouplingParams& params) {
    if (!(h1 > 0.0) || !(h2 > 0.0))
        throw std::invalid_argument("segment_coefficients: mesh sizes must be positive");
    const double denom = params.k2 * h1 + params.k1 * h2;
    SegmentCoefficients c;
    c.beta = params.k1 * params.k2 / (params.alpha * denom);
    c.gamma = params.alpha * h1 * h2 / denom;
    c.w1 = params.k2 * h1 / denom;
    c.w2 = params.k1 * h2 / denom;
    return c;
}

namespace {

constexpr int kSegQuad = 3;

// Traces of the six primal basis functions (three per parent triangle) on one
// intersection segment: values at the segment quadrature points and the
// constant normal flux k_i dphi/dn.
struct SegmentTraces {
    double length = 0.0;
    std::array<double, kSegQuad> qs{};             // quad parameters in [0,1]
    std::array<double, kSegQuad> qw{};             // quad weights (sum 1)
    std::array<int, 6> dof{};                      // global primal dof
    std::array<int, 6> side{};                     // 1 or 2
    std::array<std::array<double, kSegQuad>, 6> phi{};
    std::array<double, 6> flux{};                  // k_i dphi/dn
};

SegmentTraces segment_traces(const SubdomainMesh& m1, const SubdomainMesh& m2,
                             const InterfaceMesh& gamma, const InterfaceSegment& seg,
                             double k1, double k2, int n1_offset) {
    SegmentTraces tr;
    tr.length = seg.length();
    const auto& quad = QuadratureRule::instance().segment;
    for (int q = 0; q < kSegQuad; ++q) {
        tr.qs[static_cast<std::size_t>(q)] = quad[static_cast<std::size_t>(q)].t;
        tr.qw[static_cast<std::size_t>(q)] = quad[static_cast<std::size_t>(q)].weight;
    }

    for (int side = 1; side <= 2; ++side) {
        const SubdomainMesh& mesh = side == 1 ? m1 : m2;
        const int facet_id = side == 1 ? seg.parent1 : seg.parent2;
        const Facet& facet = mesh.interface_facets[static_cast<std::size_t>(facet_id)];
        const auto& t = mesh.tri(facet.tri[0]);
        const Point2 a = mesh.vertex(t[0]), b = mesh.vertex(t[1]), c = mesh.vertex(t[2]);
        const auto grads = p1_basis_gradients(a, b, c);
        const double k = side == 1 ? k1 : k2;
        for (int i = 0; i < 3; ++i) {
            const int local = (side - 1) * 3 + i;
            tr.dof[static_cast<std::size_t>(local)] =
                (side == 1 ? 0 : n1_offset) + t[static_cast<std::size_t>(i)];
            tr.side[static_cast<std::size_t>(local)] = side;
            tr.flux[static_cast<std::size_t>(local)] =
                k * dot(grads[static_cast<std::size_t>(i)], gamma.normal);
            for (int q = 0; q < kSegQuad; ++q) {
                const Point2 p = seg.point(tr.qs[static_cast<std::size_t>(q)]);
                const auto bc = barycentric(a, b, c, p);
                tr.phi[static_cast<std::size_t>(local)][static_cast<std::size_t>(q)] =
                    bc[static_cast<std::size_t>(i)];
            }
        }
    }
    return tr;
}

double jump_sign(int side) { return side == 1 ? 1.0 : -1.0; }

} // namespace

SparseSymMatrix assemble_nitsche(const SubdomainMesh& m1, const SubdomainMesh& m2,
                                 const InterfaceMesh& gamma, const CouplingParams& params) {
    if (!is_nitsche(params.method))
        throw std::invalid_argument("assemble_nitsche: mixed variant passed");

    const int n1 = static_cast<int>(m1.vertices.size());
    const int n2 = static_cast<int>(m2.vertices.size());
    SparseSymMatrix A(n1 + n2);
    A.add_block(assemble_stiffness(m1, params.k1), 0);
    A.add_block(assemble_stiffness(m2, params.k2), n1);

    const int family = method_family(params.method);
    for (const InterfaceSegment& seg : gamma.segments) {
        const SegmentTraces tr =
            segment_traces(m1, m2, gamma, seg, params.k1, params.k2, n1);
        const SegmentCoefficients co = segment_coefficients(seg.h1, seg.h2, params);

        // Penalty weight and the flux functional used by the variant.
        const double penalty = family == 2 ? params.k2 / (params.alpha * seg.h2) : co.beta;

        std::array<double, 6> flux_avg{};  // {k dphi/dn} (families 1, 3) or slave flux (2)
        std::array<double, 6> flux_jump{}; // [k dphi/dn]
        std::array<double, 6> jump_int{};  // integral of the trace jump
        for (int a = 0; a < 6; ++a) {
            const int side = tr.side[static_cast<std::size_t>(a)];
            const double f = tr.flux[static_cast<std::size_t>(a)];
            if (family == 2)
                flux_avg[static_cast<std::size_t>(a)] = side == 2 ? f : 0.0;
            else
                flux_avg[static_cast<std::size_t>(a)] = (side == 1 ? co.w1 : co.w2) * f;
            flux_jump[static_cast<std::size_t>(a)] = jump_sign(side) * f;
            double ji = 0.0;
            for (int q = 0; q < kSegQuad; ++q)
                ji += tr.qw[static_cast<std::size_t>(q)] *
                      tr.phi[static_cast<std::size_t>(a)][static_cast<std::size_t>(q)];
            jump_int[static_cast<std::size_t>(a)] = jump_sign(side) * ji * tr.length;
        }

        // Each unordered pair is computed once and written to both slots so
        // the assembled matrix is symmetric to the last bit.
        for (int a = 0; a < 6; ++a)
            for (int b = a; b < 6; ++b) {
                double mass = 0.0;
                for (int q = 0; q < kSegQuad; ++q)
                    mass += tr.qw[static_cast<std::size_t>(q)] *
                            tr.phi[static_cast<std::size_t>(a)][static_cast<std::size_t>(q)] *
                            tr.phi[static_cast<std::size_t>(b)][static_cast<std::size_t>(q)];
                mass *= jump_sign(tr.side[static_cast<std::size_t>(a)]) *
                        jump_sign(tr.side[static_cast<std::size_t>(b)]) * tr.length;

                double entry = penalty * mass -
                               flux_avg[static_cast<std::size_t>(a)] * jump_int[static_cast<std::size_t>(b)] -
                               jump_int[static_cast<std::size_t>(a)] * flux_avg[static_cast<std::size_t>(b)];
                if (family == 1)
                    entry -= co.gamma * tr.length * flux_jump[static_cast<std::size_t>(a)] *
                             flux_jump[static_cast<std::size_t>(b)];
                A.add(tr.dof[static_cast<std::size_t>(a)], tr.dof[static_cast<std::size_t>(b)], entry);
                if (b != a)
                    A.add(tr.dof[static_cast<std::size_t>(b)], tr.dof[static_cast<std::size_t>(a)], entry);
            }
    }
    A.compress();
    return A;
}

SparseSymMatrix assemble_mixed(const SubdomainMesh& m1, const SubdomainMesh& m2,
                               const InterfaceMesh& gamma, const CouplingParams& params) {
    if (is_nitsche(params.method))
        throw std::invalid_argument("assemble_mixed: Nitsche variant passed");

    const int n1 = static_cast<int>(m1.vertices.size());
    const int n2 = static_cast<int>(m2.vertices.size());
    const int nseg = static_cast<int>(gamma.segments.size());
    SparseSymMatrix A(n1 + n2 + 2 * nseg);
    A.add_block(assemble_stiffness(m1, params.k1), 0);
    A.add_block(assemble_stiffness(m2, params.k2), n1);

    const int family = method_family(params.method);
    for (int s = 0; s < nseg; ++s) {
        const InterfaceSegment& seg = gamma.segments[static_cast<std::size_t>(s)];
        const SegmentTraces tr =
            segment_traces(m1, m2, gamma, seg, params.k1, params.k2, n1);
        const SegmentCoefficients co = segment_coefficients(seg.h1, seg.h2, params);
        const std::array<int, 2> mdof{n1 + n2 + 2 * s, n1 + n2 + 2 * s + 1};

        // Multiplier basis (1-s, s) at the quadrature points.
        std::array<std::array<double, kSegQuad>, 2> psi{};
        for (int q = 0; q < kSegQuad; ++q) {
            psi[0][static_cast<std::size_t>(q)] = 1.0 - tr.qs[static_cast<std::size_t>(q)];
            psi[1][static_cast<std::size_t>(q)] = tr.qs[static_cast<std::size_t>(q)];
        }

        // Stabilisation channels: (weight_i, per-dof flux functional) pairs.
        // Families 1 and 2 stabilise with one-sided fluxes, family 3 with the
        // convex combination; weights are alpha h_i / k_i resp. 1/beta.
        struct Channel {
            double weight;
            std::array<double, 6> flux;
        };
        std::vector<Channel> channels;
        auto one_sided = [&](int side) {
            Channel ch;
            ch.weight = params.alpha * (side == 1 ? seg.h1 / params.k1 : seg.h2 / params.k2);
            for (int a = 0; a < 6; ++a)
                ch.flux[static_cast<std::size_t>(a)] =
                    tr.side[static_cast<std::size_t>(a)] == side ? tr.flux[static_cast<std::size_t>(a)] : 0.0;
            return ch;
        };
        if (family == 1) {
            channels.push_back(one_sided(1));
            channels.push_back(one_sided(2));
        } else if (family == 2) {
            channels.push_back(one_sided(2));
        } else {
            Channel ch;
            ch.weight = 1.0 / co.beta;
            for (int a = 0; a < 6; ++a)
                ch.flux[static_cast<std::size_t>(a)] =
                    (tr.side[static_cast<std::size_t>(a)] == 1 ? co.w1 : co.w2) *
                    tr.flux[static_cast<std::size_t>(a)];
            channels.push_back(ch);
        }

        // Jump coupling of B: -([w], mu) - ([v], xi).
        for (int a = 0; a < 6; ++a)
            for (int m = 0; m < 2; ++m) {
                double v = 0.0;
                for (int q = 0; q < kSegQuad; ++q)
                    v += tr.qw[static_cast<std::size_t>(q)] *
                         tr.phi[static_cast<std::size_t>(a)][static_cast<std::size_t>(q)] *
                         psi[static_cast<std::size_t>(m)][static_cast<std::size_t>(q)];
                v *= jump_sign(tr.side[static_cast<std::size_t>(a)]) * tr.length;
                A.add(tr.dof[static_cast<std::size_t>(a)], mdof[static_cast<std::size_t>(m)], -v);
                A.add(mdof[static_cast<std::size_t>(m)], tr.dof[static_cast<std::size_t>(a)], -v);
            }

        // Multiplier mass and basis integrals.
        std::array<double, 2> psi_int{};
        std::array<std::array<double, 2>, 2> psi_mass{};
        for (int m = 0; m < 2; ++m) {
            for (int q = 0; q < kSegQuad; ++q)
                psi_int[static_cast<std::size_t>(m)] += tr.qw[static_cast<std::size_t>(q)] *
                                                        psi[static_cast<std::size_t>(m)][static_cast<std::size_t>(q)];
            psi_int[static_cast<std::size_t>(m)] *= tr.length;
            for (int n = 0; n < 2; ++n) {
                double v = 0.0;
                for (int q = 0; q < kSegQuad; ++q)
                    v += tr.qw[static_cast<std::size_t>(q)] *
                         psi[static_cast<std::size_t>(m)][static_cast<std::size_t>(q)] *
                         psi[static_cast<std::size_t>(n)][static_cast<std::size_t>(q)];
                psi_mass[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)] = v * tr.length;
            }
        }

        // -alpha S contributions.
        for (const Channel& ch : channels) {
            for (int a = 0; a < 6; ++a) {
                const double fa = ch.flux[static_cast<std::size_t>(a)];
                if (fa != 0.0) {
                    for (int b = 0; b < 6; ++b) {
                        const double fb = ch.flux[static_cast<std::size_t>(b)];
                        if (fb != 0.0)
                            A.add(tr.dof[static_cast<std::size_t>(a)], tr.dof[static_cast<std::size_t>(b)],
                                  -ch.weight * tr.length * fa * fb);
                    }
                    for (int m = 0; m < 2; ++m) {
                        const double v = ch.weight * fa * psi_int[static_cast<std::size_t>(m)];
                        A.add(tr.dof[static_cast<std::size_t>(a)], mdof[static_cast<std::size_t>(m)], v);
                        A.add(mdof[static_cast<std::size_t>(m)], tr.dof[static_cast<std::size_t>(a)], v);
                    }
                }
            }
            for (int m = 0; m < 2; ++m)
                for (int n = 0; n < 2; ++n)
                    A.add(mdof[static_cast<std::size_t>(m)], mdof[static_cast<std::size_t>(n)],
                          -ch.weight * psi_mass[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)]);
        }
    }
    A.compress();
    return A;
}

std::vector<std::array<double, 2>> recover_multiplier(const Solution& u, const SubdomainMesh& m1,
                                                      const SubdomainMesh& m2,
                                                      const InterfaceMesh& gamma,
                                                      const CouplingParams& params) {
    const int family = method_family(params.method);
    std::vector<std::array<double, 2>> lambda(gamma.segments.size());
    for (std::size_t s = 0; s < gamma.segments.size(); ++s) {
        const InterfaceSegment& seg = gamma.segments[s];
        const Facet& f1 = m1.interface_facets[static_cast<std::size_t>(seg.parent1)];
        const Facet& f2 = m2.interface_facets[static_cast<std::size_t>(seg.parent2)];
        const double flux1 = params.k1 * dot(p1_gradient(m1, u.u1, f1.tri[0]), gamma.normal);
        const double flux2 = params.k2 * dot(p1_gradient(m2, u.u2, f2.tri[0]), gamma.normal);
        const SegmentCoefficients co = segment_coefficients(seg.h1, seg.h2, params);

        for (int end = 0; end < 2; ++end) {
            const Point2 p = end == 0 ? seg.a : seg.b;
            const double jump = p1_value(m1, u.u1, f1.tri[0], p) - p1_value(m2, u.u2, f2.tri[0], p);
            double value;
            if (family == 2)
                value = flux2 - params.k2 / (params.alpha * seg.h2) * jump;
            else
                value = co.w1 * flux1 + co.w2 * flux2 - co.beta * jump;
            lambda[s][static_cast<std::size_t>(end)] = value;
        }
    }
    return lambda;
}

} // namespace mortar
