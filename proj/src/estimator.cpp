#include "mortar/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "mortar/quadrature.hpp"

namespace mortar {

namespace {

double sq(double x) { return x * x; }

// Integral over a segment of the square of an affine integrand given by a
// callable s -> value, s in [0,1]; 3-point Gauss is exact here.
template <typename F>
double segment_l2_sq(const InterfaceSegment& seg, F&& integrand) {
    const auto& quad = QuadratureRule::instance().segment;
    double acc = 0.0;
    for (const auto& qp : quad) acc += qp.weight * sq(integrand(qp.t));
    return acc * seg.length();
}

struct SegmentData {
    double flux1, flux2; // k_i du_i/dn on the segment's parent triangles
    double jump0, jump1; // [u_h] at the segment endpoints
    SegmentCoefficients co;
};

SegmentData segment_data(const InterfaceSegment& seg, const SubdomainMesh& m1,
                         const SubdomainMesh& m2, const InterfaceMesh& gamma, const Solution& u,
                         const CouplingParams& params) {
    SegmentData d;
    const Facet& f1 = m1.interface_facets[static_cast<std::size_t>(seg.parent1)];
    const Facet& f2 = m2.interface_facets[static_cast<std::size_t>(seg.parent2)];
    d.flux1 = params.k1 * dot(p1_gradient(m1, u.u1, f1.tri[0]), gamma.normal);
    d.flux2 = params.k2 * dot(p1_gradient(m2, u.u2, f2.tri[0]), gamma.normal);
    d.jump0 = p1_value(m1, u.u1, f1.tri[0], seg.a) - p1_value(m2, u.u2, f2.tri[0], seg.a);
    d.jump1 = p1_value(m1, u.u1, f1.tri[0], seg.b) - p1_value(m2, u.u2, f2.tri[0], seg.b);
    d.co = segment_coefficients(seg.h1, seg.h2, params);
    return d;
}

} // namespace

double IndicatorSet::global_from_parts() const {
    double acc = 0.0;
    for (int sd = 0; sd < 2; ++sd) {
        for (double v : eta_element[static_cast<std::size_t>(sd)]) acc += sq(v);
        for (double v : eta_interior[static_cast<std::size_t>(sd)]) acc += sq(v);
        for (double v : eta_interface[static_cast<std::size_t>(sd)]) acc += sq(v);
    }
    return std::sqrt(acc);
}

double eta_element(const SubdomainMesh& mesh, int tri, const ScalarField& f, double k) {
    const auto& t = mesh.tri(tri);
    const Point2 a = mesh.vertex(t[0]), b = mesh.vertex(t[1]), c = mesh.vertex(t[2]);
    const double area2 = 2.0 * signed_area(a, b, c);
    double norm_sq = 0.0;
    for (const auto& qp : QuadratureRule::instance().triangle)
        norm_sq += qp.weight * area2 * sq(f(map_to_triangle(qp.bary, a, b, c)));
    const double hK = mesh.triangle_diameter(tri);
    return std::sqrt(hK * hK / k * norm_sq);
}

double eta_interior_facet(const SubdomainMesh& mesh, const Facet& facet,
                          const std::vector<double>& nodal, double k) {
    if (facet.tri[1] < 0)
        throw std::invalid_argument("eta_interior_facet: facet is not interior");
    const Point2 a = mesh.vertex(facet.v[0]);
    const Point2 b = mesh.vertex(facet.v[1]);
    const double hE = dist(a, b);
    Point2 n{b.y - a.y, a.x - b.x};
    n = (1.0 / hE) * n; // orientation is irrelevant under the square
    const Point2 g0 = p1_gradient(mesh, nodal, facet.tri[0]);
    const Point2 g1 = p1_gradient(mesh, nodal, facet.tri[1]);
    const double jump = k * dot(g0 - g1, n);
    return std::sqrt(hE / k * sq(jump) * hE);
}

double eta_interface_facet(int side, int facet_id, const SubdomainMesh& m1,
                           const SubdomainMesh& m2, const InterfaceMesh& gamma, const Solution& u,
                           const CouplingParams& params) {
    if (!u.has_multiplier())
        throw std::invalid_argument("eta_interface_facet: solution carries no multiplier");
    const SubdomainMesh& mesh = side == 1 ? m1 : m2;
    const double k = side == 1 ? params.k1 : params.k2;
    const Facet& facet = mesh.interface_facets[static_cast<std::size_t>(facet_id)];
    const double hE = mesh.facet_length(facet);
    const auto& cover =
        side == 1 ? gamma.segments_of_facet1[static_cast<std::size_t>(facet_id)]
                  : gamma.segments_of_facet2[static_cast<std::size_t>(facet_id)];

    double mismatch_sq = 0.0, jump_sq = 0.0;
    for (int s : cover) {
        const InterfaceSegment& seg = gamma.segments[static_cast<std::size_t>(s)];
        const SegmentData d = segment_data(seg, m1, m2, gamma, u, params);
        const auto& lam = u.lambda[static_cast<std::size_t>(s)];
        const double flux = side == 1 ? d.flux1 : d.flux2;
        mismatch_sq += segment_l2_sq(
            seg, [&](double t) { return (1.0 - t) * lam[0] + t * lam[1] - flux; });
        jump_sq += segment_l2_sq(
            seg, [&](double t) { return (1.0 - t) * d.jump0 + t * d.jump1; });
    }
    return std::sqrt(hE / k * mismatch_sq + k / hE * jump_sq);
}

double eta_interface_facet_substituted(int side, int facet_id, const SubdomainMesh& m1,
                                       const SubdomainMesh& m2, const InterfaceMesh& gamma,
                                       const Solution& u, const CouplingParams& params) {
    const SubdomainMesh& mesh = side == 1 ? m1 : m2;
    const double k = side == 1 ? params.k1 : params.k2;
    const Facet& facet = mesh.interface_facets[static_cast<std::size_t>(facet_id)];
    const double hE = mesh.facet_length(facet);
    const auto& cover =
        side == 1 ? gamma.segments_of_facet1[static_cast<std::size_t>(facet_id)]
                  : gamma.segments_of_facet2[static_cast<std::size_t>(facet_id)];
    const int family = method_family(params.method);

    double mismatch_sq = 0.0, jump_sq = 0.0;
    for (int s : cover) {
        const InterfaceSegment& seg = gamma.segments[static_cast<std::size_t>(s)];
        const SegmentData d = segment_data(seg, m1, m2, gamma, u, params);
        const double flux_jump = d.flux1 - d.flux2;
        auto jump_at = [&](double t) { return (1.0 - t) * d.jump0 + t * d.jump1; };

        // lambda_h - k_i du_i/dn written in terms of the primal solution:
        // families 1 and 3 via the flux-average recovery, family 2 via the
        // master-slave recovery.
        if (family == 2) {
            const double c = params.k2 / (params.alpha * seg.h2);
            if (side == 1)
                mismatch_sq += segment_l2_sq(seg, [&](double t) { return flux_jump + c * jump_at(t); });
            else
                mismatch_sq += segment_l2_sq(seg, [&](double t) { return c * jump_at(t); });
        } else {
            if (side == 1)
                mismatch_sq += segment_l2_sq(
                    seg, [&](double t) { return d.co.w2 * flux_jump + d.co.beta * jump_at(t); });
            else
                mismatch_sq += segment_l2_sq(
                    seg, [&](double t) { return d.co.w1 * flux_jump - d.co.beta * jump_at(t); });
        }
        jump_sq += segment_l2_sq(seg, jump_at);
    }
    return std::sqrt(hE / k * mismatch_sq + k / hE * jump_sq);
}

double oscillation(const SubdomainMesh& mesh, int tri, const ScalarField& f) {
    const auto& t = mesh.tri(tri);
    const Point2 a = mesh.vertex(t[0]), b = mesh.vertex(t[1]), c = mesh.vertex(t[2]);
    const double area2 = 2.0 * signed_area(a, b, c);

    // Elementwise P1 projection of f, then the L2 distance by quadrature.
    const auto& quad = QuadratureRule::instance().triangle;
    std::array<double, 3> rhs{0.0, 0.0, 0.0};
    for (const auto& qp : quad) {
        const double w = qp.weight * area2 * f(map_to_triangle(qp.bary, a, b, c));
        for (int i = 0; i < 3; ++i) rhs[static_cast<std::size_t>(i)] += w * qp.bary[static_cast<std::size_t>(i)];
    }
    const double sum = rhs[0] + rhs[1] + rhs[2];
    std::array<double, 3> coeff{};
    for (int i = 0; i < 3; ++i)
        coeff[static_cast<std::size_t>(i)] = (12.0 * rhs[static_cast<std::size_t>(i)] - 3.0 * sum) / (0.5 * area2);

    double err_sq = 0.0;
    for (const auto& qp : quad) {
        const double fh = coeff[0] * qp.bary[0] + coeff[1] * qp.bary[1] + coeff[2] * qp.bary[2];
        err_sq += qp.weight * area2 * sq(f(map_to_triangle(qp.bary, a, b, c)) - fh);
    }
    err_sq = std::max(err_sq, 0.0);
    return mesh.triangle_diameter(tri) * std::sqrt(err_sq);
}

IndicatorSet compute_indicators(const SubdomainMesh& m1, const SubdomainMesh& m2,
                                const InterfaceMesh& gamma, const Solution& u,
                                const CouplingParams& params, const ScalarField& f1,
                                const ScalarField& f2) {
    IndicatorSet set;
    double global_sq = 0.0;
    for (int sd = 0; sd < 2; ++sd) {
        const SubdomainMesh& mesh = sd == 0 ? m1 : m2;
        const ScalarField& f = sd == 0 ? f1 : f2;
        const double k = sd == 0 ? params.k1 : params.k2;
        const std::vector<double>& nodal = sd == 0 ? u.u1 : u.u2;
        const std::size_t ntri = mesh.triangles.size();

        auto& eta_K = set.eta_element[static_cast<std::size_t>(sd)];
        auto& osc = set.oscillation[static_cast<std::size_t>(sd)];
        eta_K.resize(ntri);
        osc.resize(ntri);
        std::vector<double> total_sq(ntri, 0.0);
        for (std::size_t t = 0; t < ntri; ++t) {
            eta_K[t] = eta_element(mesh, static_cast<int>(t), f, k);
            osc[t] = oscillation(mesh, static_cast<int>(t), f);
            total_sq[t] = sq(eta_K[t]);
            global_sq += sq(eta_K[t]);
        }

        auto& eta_O = set.eta_interior[static_cast<std::size_t>(sd)];
        eta_O.resize(mesh.interior_facets.size());
        for (std::size_t e = 0; e < mesh.interior_facets.size(); ++e) {
            const Facet& facet = mesh.interior_facets[e];
            eta_O[e] = eta_interior_facet(mesh, facet, nodal, k);
            global_sq += sq(eta_O[e]);
            total_sq[static_cast<std::size_t>(facet.tri[0])] += 0.5 * sq(eta_O[e]);
            total_sq[static_cast<std::size_t>(facet.tri[1])] += 0.5 * sq(eta_O[e]);
        }

        auto& eta_G = set.eta_interface[static_cast<std::size_t>(sd)];
        eta_G.resize(mesh.interface_facets.size());
        for (std::size_t e = 0; e < mesh.interface_facets.size(); ++e) {
            eta_G[e] =
                eta_interface_facet(sd + 1, static_cast<int>(e), m1, m2, gamma, u, params);
            global_sq += sq(eta_G[e]);
            total_sq[static_cast<std::size_t>(mesh.interface_facets[e].tri[0])] += sq(eta_G[e]);
        }

        auto& marking = set.marking[static_cast<std::size_t>(sd)];
        marking.resize(ntri);
        for (std::size_t t = 0; t < ntri; ++t) marking[t] = std::sqrt(total_sq[t]);
    }
    set.eta = std::sqrt(global_sq);
    return set;
}

RefinementMarks mark(const IndicatorSet& indicators, double theta) {
    if (!(theta >= 0.0) || theta > 1.0)
        throw std::invalid_argument("mark: theta must lie in [0, 1]");
    double max_value = 0.0;
    for (int sd = 0; sd < 2; ++sd)
        for (double v : indicators.marking[static_cast<std::size_t>(sd)])
            max_value = std::max(max_value, v);

    RefinementMarks marks;
    const double threshold = theta * max_value;
    for (int sd = 0; sd < 2; ++sd) {
        const auto& values = indicators.marking[static_cast<std::size_t>(sd)];
        for (std::size_t t = 0; t < values.size(); ++t)
            if (values[t] > threshold) marks.add(sd + 1, static_cast<int>(t));
    }
    return marks;
}

double max_substitution_mismatch(const SubdomainMesh& m1, const SubdomainMesh& m2,
                                 const InterfaceMesh& gamma, const Solution& u,
                                 const CouplingParams& params) {
    double worst = 0.0;
    for (int side = 1; side <= 2; ++side) {
        const SubdomainMesh& mesh = side == 1 ? m1 : m2;
        for (std::size_t e = 0; e < mesh.interface_facets.size(); ++e) {
            const double a =
                sq(eta_interface_facet(side, static_cast<int>(e), m1, m2, gamma, u, params));
            const double b = sq(eta_interface_facet_substituted(side, static_cast<int>(e), m1, m2,
                                                                gamma, u, params));
            const double scale = std::max(a, b);
            if (scale > 0.0) worst = std::max(worst, std::abs(a - b) / scale);
        }
    }
    return worst;
}

void write_indicator_csv(std::ostream& out, const IndicatorSet& indicators,
                         const RefinementMarks& marks) {
    out << "element_id,subdomain,eta_K,osc_K,E_K,marked\n";
    char buf[160];
    for (int sd = 0; sd < 2; ++sd) {
        const auto& eta_K = indicators.eta_element[static_cast<std::size_t>(sd)];
        for (std::size_t t = 0; t < eta_K.size(); ++t) {
            const bool marked = marks.marked.count({sd + 1, static_cast<int>(t)}) > 0;
            std::snprintf(buf, sizeof(buf), "%zu,%d,%.12e,%.12e,%.12e,%d\n", t, sd + 1, eta_K[t],
                          indicators.oscillation[static_cast<std::size_t>(sd)][t],
                          indicators.marking[static_cast<std::size_t>(sd)][t], marked ? 1 : 0);
            out << buf;
        }
    }
}

} // namespace mortar
