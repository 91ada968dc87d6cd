#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "mortar/coupling.hpp"
#include "mortar/fem.hpp"
#include "mortar/interface.hpp"
#include "mortar/mesh.hpp"

namespace mortar {

// Local residual indicators of one solve.  Index [0]/[1] refers to the
// subdomain; entries are indicator values (not squares).
struct IndicatorSet {
    std::array<std::vector<double>, 2> eta_element;   // per triangle
    std::array<std::vector<double>, 2> eta_interior;  // per interior facet
    std::array<std::vector<double>, 2> eta_interface; // per interface facet
    std::array<std::vector<double>, 2> oscillation;   // per triangle
    std::array<std::vector<double>, 2> marking;       // element totals E_K
    double eta = 0.0;                                 // global estimator

    double global_from_parts() const;
};

// (h_K^2/k) ||div k grad u_h + f||_{0,K}^2; the divergence vanishes for P1.
double eta_element(const SubdomainMesh& mesh, int tri, const ScalarField& f, double k);

// (h_E/k) ||[k du_h/dn]||_{0,E}^2 across an interior facet.
double eta_interior_facet(const SubdomainMesh& mesh, const Facet& facet,
                          const std::vector<double>& nodal, double k);

// (h_E/k_i) ||lambda_h - k_i du_i/dn||_{0,E}^2 + (k_i/h_E) ||[u_h]||_{0,E}^2
// for an interface facet E of side i, integrated over the intersection
// segments covering E.  Requires the multiplier.
double eta_interface_facet(int side, int facet_id, const SubdomainMesh& m1,
                           const SubdomainMesh& m2, const InterfaceMesh& gamma,
                           const Solution& u, const CouplingParams& params);

// Same quantity with the discrete multiplier substituted by its closed-form
// expression, evaluated from the primal solution only.
double eta_interface_facet_substituted(int side, int facet_id, const SubdomainMesh& m1,
                                       const SubdomainMesh& m2, const InterfaceMesh& gamma,
                                       const Solution& u, const CouplingParams& params);

// osc_K(f) = h_K ||f - f_h||_{0,K} with f_h the elementwise L2 projection.
double oscillation(const SubdomainMesh& mesh, int tri, const ScalarField& f);

// All indicators, oscillation, element marking totals and the global eta.
IndicatorSet compute_indicators(const SubdomainMesh& m1, const SubdomainMesh& m2,
                                const InterfaceMesh& gamma, const Solution& u,
                                const CouplingParams& params, const ScalarField& f1,
                                const ScalarField& f2);

// Maximum marking criterion: K is marked iff E_K > theta * max E_K', the
// maximum taken over both subdomains.  Exact ties are not marked.
RefinementMarks mark(const IndicatorSet& indicators, double theta);

// Largest relative mismatch between the multiplier-based and substituted
// interface indicators (squared values) over all interface facets.
double max_substitution_mismatch(const SubdomainMesh& m1, const SubdomainMesh& m2,
                                 const InterfaceMesh& gamma, const Solution& u,
                                 const CouplingParams& params);

// CSV dump: element_id,subdomain,eta_K,osc_K,E_K,marked
void write_indicator_csv(std::ostream& out, const IndicatorSet& indicators,
                         const RefinementMarks& marks);

} // namespace mortar
