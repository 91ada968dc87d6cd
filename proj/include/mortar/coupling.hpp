#pragma once

#include <array>
#include <string>
#include <vector>

#include "mortar/fem.hpp"
#include "mortar/interface.hpp"
#include "mortar/mesh.hpp"
#include "mortar/sparse.hpp"

namespace mortar {

enum class Method { NitscheI, NitscheII, NitscheIII, MixedI, MixedII, MixedIII };

bool is_nitsche(Method m);
// I <-> I etc.; the stabilisation family shared by a Nitsche/mixed pair.
int method_family(Method m); // 1, 2 or 3
Method to_mixed(Method m);
Method to_nitsche(Method m);
std::string method_name(Method m);
Method parse_method(const std::string& name); // "I", "II", "III", "mixed-I", ...

struct CouplingParams {
    double k1 = 1.0;
    double k2 = 1.0;
    double alpha = 1e-2;
    Method method = Method::NitscheI;

    CouplingParams() = default;
    // Validates positivity and the master-slave assumption k1 >= k2 for
    // Method II (no silent role swap).
    CouplingParams(double k1, double k2, double alpha, Method method);
};

// Per-segment interface coefficients: the penalty beta, the flux-flux weight
// gamma and the convex flux-average weights (w1 + w2 = 1).
struct SegmentCoefficients {
    double beta = 0.0;
    double gamma = 0.0;
    double w1 = 0.0;
    double w2 = 0.0;
};

SegmentCoefficients segment_coefficients(double h1, double h2, const CouplingParams& params);

// Nitsche system matrix over the primal dofs (dim n1 + n2): subdomain
// stiffness blocks plus the variant's interface terms.  Symmetric; positive
// definite after Dirichlet elimination for admissible alpha.
SparseSymMatrix assemble_nitsche(const SubdomainMesh& m1, const SubdomainMesh& m2,
                                 const InterfaceMesh& gamma, const CouplingParams& params);

// Stabilised mixed saddle-point matrix over primal plus multiplier dofs
// (dim n1 + n2 + 2 * #segments).  Symmetric indefinite.
SparseSymMatrix assemble_mixed(const SubdomainMesh& m1, const SubdomainMesh& m2,
                               const InterfaceMesh& gamma, const CouplingParams& params);

// Discrete multiplier of the Nitsche solution, evaluated per segment at the
// endpoints.  Exact for P1 since all traces are affine per segment.
std::vector<std::array<double, 2>> recover_multiplier(const Solution& u, const SubdomainMesh& m1,
                                                      const SubdomainMesh& m2,
                                                      const InterfaceMesh& gamma,
                                                      const CouplingParams& params);

} // namespace mortar
