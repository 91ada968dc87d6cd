#pragma once

#include <array>
#include <functional>
#include <vector>

#include "mortar/interface.hpp"
#include "mortar/mesh.hpp"
#include "mortar/sparse.hpp"

namespace mortar {

using ScalarField = std::function<double(Point2)>;

// Degrees of freedom of the coupled problem: one dof per vertex of each
// subdomain mesh, then two multiplier dofs per intersection segment
// (discontinuous P1 on Gamma).
struct DofMap {
    int n1 = 0; // vertices of Omega_1
    int n2 = 0;
    int n_segments = 0;
    std::vector<bool> dirichlet; // size n1 + n2

    int dof(int side, int vertex) const { return side == 1 ? vertex : n1 + vertex; }
    int multiplier_dof(int segment, int end) const { return n1 + n2 + 2 * segment + end; }
    int n_primal() const { return n1 + n2; }
    int n_multiplier() const { return 2 * n_segments; }
    int n_free_primal() const;
};

DofMap build_dofmap(const SubdomainMesh& m1, const SubdomainMesh& m2, const InterfaceMesh& gamma);

// Discrete solution: nodal values per subdomain, optional multiplier
// endpoint values per intersection segment.
struct Solution {
    std::vector<double> u1, u2;
    std::vector<std::array<double, 2>> lambda;

    bool has_multiplier() const { return !lambda.empty(); }
    const std::vector<double>& nodal(int side) const { return side == 1 ? u1 : u2; }
};

// P1 evaluation helpers on one triangle.
double p1_value(const SubdomainMesh& mesh, const std::vector<double>& nodal, int tri, Point2 p);
Point2 p1_gradient(const SubdomainMesh& mesh, const std::vector<double>& nodal, int tri);

// Gradients of the three P1 basis functions on a triangle.
std::array<Point2, 3> p1_basis_gradients(Point2 a, Point2 b, Point2 c);

// Stiffness matrix (k grad u, grad v) over one subdomain (dim = #vertices).
SparseSymMatrix assemble_stiffness(const SubdomainMesh& mesh, double k);

// Load vector (f, v) over one subdomain.
std::vector<double> assemble_load(const SubdomainMesh& mesh, const ScalarField& f);

// Traces of the discrete solution on the intersection mesh.
class TraceEvaluator {
public:
    TraceEvaluator(const SubdomainMesh& m1, const SubdomainMesh& m2, const InterfaceMesh& gamma,
                   const Solution& u);

    // Value of u_i at a point of segment `seg` (side in {1,2}).
    double value(int seg, int side, Point2 p) const;
    // k_i du_i/dn with n the Omega_1 -> Omega_2 normal; constant per segment.
    double normal_flux(int seg, int side, double k) const;
    // u_1 - u_2 at a point of the segment.
    double jump(int seg, Point2 p) const;
    // Multiplier value at parameter s in [0,1] along the segment.
    double multiplier(int seg, double s) const;

private:
    int parent_triangle(int seg, int side) const;
    const SubdomainMesh& mesh(int side) const { return side == 1 ? m1_ : m2_; }

    const SubdomainMesh& m1_;
    const SubdomainMesh& m2_;
    const InterfaceMesh& gamma_;
    const Solution& u_;
};

// Elementwise L2 projection of f onto P1(K); [t] holds the three local
// vertex values of the projection on triangle t.
std::vector<std::array<double, 3>> project_f(const SubdomainMesh& mesh, const ScalarField& f);

// Dirichlet elimination with optional inhomogeneous data (interpolated
// lifting): reduced rhs is b_f - A_fd g_d.  Multiplier dofs are always free.
struct ReducedSystem {
    SparseSymMatrix matrix;
    std::vector<double> rhs;
    std::vector<int> full_to_reduced; // -1 for eliminated dofs
    std::vector<int> reduced_to_full;
    std::vector<double> dirichlet_values; // full size

    std::vector<double> expand(const std::vector<double>& reduced) const;
};

ReducedSystem eliminate_dirichlet(const SparseSymMatrix& A, const std::vector<double>& b,
                                  const DofMap& dofs,
                                  const std::vector<double>* dirichlet_values = nullptr);

} // namespace mortar
