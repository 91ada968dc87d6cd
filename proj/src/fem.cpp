#include "mortar/fem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mortar/quadrature.hpp"

namespace mortar {

int DofMap::n_free_primal() const {
    int n = 0;
    for (bool d : dirichlet)
        if (!d) ++n;
    return n;
}

DofMap build_dofmap(const SubdomainMesh& m1, const SubdomainMesh& m2, const InterfaceMesh& gamma) {
    DofMap dofs;
    dofs.n1 = static_cast<int>(m1.vertices.size());
    dofs.n2 = static_cast<int>(m2.vertices.size());
    dofs.n_segments = static_cast<int>(gamma.segments.size());
    dofs.dirichlet.assign(static_cast<std::size_t>(dofs.n1 + dofs.n2), false);
    for (const Facet& f : m1.dirichlet_facets)
        for (int v : f.v) dofs.dirichlet[static_cast<std::size_t>(dofs.dof(1, v))] = true;
    for (const Facet& f : m2.dirichlet_facets)
        for (int v : f.v) dofs.dirichlet[static_cast<std::size_t>(dofs.dof(2, v))] = true;
    return dofs;
}

std::array<Point2, 3> p1_basis_gradients(Point2 a, Point2 b, Point2 c) {
    const double area2 = 2.0 * signed_area(a, b, c);
    // grad of the hat function at each vertex: rotated opposite edge / (2|K|).
    return {Point2{(b.y - c.y) / area2, (c.x - b.x) / area2},
            Point2{(c.y - a.y) / area2, (a.x - c.x) / area2},
            Point2{(a.y - b.y) / area2, (b.x - a.x) / area2}};
}

double p1_value(const SubdomainMesh& mesh, const std::vector<double>& nodal, int tri, Point2 p) {
    const auto& t = mesh.tri(tri);
    const auto bary = barycentric(mesh.vertex(t[0]), mesh.vertex(t[1]), mesh.vertex(t[2]), p);
    return bary[0] * nodal[static_cast<std::size_t>(t[0])] +
           bary[1] * nodal[static_cast<std::size_t>(t[1])] +
           bary[2] * nodal[static_cast<std::size_t>(t[2])];
}

Point2 p1_gradient(const SubdomainMesh& mesh, const std::vector<double>& nodal, int tri) {
    const auto& t = mesh.tri(tri);
    const auto grads = p1_basis_gradients(mesh.vertex(t[0]), mesh.vertex(t[1]), mesh.vertex(t[2]));
    Point2 g{0.0, 0.0};
    for (int i = 0; i < 3; ++i) {
        const double u = nodal[static_cast<std::size_t>(t[i])];
        g.x += u * grads[static_cast<std::size_t>(i)].x;
        g.y += u * grads[static_cast<std::size_t>(i)].y;
    }
    return g;
}

SparseSymMatrix assemble_stiffness(const SubdomainMesh& mesh, double k) {
    if (k <= 0.0)
        throw std::invalid_argument("assemble_stiffness: material parameter must be positive");
    SparseSymMatrix A(static_cast<int>(mesh.vertices.size()));
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tr = mesh.triangles[t];
        const Point2 a = mesh.vertex(tr[0]), b = mesh.vertex(tr[1]), c = mesh.vertex(tr[2]);
        const double area = signed_area(a, b, c);
        if (!(area > 0.0))
            throw std::runtime_error("assemble_stiffness: degenerate triangle " + std::to_string(t));
        const auto grads = p1_basis_gradients(a, b, c);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                A.add(tr[static_cast<std::size_t>(i)], tr[static_cast<std::size_t>(j)],
                      k * area * dot(grads[static_cast<std::size_t>(i)], grads[static_cast<std::size_t>(j)]));
    }
    return A;
}

std::vector<double> assemble_load(const SubdomainMesh& mesh, const ScalarField& f) {
    std::vector<double> b(mesh.vertices.size(), 0.0);
    const auto& quad = QuadratureRule::instance().triangle;
    for (const auto& tr : mesh.triangles) {
        const Point2 pa = mesh.vertex(tr[0]), pb = mesh.vertex(tr[1]), pc = mesh.vertex(tr[2]);
        const double area2 = 2.0 * signed_area(pa, pb, pc);
        for (const auto& qp : quad) {
            const Point2 p = map_to_triangle(qp.bary, pa, pb, pc);
            const double w = qp.weight * area2 * f(p);
            for (int i = 0; i < 3; ++i)
                b[static_cast<std::size_t>(tr[static_cast<std::size_t>(i)])] +=
                    w * qp.bary[static_cast<std::size_t>(i)];
        }
    }
    return b;
}

TraceEvaluator::TraceEvaluator(const SubdomainMesh& m1, const SubdomainMesh& m2,
                               const InterfaceMesh& gamma, const Solution& u)
    : m1_(m1), m2_(m2), gamma_(gamma), u_(u) {}

int TraceEvaluator::parent_triangle(int seg, int side) const {
    const InterfaceSegment& s = gamma_.segments[static_cast<std::size_t>(seg)];
    const int facet = side == 1 ? s.parent1 : s.parent2;
    const auto& facets = side == 1 ? m1_.interface_facets : m2_.interface_facets;
    return facets[static_cast<std::size_t>(facet)].tri[0];
}

double TraceEvaluator::value(int seg, int side, Point2 p) const {
    const InterfaceSegment& s = gamma_.segments[static_cast<std::size_t>(seg)];
    // Reject points that do not lie on the segment.
    const double along = dot(p - s.a, s.b - s.a) / (s.length() * s.length());
    const Point2 foot = s.point(along);
    if (along < -1e-10 || along > 1.0 + 1e-10 || dist(foot, p) > 1e-10 * (1.0 + s.length()))
        throw std::runtime_error("trace value: point is not on the segment");
    return p1_value(mesh(side), u_.nodal(side), parent_triangle(seg, side), p);
}

double TraceEvaluator::normal_flux(int seg, int side, double k) const {
    const Point2 g = p1_gradient(mesh(side), u_.nodal(side), parent_triangle(seg, side));
    return k * dot(g, gamma_.normal);
}

double TraceEvaluator::jump(int seg, Point2 p) const {
    return value(seg, 1, p) - value(seg, 2, p);
}

double TraceEvaluator::multiplier(int seg, double s) const {
    if (!u_.has_multiplier())
        throw std::logic_error("trace: solution carries no multiplier");
    const auto& lam = u_.lambda[static_cast<std::size_t>(seg)];
    return (1.0 - s) * lam[0] + s * lam[1];
}

std::vector<std::array<double, 3>> project_f(const SubdomainMesh& mesh, const ScalarField& f) {
    std::vector<std::array<double, 3>> result(mesh.triangles.size());
    const auto& quad = QuadratureRule::instance().triangle;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tr = mesh.triangles[t];
        const Point2 pa = mesh.vertex(tr[0]), pb = mesh.vertex(tr[1]), pc = mesh.vertex(tr[2]);
        const double area = signed_area(pa, pb, pc);
        std::array<double, 3> rhs{0.0, 0.0, 0.0};
        for (const auto& qp : quad) {
            const Point2 p = map_to_triangle(qp.bary, pa, pb, pc);
            const double w = qp.weight * 2.0 * area * f(p);
            for (int i = 0; i < 3; ++i) rhs[static_cast<std::size_t>(i)] += w * qp.bary[static_cast<std::size_t>(i)];
        }
        // P1 mass matrix is |K|/12 (I + ee^T); inverse (12/|K|)(I - ee^T/4).
        const double s = rhs[0] + rhs[1] + rhs[2];
        for (int i = 0; i < 3; ++i)
            result[t][static_cast<std::size_t>(i)] =
                (12.0 * rhs[static_cast<std::size_t>(i)] - 3.0 * s) / area;
    }
    return result;
}

std::vector<double> ReducedSystem::expand(const std::vector<double>& reduced) const {
    std::vector<double> full = dirichlet_values;
    for (std::size_t r = 0; r < reduced_to_full.size(); ++r)
        full[static_cast<std::size_t>(reduced_to_full[r])] = reduced[r];
    return full;
}

ReducedSystem eliminate_dirichlet(const SparseSymMatrix& A, const std::vector<double>& b,
                                  const DofMap& dofs, const std::vector<double>* dirichlet_values) {
    if (static_cast<int>(b.size()) != A.dim() || A.dim() < dofs.n_primal())
        throw std::invalid_argument("eliminate_dirichlet: dimension mismatch");
    if (!A.compressed())
        throw std::logic_error("eliminate_dirichlet: matrix not compressed");

    const int n = A.dim();
    ReducedSystem sys;
    sys.full_to_reduced.assign(static_cast<std::size_t>(n), -1);
    sys.dirichlet_values.assign(static_cast<std::size_t>(n), 0.0);

    auto is_dirichlet = [&](int dof) {
        return dof < dofs.n_primal() && dofs.dirichlet[static_cast<std::size_t>(dof)];
    };
    for (int i = 0; i < n; ++i) {
        if (is_dirichlet(i)) {
            if (dirichlet_values)
                sys.dirichlet_values[static_cast<std::size_t>(i)] =
                    (*dirichlet_values)[static_cast<std::size_t>(i)];
        } else {
            sys.full_to_reduced[static_cast<std::size_t>(i)] =
                static_cast<int>(sys.reduced_to_full.size());
            sys.reduced_to_full.push_back(i);
        }
    }

    const int nr = static_cast<int>(sys.reduced_to_full.size());
    sys.matrix = SparseSymMatrix(nr);
    sys.rhs.assign(static_cast<std::size_t>(nr), 0.0);
    for (int r = 0; r < nr; ++r)
        sys.rhs[static_cast<std::size_t>(r)] = b[static_cast<std::size_t>(sys.reduced_to_full[static_cast<std::size_t>(r)])];

    for (int i = 0; i < n; ++i) {
        const int ri = sys.full_to_reduced[static_cast<std::size_t>(i)];
        if (ri < 0) continue;
        for (int p = A.row_ptr()[static_cast<std::size_t>(i)];
             p < A.row_ptr()[static_cast<std::size_t>(i) + 1]; ++p) {
            const int j = A.col_idx()[static_cast<std::size_t>(p)];
            const double v = A.values()[static_cast<std::size_t>(p)];
            const int rj = sys.full_to_reduced[static_cast<std::size_t>(j)];
            if (rj >= 0)
                sys.matrix.add(ri, rj, v);
            else
                sys.rhs[static_cast<std::size_t>(ri)] -=
                    v * sys.dirichlet_values[static_cast<std::size_t>(j)];
        }
    }
    sys.matrix.compress();
    return sys;
}

} // namespace mortar
