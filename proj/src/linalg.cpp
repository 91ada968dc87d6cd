#include "mortar/linalg.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <cstdio>

namespace mortar {

namespace {

Eigen::SparseMatrix<double> to_eigen(const SparseSymMatrix& A) {
    Eigen::SparseMatrix<double> M(A.dim(), A.dim());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(A.values().size());
    for (int r = 0; r < A.dim(); ++r)
        for (int p = A.row_ptr()[static_cast<std::size_t>(r)];
             p < A.row_ptr()[static_cast<std::size_t>(r) + 1]; ++p)
            triplets.emplace_back(r, A.col_idx()[static_cast<std::size_t>(p)],
                                  A.values()[static_cast<std::size_t>(p)]);
    M.setFromTriplets(triplets.begin(), triplets.end());
    return M;
}

double vector_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// b - A x accumulated in extended precision; plain double accumulation
// floors the attainable residual at eps * |A||x| / |b|, which is too coarse
// for the finest meshes.
std::vector<double> residual_vector(const SparseSymMatrix& A, const std::vector<double>& x,
                                    const std::vector<double>& b) {
    std::vector<double> r(b.size());
    for (int i = 0; i < A.dim(); ++i) {
        long double acc = b[static_cast<std::size_t>(i)];
        for (int p = A.row_ptr()[static_cast<std::size_t>(i)];
             p < A.row_ptr()[static_cast<std::size_t>(i) + 1]; ++p)
            acc -= static_cast<long double>(A.values()[static_cast<std::size_t>(p)]) *
                   static_cast<long double>(
                       x[static_cast<std::size_t>(A.col_idx()[static_cast<std::size_t>(p)])]);
        r[static_cast<std::size_t>(i)] = static_cast<double>(acc);
    }
    return r;
}

double relative_residual(const SparseSymMatrix& A, const std::vector<double>& x,
                         const std::vector<double>& b) {
    const std::vector<double> r = residual_vector(A, x, b);
    const double bnorm = vector_norm(b);
    return bnorm > 0.0 ? vector_norm(r) / bnorm : vector_norm(r);
}

// One step of iterative refinement: x += solve(b - A x).
template <typename Solver>
void refine(const Solver& solver, const SparseSymMatrix& A, const std::vector<double>& b,
            std::vector<double>& x) {
    const std::vector<double> res = residual_vector(A, x, b);
    Eigen::VectorXd r(static_cast<Eigen::Index>(b.size()));
    for (std::size_t i = 0; i < b.size(); ++i) r[static_cast<Eigen::Index>(i)] = res[i];
    const Eigen::VectorXd dx = solver.solve(r);
    for (std::size_t i = 0; i < b.size(); ++i) x[i] += dx[static_cast<Eigen::Index>(i)];
}

} // namespace

std::pair<std::vector<double>, SolveReport>
solve_spd(const SparseSymMatrix& A, const std::vector<double>& b, double tol) {
    if (!A.compressed())
        throw std::logic_error("solve_spd: matrix not compressed");
    if (static_cast<int>(b.size()) != A.dim())
        throw std::invalid_argument("solve_spd: dimension mismatch");
    if (tol <= 0.0)
        throw std::invalid_argument("solve_spd: tolerance must be positive");

    SolveReport report;
    if (A.dim() == 0) return {{}, report};

    const Eigen::SparseMatrix<double> M = to_eigen(A);
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
    llt.compute(M);
    if (llt.info() != Eigen::Success) {
        report.definite = false;
        throw IndefiniteError("solve_spd: nonpositive pivot, matrix is not positive definite");
    }

    Eigen::VectorXd rhs(A.dim());
    for (int i = 0; i < A.dim(); ++i) rhs[i] = b[static_cast<std::size_t>(i)];
    const Eigen::VectorXd sol = llt.solve(rhs);

    std::vector<double> x(b.size());
    for (int i = 0; i < A.dim(); ++i) x[static_cast<std::size_t>(i)] = sol[i];

    report.relative_residual = relative_residual(A, x, b);
    while (report.relative_residual > tol && report.refinement_steps < 3) {
        refine(llt, A, b, x);
        report.relative_residual = relative_residual(A, x, b);
        report.refinement_steps += 1;
    }
    if (report.relative_residual > tol) {
        char msg[96];
        std::snprintf(msg, sizeof(msg), "solve_spd: residual %.3e exceeds tolerance %.3e",
                      report.relative_residual, tol);
        throw std::runtime_error(msg);
    }
    return {x, report};
}

std::pair<std::vector<double>, SolveReport>
solve_symmetric_indefinite(const SparseSymMatrix& M, const std::vector<double>& b, double tol) {
    if (!M.compressed())
        throw std::logic_error("solve_symmetric_indefinite: matrix not compressed");
    if (static_cast<int>(b.size()) != M.dim())
        throw std::invalid_argument("solve_symmetric_indefinite: dimension mismatch");
    if (tol <= 0.0)
        throw std::invalid_argument("solve_symmetric_indefinite: tolerance must be positive");

    SolveReport report;
    if (M.dim() == 0) return {{}, report};

    // Structurally empty rows make the factorization's failure message vague;
    // report them by index up front.
    for (int r = 0; r < M.dim(); ++r) {
        bool nonzero = false;
        for (int p = M.row_ptr()[static_cast<std::size_t>(r)];
             p < M.row_ptr()[static_cast<std::size_t>(r) + 1]; ++p)
            nonzero = nonzero || M.values()[static_cast<std::size_t>(p)] != 0.0;
        if (!nonzero)
            throw SingularError("solve_symmetric_indefinite: row " + std::to_string(r) +
                                " is structurally zero");
    }

    const Eigen::SparseMatrix<double> A = to_eigen(M);
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
        throw SingularError("solve_symmetric_indefinite: " + lu.lastErrorMessage());

    Eigen::VectorXd rhs(M.dim());
    for (int i = 0; i < M.dim(); ++i) rhs[i] = b[static_cast<std::size_t>(i)];
    const Eigen::VectorXd sol = lu.solve(rhs);

    std::vector<double> x(b.size());
    for (int i = 0; i < M.dim(); ++i) x[static_cast<std::size_t>(i)] = sol[i];

    report.relative_residual = relative_residual(M, x, b);
    while (report.relative_residual > tol && report.refinement_steps < 3) {
        refine(lu, M, b, x);
        report.relative_residual = relative_residual(M, x, b);
        report.refinement_steps += 1;
    }
    if (report.relative_residual > tol) {
        char msg[96];
        std::snprintf(msg, sizeof(msg),
                      "solve_symmetric_indefinite: residual %.3e exceeds tolerance %.3e",
                      report.relative_residual, tol);
        throw std::runtime_error(msg);
    }
    return {x, report};
}

} // namespace mortar
