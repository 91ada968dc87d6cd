#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mortar/sparse.hpp"

namespace mortar {

struct SolveReport {
    double relative_residual = 0.0;
    bool definite = true; // SPD path: no nonpositive pivot encountered
    int refinement_steps = 0;
};

// Nonpositive pivot detected while factorizing a matrix expected to be SPD.
struct IndefiniteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sparse Cholesky with AMD ordering.  Throws IndefiniteError when the
// factorization hits a nonpositive pivot, std::runtime_error when the
// residual contract cannot be met.
std::pair<std::vector<double>, SolveReport>
solve_spd(const SparseSymMatrix& A, const std::vector<double>& b, double tol = 1e-12);

// Sparse LU on the symmetric pattern for saddle-point systems.  Deterministic
// pivot order; throws SingularError naming the failing row/pivot.
std::pair<std::vector<double>, SolveReport>
solve_symmetric_indefinite(const SparseSymMatrix& M, const std::vector<double>& b,
                           double tol = 1e-10);

} // namespace mortar
