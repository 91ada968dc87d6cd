#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mortar/coupling.hpp"
#include "mortar/estimator.hpp"
#include "mortar/fem.hpp"
#include "mortar/interface.hpp"
#include "mortar/linalg.hpp"
#include "mortar/manufactured.hpp"
#include "mortar/mesh.hpp"

namespace mortar {

struct ProblemConfig {
    enum class Geometry { TwoRectangles, LShape };

    Geometry geometry = Geometry::TwoRectangles;
    int nx1 = 4, ny1 = 4, nx2 = 4, ny2 = 4; // two_rectangles subdivisions
    int n = 4;                              // lshape subdivision
    double k1 = 1.0;
    double k2 = 1.0;
    double alpha = 1e-2;
    Method method = Method::NitscheI;
    double theta = 0.7071067811865476; // 1/sqrt(2)
    std::string load = "constant";     // "constant" or "manufactured"
    double load_value = 1.0;
    std::string manufactured_tag = "smooth_transmission";
    int max_dofs = 10000;
    int max_steps = 60;
    double spd_tol = 1e-12;
    double indefinite_tol = 1e-10;

    bool has_exact_solution() const { return load == "manufactured"; }
};

// Flat key = value configuration file; '#' starts a comment.  Unknown keys
// are an error.
ProblemConfig load_config(const std::string& path);
ProblemConfig parse_config(std::istream& in);

struct ConvergenceRecord {
    int step = 0;
    int n_dofs = 0; // free primal dofs
    double eta = 0.0;
    double energy_error = 0.0;     // NaN when no exact solution is known
    double multiplier_error = 0.0; // NaN likewise
    int elements1 = 0;
    int elements2 = 0;
    double min_angle = 0.0;
};

struct SolveResult {
    Solution solution;
    IndicatorSet indicators;
    SolveReport report;
    int n_dofs = 0;
    double energy_error = 0.0;
    double multiplier_error = 0.0;
};

std::pair<SubdomainMesh, SubdomainMesh> build_geometry(const ProblemConfig& config);

// Assemble, solve (SPD path for Nitsche variants, indefinite path for mixed),
// recover the multiplier when needed and compute the error indicators.
SolveResult solve_on_meshes(const ProblemConfig& config, const SubdomainMesh& m1,
                            const SubdomainMesh& m2);
SolveResult solve_once(const ProblemConfig& config);

struct RunOutput {
    std::vector<ConvergenceRecord> records;
    SubdomainMesh m1, m2; // final meshes
    Solution solution;    // final solution
};

// solve -> estimate -> mark -> refine until the dof budget is exhausted.
// When out_dir is nonempty, writes one VTK file per step and convergence.csv.
RunOutput run_adaptive(const ProblemConfig& config, const std::string& out_dir = "");

// Uniform red refinement for `steps` steps.
RunOutput run_uniform(const ProblemConfig& config, int steps, const std::string& out_dir = "");

// Empirical constant of the discrete trace inequality: 1 / max_K rho_K with
// rho_K the largest generalized eigenvalue of the facet-flux form against the
// gradient form on P1(K), over triangles K with an interface facet.
double estimate_trace_constant(const SubdomainMesh& mesh, double k);

// The problem with subdomain labels swapped (geometry mirrored at x = 1 resp.
// the interface), used to run Method II when the slave side is the stiffer
// one.  Only defined for the two-rectangles geometry.
ProblemConfig relabel_subdomains(const ProblemConfig& config);

void export_records_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records);
void export_records_csv_file(const std::string& path,
                             const std::vector<ConvergenceRecord>& records);

// Least-squares slope of log(value) vs log(N) over the last half of the
// records; `value` selects eta (default) or the energy error.
double fit_loglog_slope(const std::vector<ConvergenceRecord>& records,
                        bool use_energy_error = false);

// Errors against a manufactured solution.
double energy_error(const SubdomainMesh& m1, const SubdomainMesh& m2, const Solution& u,
                    const ManufacturedSolution& ms, double k1, double k2);
double multiplier_error(const InterfaceMesh& gamma, const Solution& u,
                        const ManufacturedSolution& ms, const CouplingParams& params);

struct EquivalenceReport {
    double primal_diff = 0.0;     // max-norm over nodal values
    double multiplier_diff = 0.0; // max-norm over multiplier coefficients
};

// Solves the Nitsche and mixed formulation of the same family on the same
// meshes and reports the solution differences.
EquivalenceReport compare_nitsche_mixed(const ProblemConfig& config, const SubdomainMesh& m1,
                                        const SubdomainMesh& m2);

} // namespace mortar
