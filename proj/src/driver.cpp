#include "mortar/driver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mortar/quadrature.hpp"
#include "mortar/vtk.hpp"

namespace mortar {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ScalarField side_load(const ProblemConfig& config, int side) {
    if (config.load == "constant") {
        const double value = config.load_value;
        return [value](Point2) { return value; };
    }
    if (config.load == "manufactured") {
        const ManufacturedSolution ms =
            manufactured_solution(config.manufactured_tag, config.k1, config.k2);
        return [ms, side](Point2 p) { return ms.f(side, p); };
    }
    throw std::invalid_argument("config: unknown load kind '" + config.load + "'");
}

std::vector<double> dirichlet_lifting(const ProblemConfig& config, const SubdomainMesh& m1,
                                      const SubdomainMesh& m2, const DofMap& dofs, int dim) {
    std::vector<double> values(static_cast<std::size_t>(dim), 0.0);
    if (!config.has_exact_solution()) return values;
    const ManufacturedSolution ms =
        manufactured_solution(config.manufactured_tag, config.k1, config.k2);
    for (int v = 0; v < dofs.n1; ++v) {
        const int d = dofs.dof(1, v);
        if (dofs.dirichlet[static_cast<std::size_t>(d)])
            values[static_cast<std::size_t>(d)] = ms.u(1, m1.vertex(v));
    }
    for (int v = 0; v < dofs.n2; ++v) {
        const int d = dofs.dof(2, v);
        if (dofs.dirichlet[static_cast<std::size_t>(d)])
            values[static_cast<std::size_t>(d)] = ms.u(2, m2.vertex(v));
    }
    return values;
}

} // namespace

std::pair<SubdomainMesh, SubdomainMesh> build_geometry(const ProblemConfig& config) {
    if (config.geometry == ProblemConfig::Geometry::TwoRectangles)
        return build_two_rectangles(config.nx1, config.ny1, config.nx2, config.ny2);
    return build_lshape(config.n);
}

SolveResult solve_on_meshes(const ProblemConfig& config, const SubdomainMesh& m1,
                            const SubdomainMesh& m2) {
    const InterfaceMesh gamma = intersect_interface(m1, m2);
    const DofMap dofs = build_dofmap(m1, m2, gamma);
    const CouplingParams params(config.k1, config.k2, config.alpha, config.method);

    const ScalarField f1 = side_load(config, 1);
    const ScalarField f2 = side_load(config, 2);
    std::vector<double> load = assemble_load(m1, f1);
    const std::vector<double> load2 = assemble_load(m2, f2);
    load.insert(load.end(), load2.begin(), load2.end());

    SolveResult result;
    if (is_nitsche(config.method)) {
        const SparseSymMatrix A = assemble_nitsche(m1, m2, gamma, params);
        const std::vector<double> lifting =
            dirichlet_lifting(config, m1, m2, dofs, A.dim());
        const ReducedSystem sys = eliminate_dirichlet(A, load, dofs, &lifting);
        auto [x, report] = solve_spd(sys.matrix, sys.rhs, config.spd_tol);
        result.report = report;
        const std::vector<double> full = sys.expand(x);
        result.solution.u1.assign(full.begin(), full.begin() + dofs.n1);
        result.solution.u2.assign(full.begin() + dofs.n1, full.end());
        result.solution.lambda = recover_multiplier(result.solution, m1, m2, gamma, params);
    } else {
        const SparseSymMatrix M = assemble_mixed(m1, m2, gamma, params);
        load.resize(static_cast<std::size_t>(M.dim()), 0.0);
        const std::vector<double> lifting =
            dirichlet_lifting(config, m1, m2, dofs, M.dim());
        const ReducedSystem sys = eliminate_dirichlet(M, load, dofs, &lifting);
        auto [x, report] = solve_symmetric_indefinite(sys.matrix, sys.rhs, config.indefinite_tol);
        result.report = report;
        const std::vector<double> full = sys.expand(x);
        result.solution.u1.assign(full.begin(), full.begin() + dofs.n1);
        result.solution.u2.assign(full.begin() + dofs.n1, full.begin() + dofs.n_primal());
        result.solution.lambda.resize(gamma.segments.size());
        for (int s = 0; s < dofs.n_segments; ++s)
            result.solution.lambda[static_cast<std::size_t>(s)] = {
                full[static_cast<std::size_t>(dofs.multiplier_dof(s, 0))],
                full[static_cast<std::size_t>(dofs.multiplier_dof(s, 1))]};
    }

    result.indicators = compute_indicators(m1, m2, gamma, result.solution, params, f1, f2);
    result.n_dofs = dofs.n_free_primal();

    if (config.has_exact_solution()) {
        const ManufacturedSolution ms =
            manufactured_solution(config.manufactured_tag, config.k1, config.k2);
        result.energy_error = energy_error(m1, m2, result.solution, ms, config.k1, config.k2);
        result.multiplier_error = multiplier_error(gamma, result.solution, ms, params);
    } else {
        result.energy_error = kNaN;
        result.multiplier_error = kNaN;
    }
    return result;
}

SolveResult solve_once(const ProblemConfig& config) {
    const auto [m1, m2] = build_geometry(config);
    return solve_on_meshes(config, m1, m2);
}

namespace {

ConvergenceRecord make_record(int step, const SolveResult& res, const SubdomainMesh& m1,
                              const SubdomainMesh& m2) {
    ConvergenceRecord rec;
    rec.step = step;
    rec.n_dofs = res.n_dofs;
    rec.eta = res.indicators.eta;
    rec.energy_error = res.energy_error;
    rec.multiplier_error = res.multiplier_error;
    rec.elements1 = static_cast<int>(m1.triangles.size());
    rec.elements2 = static_cast<int>(m2.triangles.size());
    rec.min_angle = std::min(m1.min_angle(), m2.min_angle());
    return rec;
}

std::string step_vtk_path(const std::string& out_dir, int step) {
    char name[32];
    std::snprintf(name, sizeof(name), "step_%03d.vtk", step);
    return out_dir + "/" + name;
}

void export_step(const std::string& out_dir, int step, const SubdomainMesh& m1,
                 const SubdomainMesh& m2, const Solution& u, const RefinementMarks& marks) {
    if (out_dir.empty()) return;
    std::filesystem::create_directories(out_dir);
    std::vector<double> nodal = u.u1;
    nodal.insert(nodal.end(), u.u2.begin(), u.u2.end());
    write_vtk_file(step_vtk_path(out_dir, step), m1, m2, &nodal, &marks);
}

RunOutput run_loop(const ProblemConfig& config, bool adaptive, int uniform_steps,
                   const std::string& out_dir) {
    auto [m1, m2] = build_geometry(config);
    RunOutput out;
    for (int step = 0;; ++step) {
        SolveResult res = solve_on_meshes(config, m1, m2);
        out.records.push_back(make_record(step, res, m1, m2));

        RefinementMarks marks;
        if (adaptive) {
            marks = mark(res.indicators, config.theta);
        } else {
            for (std::size_t t = 0; t < m1.triangles.size(); ++t)
                marks.add(1, static_cast<int>(t));
            for (std::size_t t = 0; t < m2.triangles.size(); ++t)
                marks.add(2, static_cast<int>(t));
        }
        export_step(out_dir, step, m1, m2, res.solution, marks);

        const bool budget_hit = adaptive ? res.n_dofs > config.max_dofs
                                         : step >= uniform_steps;
        if (budget_hit || step >= config.max_steps || marks.empty()) {
            out.solution = std::move(res.solution);
            out.m1 = std::move(m1);
            out.m2 = std::move(m2);
            break;
        }
        SubdomainMesh next1 = refine_rgb(m1, marks);
        SubdomainMesh next2 = refine_rgb(m2, marks);
        m1 = std::move(next1);
        m2 = std::move(next2);
    }
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        export_records_csv_file(out_dir + "/convergence.csv", out.records);
    }
    return out;
}

} // namespace

RunOutput run_adaptive(const ProblemConfig& config, const std::string& out_dir) {
    return run_loop(config, true, 0, out_dir);
}

RunOutput run_uniform(const ProblemConfig& config, int steps, const std::string& out_dir) {
    if (steps < 1)
        throw std::invalid_argument("run_uniform: steps must be >= 1");
    return run_loop(config, false, steps, out_dir);
}

double estimate_trace_constant(const SubdomainMesh& mesh, double k) {
    if (mesh.interface_facets.empty())
        throw std::invalid_argument("estimate_trace_constant: mesh has no interface facets");
    double rho_max = 0.0;
    for (const Facet& facet : mesh.interface_facets) {
        const double hE = mesh.facet_length(facet);
        const double area = mesh.triangle_area(facet.tri[0]);
        const Point2 n = facet.normal;
        // (h_E/k) ||k g.n||^2_{0,E} vs k |g|^2 |K| over gradients g of P1(K).
        Eigen::Matrix2d A;
        A << n.x * n.x, n.x * n.y, n.y * n.x, n.y * n.y;
        A *= hE * k * hE; // |E| = h_E
        Eigen::Matrix2d B = Eigen::Matrix2d::Identity() * (k * area);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> eig(A, B);
        rho_max = std::max(rho_max, eig.eigenvalues().maxCoeff());
    }
    return 1.0 / rho_max;
}

ProblemConfig relabel_subdomains(const ProblemConfig& config) {
    if (config.geometry != ProblemConfig::Geometry::TwoRectangles)
        throw std::invalid_argument("relabel_subdomains: only the two-rectangles geometry");
    if (config.load == "manufactured")
        throw std::invalid_argument("relabel_subdomains: manufactured loads are not mirrored");
    ProblemConfig swapped = config;
    std::swap(swapped.k1, swapped.k2);
    std::swap(swapped.nx1, swapped.nx2);
    std::swap(swapped.ny1, swapped.ny2);
    return swapped;
}

void export_records_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records) {
    out << "step,N,eta,energy_error,multiplier_error\n";
    char buf[192];
    for (const ConvergenceRecord& rec : records) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.12e,%.12e,%.12e\n", rec.step, rec.n_dofs, rec.eta,
                      rec.energy_error, rec.multiplier_error);
        out << buf;
    }
}

void export_records_csv_file(const std::string& path,
                             const std::vector<ConvergenceRecord>& records) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("export: cannot open '" + path + "'");
    export_records_csv(out, records);
    if (!out)
        throw std::runtime_error("export: write failed for '" + path + "'");
}

double fit_loglog_slope(const std::vector<ConvergenceRecord>& records, bool use_energy_error) {
    std::vector<std::pair<double, double>> pts;
    for (const ConvergenceRecord& rec : records) {
        const double v = use_energy_error ? rec.energy_error : rec.eta;
        if (rec.n_dofs > 0 && v > 0.0 && std::isfinite(v))
            pts.push_back({std::log(static_cast<double>(rec.n_dofs)), std::log(v)});
    }
    if (pts.size() < 2)
        throw std::invalid_argument("fit_loglog_slope: need at least two usable records");
    // Early preasymptotic steps pollute the rate; fit the last half only.
    const std::size_t start = pts.size() / 2;
    const std::size_t count = pts.size() - start;
    if (count < 2)
        throw std::invalid_argument("fit_loglog_slope: need at least two fit points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = start; i < pts.size(); ++i) {
        sx += pts[i].first;
        sy += pts[i].second;
        sxx += pts[i].first * pts[i].first;
        sxy += pts[i].first * pts[i].second;
    }
    const double nfit = static_cast<double>(count);
    return (nfit * sxy - sx * sy) / (nfit * sxx - sx * sx);
}

double energy_error(const SubdomainMesh& m1, const SubdomainMesh& m2, const Solution& u,
                    const ManufacturedSolution& ms, double k1, double k2) {
    const auto& quad = QuadratureRule::instance().triangle;
    double acc = 0.0;
    for (int side = 1; side <= 2; ++side) {
        const SubdomainMesh& mesh = side == 1 ? m1 : m2;
        const std::vector<double>& nodal = side == 1 ? u.u1 : u.u2;
        const double k = side == 1 ? k1 : k2;
        for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
            const auto& tr = mesh.triangles[t];
            const Point2 a = mesh.vertex(tr[0]), b = mesh.vertex(tr[1]), c = mesh.vertex(tr[2]);
            const double area2 = 2.0 * signed_area(a, b, c);
            const Point2 gh = p1_gradient(mesh, nodal, static_cast<int>(t));
            for (const auto& qp : quad) {
                const Point2 g = ms.grad(side, map_to_triangle(qp.bary, a, b, c));
                const Point2 d = g - gh;
                acc += k * qp.weight * area2 * dot(d, d);
            }
        }
    }
    return std::sqrt(acc);
}

double multiplier_error(const InterfaceMesh& gamma, const Solution& u,
                        const ManufacturedSolution& ms, const CouplingParams& params) {
    if (!u.has_multiplier())
        throw std::invalid_argument("multiplier_error: solution carries no multiplier");
    const auto& quad = QuadratureRule::instance().segment;
    double acc = 0.0;
    for (std::size_t s = 0; s < gamma.segments.size(); ++s) {
        const InterfaceSegment& seg = gamma.segments[s];
        const auto& lam = u.lambda[s];
        // Counted once per side with the side's weight h_i / k_i.
        const double weight = seg.h1 / params.k1 + seg.h2 / params.k2;
        double err = 0.0;
        for (const auto& qp : quad) {
            const double lh = (1.0 - qp.t) * lam[0] + qp.t * lam[1];
            const double le = ms.lambda(seg.point(qp.t));
            err += qp.weight * (le - lh) * (le - lh);
        }
        acc += weight * err * seg.length();
    }
    return std::sqrt(acc);
}

EquivalenceReport compare_nitsche_mixed(const ProblemConfig& config, const SubdomainMesh& m1,
                                        const SubdomainMesh& m2) {
    ProblemConfig nitsche_cfg = config;
    nitsche_cfg.method = to_nitsche(config.method);
    ProblemConfig mixed_cfg = config;
    mixed_cfg.method = to_mixed(config.method);

    const SolveResult a = solve_on_meshes(nitsche_cfg, m1, m2);
    const SolveResult b = solve_on_meshes(mixed_cfg, m1, m2);

    EquivalenceReport rep;
    for (std::size_t i = 0; i < a.solution.u1.size(); ++i)
        rep.primal_diff = std::max(rep.primal_diff, std::abs(a.solution.u1[i] - b.solution.u1[i]));
    for (std::size_t i = 0; i < a.solution.u2.size(); ++i)
        rep.primal_diff = std::max(rep.primal_diff, std::abs(a.solution.u2[i] - b.solution.u2[i]));
    for (std::size_t s = 0; s < a.solution.lambda.size(); ++s)
        for (int e = 0; e < 2; ++e)
            rep.multiplier_diff = std::max(
                rep.multiplier_diff, std::abs(a.solution.lambda[s][static_cast<std::size_t>(e)] -
                                              b.solution.lambda[s][static_cast<std::size_t>(e)]));
    return rep;
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

} // namespace

ProblemConfig parse_config(std::istream& in) {
    ProblemConfig config;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        auto as_int = [&](const std::string& v) { return std::stoi(v); };
        auto as_double = [&](const std::string& v) { return std::stod(v); };

        if (key == "geometry") {
            if (value == "two_rectangles")
                config.geometry = ProblemConfig::Geometry::TwoRectangles;
            else if (value == "lshape")
                config.geometry = ProblemConfig::Geometry::LShape;
            else
                throw std::invalid_argument("config: unknown geometry '" + value + "'");
        } else if (key == "nx1") config.nx1 = as_int(value);
        else if (key == "ny1") config.ny1 = as_int(value);
        else if (key == "nx2") config.nx2 = as_int(value);
        else if (key == "ny2") config.ny2 = as_int(value);
        else if (key == "n") config.n = as_int(value);
        else if (key == "k1") config.k1 = as_double(value);
        else if (key == "k2") config.k2 = as_double(value);
        else if (key == "alpha") config.alpha = as_double(value);
        else if (key == "method") config.method = parse_method(value);
        else if (key == "theta") config.theta = as_double(value);
        else if (key == "load") config.load = value;
        else if (key == "load_value") config.load_value = as_double(value);
        else if (key == "manufactured") config.manufactured_tag = value;
        else if (key == "max_dofs") config.max_dofs = as_int(value);
        else if (key == "max_steps") config.max_steps = as_int(value);
        else
            throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    if (config.load != "constant" && config.load != "manufactured")
        throw std::invalid_argument("config: load must be 'constant' or 'manufactured'");
    if (!(config.theta > 0.0) || config.theta > 1.0)
        throw std::invalid_argument("config: theta must lie in (0, 1]");
    return config;
}

ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("config: cannot open '" + path + "'");
    return parse_config(in);
}

} // namespace mortar
