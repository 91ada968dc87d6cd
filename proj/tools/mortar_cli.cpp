#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "mortar/driver.hpp"
#include "mortar/vtk.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string method;
    std::string out_dir = "out";
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "configuration file (key = value lines)")
        ->required();
    cmd->add_option("--method", opts.method,
                    "override the method: I, II, III, mixed-I, mixed-II, mixed-III");
    cmd->add_option("--out-dir", opts.out_dir, "output directory");
}

mortar::ProblemConfig load(const CommonOptions& opts) {
    mortar::ProblemConfig config = mortar::load_config(opts.config_path);
    if (!opts.method.empty()) config.method = mortar::parse_method(opts.method);
    return config;
}

void print_records(const std::vector<mortar::ConvergenceRecord>& records) {
    std::printf("%6s %8s %14s %14s %14s\n", "step", "N", "eta", "energy_err", "lambda_err");
    for (const auto& rec : records)
        std::printf("%6d %8d %14.6e %14.6e %14.6e\n", rec.step, rec.n_dofs, rec.eta,
                    rec.energy_error, rec.multiplier_error);
}

int cmd_solve(const CommonOptions& opts) {
    const mortar::ProblemConfig config = load(opts);
    const auto [m1, m2] = mortar::build_geometry(config);
    const mortar::SolveResult res = mortar::solve_on_meshes(config, m1, m2);
    const mortar::RefinementMarks marks = mortar::mark(res.indicators, config.theta);

    std::filesystem::create_directories(opts.out_dir);
    std::vector<double> nodal = res.solution.u1;
    nodal.insert(nodal.end(), res.solution.u2.begin(), res.solution.u2.end());
    mortar::write_vtk_file(opts.out_dir + "/solution.vtk", m1, m2, &nodal, &marks);
    std::ofstream csv(opts.out_dir + "/indicators.csv");
    mortar::write_indicator_csv(csv, res.indicators, marks);

    std::printf("method %s: N = %d, eta = %.6e, residual = %.3e\n",
                mortar::method_name(config.method).c_str(), res.n_dofs, res.indicators.eta,
                res.report.relative_residual);
    std::printf("wrote %s/solution.vtk and %s/indicators.csv\n", opts.out_dir.c_str(),
                opts.out_dir.c_str());
    return 0;
}

int cmd_adapt(const CommonOptions& opts) {
    const mortar::ProblemConfig config = load(opts);
    const mortar::RunOutput out = mortar::run_adaptive(config, opts.out_dir);
    print_records(out.records);
    if (out.records.size() >= 4)
        std::printf("eta slope (last half): %.3f\n", mortar::fit_loglog_slope(out.records));
    std::printf("wrote %s/convergence.csv and per-step VTK files\n", opts.out_dir.c_str());
    return 0;
}

int cmd_uniform(const CommonOptions& opts, int steps) {
    const mortar::ProblemConfig config = load(opts);
    const mortar::RunOutput out = mortar::run_uniform(config, steps, opts.out_dir);
    print_records(out.records);
    if (out.records.size() >= 4)
        std::printf("eta slope (last half): %.3f\n", mortar::fit_loglog_slope(out.records));
    return 0;
}

int cmd_convergence(const CommonOptions& opts, int uniform_steps) {
    const mortar::ProblemConfig config = load(opts);
    const mortar::RunOutput adaptive = mortar::run_adaptive(config, opts.out_dir + "/adaptive");
    const mortar::RunOutput uniform =
        mortar::run_uniform(config, uniform_steps, opts.out_dir + "/uniform");
    std::printf("adaptive:\n");
    print_records(adaptive.records);
    std::printf("uniform:\n");
    print_records(uniform.records);
    std::printf("adaptive eta slope: %.3f, uniform eta slope: %.3f\n",
                mortar::fit_loglog_slope(adaptive.records),
                mortar::fit_loglog_slope(uniform.records));
    return 0;
}

int cmd_equivalence(const CommonOptions& opts) {
    const mortar::ProblemConfig config = load(opts);
    const auto [m1, m2] = mortar::build_geometry(config);
    const mortar::EquivalenceReport rep = mortar::compare_nitsche_mixed(config, m1, m2);
    std::printf("family %d: primal max diff = %.3e, multiplier max diff = %.3e\n",
                mortar::method_family(config.method), rep.primal_diff, rep.multiplier_diff);
    if (rep.primal_diff > 1e-9 || rep.multiplier_diff > 1e-9) {
        std::fprintf(stderr, "equivalence violated: differences exceed 1e-9\n");
        return 1;
    }
    return 0;
}

int cmd_trace_constant(const CommonOptions& opts) {
    const mortar::ProblemConfig config = load(opts);
    const auto [m1, m2] = mortar::build_geometry(config);
    const double c1 = mortar::estimate_trace_constant(m1, config.k1);
    const double c2 = mortar::estimate_trace_constant(m2, config.k2);
    const double ci = std::min(c1, c2);
    std::printf("C_I estimate: side 1 = %.6e, side 2 = %.6e, overall = %.6e\n", c1, c2, ci);
    std::printf("alpha = %.3e is %s\n", config.alpha, config.alpha < ci ? "admissible" : "NOT admissible");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nitsche mortar solver for the two-subdomain transmission problem"};
    app.require_subcommand(1);

    CommonOptions opts;
    int uniform_steps = 4;

    CLI::App* solve = app.add_subcommand("solve", "assemble and solve once");
    add_common(solve, opts);
    CLI::App* adapt = app.add_subcommand("adapt", "adaptive refinement loop");
    add_common(adapt, opts);
    CLI::App* uniform = app.add_subcommand("uniform", "uniform refinement study");
    add_common(uniform, opts);
    uniform->add_option("--steps", uniform_steps, "number of refinement steps");
    CLI::App* convergence =
        app.add_subcommand("convergence", "adaptive vs uniform convergence study");
    add_common(convergence, opts);
    convergence->add_option("--steps", uniform_steps, "uniform refinement steps");
    CLI::App* equivalence =
        app.add_subcommand("equivalence", "compare the Nitsche and mixed solutions");
    add_common(equivalence, opts);
    CLI::App* trace = app.add_subcommand("trace-constant", "estimate the trace constant C_I");
    add_common(trace, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(opts);
        if (adapt->parsed()) return cmd_adapt(opts);
        if (uniform->parsed()) return cmd_uniform(opts, uniform_steps);
        if (convergence->parsed()) return cmd_convergence(opts, uniform_steps);
        if (equivalence->parsed()) return cmd_equivalence(opts);
        if (trace->parsed()) return cmd_trace_constant(opts);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
