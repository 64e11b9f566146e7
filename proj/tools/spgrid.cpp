#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spgrid/bench.hpp"
#include "spgrid/error.hpp"
#include "spgrid/twogrid.hpp"

using namespace spgrid;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

struct MeshOptions {
    std::string problem = "ex1";
    std::vector<std::string> families{"shishkin"};
    std::optional<double> a;
    double q = 0.4;
    double gamma0 = 1.0;
    std::string sides;  // empty: problem default
    std::string weighting;
};

struct SolverOptions {
    std::string initial = "reduced";
    std::string flux = "kirchhoff";
    std::string linearization = "newton";
    double tol = 1e-13;
    int max_iter = 50;
};

void add_mesh_options(CLI::App* cmd, MeshOptions& m, bool single_family) {
    if (single_family) {
        cmd->add_option("--mesh", m.families, "Mesh family: uniform, shishkin, bakhvalov, vulanovic")
            ->expected(1);
    } else {
        cmd->add_option("--mesh", m.families, "Comma-separated mesh families")->delimiter(',');
    }
    cmd->add_option("--a", m.a, "Bakhvalov/Vulanovic parameter a (default depends on problem and family)");
    cmd->add_option("--q", m.q, "Bakhvalov/Vulanovic parameter q in (0, 0.5)");
    cmd->add_option("--gamma0", m.gamma0, "Shishkin parameter gamma0");
    cmd->add_option("--sides", m.sides, "Layer sides: both or left (default depends on problem)");
}

void add_solver_options(CLI::App* cmd, MeshOptions& m, SolverOptions& s) {
    cmd->add_option("--problem", m.problem, "Built-in problem: ex1 or ex2")->check(CLI::IsMember({"ex1", "ex2"}));
    cmd->add_option("--reaction", m.weighting, "Reaction weighting: pointwise or consistent");
    cmd->add_option("--initial", s.initial, "Initial guess: reduced, zero or linear");
    cmd->add_option("--flux", s.flux, "Diffusion flux for ex2: kirchhoff or midpoint");
    cmd->add_option("--linearization", s.linearization, "newton or picard")
        ->check(CLI::IsMember({"newton", "picard"}));
    cmd->add_option("--tol", s.tol, "Newton stopping tolerance on the update max-norm");
    cmd->add_option("--max-iter", s.max_iter, "Newton iteration cap");
}

NewtonConfig newton_config(const SolverOptions& s) {
    NewtonConfig cfg;
    cfg.initial = parse_initial(s.initial);
    cfg.flux = parse_flux(s.flux);
    cfg.linearization = s.linearization == "picard" ? Linearization::Picard : Linearization::Newton;
    cfg.tol = s.tol;
    cfg.max_iter = s.max_iter;
    cfg.validate();
    return cfg;
}

MeshSpec mesh_spec(const MeshOptions& m, MeshFamily family, double eps, int n, Algorithm alg) {
    MeshSpec s;
    s.family = family;
    s.eps = eps;
    s.n = n;
    s.a = m.a.value_or(default_a(m.problem, family, alg));
    s.q = m.q;
    s.gamma0 = m.gamma0;
    s.layer_sides = m.sides.empty() ? default_sides(m.problem, family) : parse_sides(m.sides);
    s.validate();
    return s;
}

std::vector<MeshFamily> families_of(const MeshOptions& m) {
    std::vector<MeshFamily> out;
    for (const auto& f : m.families) out.push_back(parse_family(f));
    return out;
}

// ---- solve ----------------------------------------------------------------------------------

struct SolveArgs {
    MeshOptions mesh;
    SolverOptions solver;
    double eps = 1e-2;
    int n = 0;
    std::string algorithm = "direct";
    int coarse = 0;
    double r = 2.0;
    int levels = 2;
    std::string out = "json";
};

int run_solve(const SolveArgs& a) {
    const Algorithm alg = parse_algorithm(a.algorithm);
    if (alg == Algorithm::TG1ROpt) throw Error(ErrorCode::Validation, "solve supports direct, tg1 and tg2");
    const MeshFamily family = parse_family(a.mesh.families.front());
    NewtonConfig cfg = newton_config(a.solver);
    cfg.weighting = a.mesh.weighting.empty() ? default_weighting(a.mesh.problem, alg) : parse_weighting(a.mesh.weighting);

    std::vector<Mesh> meshes;
    std::vector<SolveOutcome> outcomes;
    ScalarFn exact;
    auto run = [&](const auto& problem) {
        exact = problem.exact;
        if (alg == Algorithm::Direct) {
            if (a.n < 2) throw Error(ErrorCode::Validation, "--n is required for the direct solve");
            meshes.push_back(build_mesh(mesh_spec(a.mesh, family, problem.eps, a.n, alg)));
            if constexpr (std::is_same_v<std::decay_t<decltype(problem)>, SemilinearProblem>)
                outcomes.push_back(solve_semilinear(meshes.back(), problem, cfg));
            else
                outcomes.push_back(solve_quasilinear_diffusion(meshes.back(), problem, cfg));
            return;
        }
        if (a.coarse < 2) throw Error(ErrorCode::Validation, "--coarse is required for two-grid solves");
        TwoGridPlan plan;
        plan.N = a.coarse;
        plan.r = a.r;
        plan.n = alg == Algorithm::TG1 ? a.n : 0;
        plan.cascade_levels = alg == Algorithm::TG2 ? a.levels : 1;
        plan.mesh = mesh_spec(a.mesh, family, problem.eps, a.coarse, alg);
        TwoGridResult res = algorithm2(problem, plan, cfg);
        meshes = std::move(res.meshes);
        outcomes = std::move(res.outcomes);
    };
    if (a.mesh.problem == "ex1")
        run(example1(a.eps));
    else
        run(example2(a.eps));

    const Mesh& fine = meshes.back();
    const SolveOutcome& last = outcomes.back();
    if (a.out == "nodes") {
        for (std::size_t i = 0; i < fine.nodes.size(); ++i) std::printf("%.17g %.17g\n", fine.nodes[i], last.y[i]);
        return 0;
    }
    nlohmann::json j;
    j["problem"] = a.mesh.problem;
    j["mesh"] = to_string(family);
    j["eps"] = a.eps;
    j["a"] = fine.spec.a;
    j["q"] = fine.spec.q;
    j["gamma0"] = fine.spec.gamma0;
    j["layer_sides"] = to_string(fine.spec.layer_sides);
    j["algorithm"] = to_string(alg);
    j["reaction"] = to_string(cfg.weighting);
    j["steps"] = nlohmann::json::array();
    for (std::size_t k = 0; k < meshes.size(); ++k) {
        nlohmann::json s;
        s["step"] = k + 1;
        s["n"] = meshes[k].n();
        s["iterations"] = outcomes[k].iterations;
        s["final_update"] = outcomes[k].final_update;
        s["converged"] = outcomes[k].converged;
        s["degenerate_mesh"] = meshes[k].degenerate;
        if (exact) s["error"] = nodal_error(meshes[k], outcomes[k].y, exact);
        j["steps"].push_back(s);
    }
    j["nodes"] = fine.nodes;
    j["values"] = last.y;
    std::cout << j.dump(2) << '\n';
    return 0;
}

// ---- table ----------------------------------------------------------------------------------

struct TableArgs {
    MeshOptions mesh;
    SolverOptions solver;
    std::vector<double> eps{1e-2};
    std::vector<int> coarse{8, 16, 32, 64};
    std::string algorithm = "tg1";
    double r = 2.0;
    int levels = 2;
    std::string format = "markdown";
    std::string metric = "nodal";
    int threads = 0;
};

int run_table(const TableArgs& a) {
    ReportConfig cfg;
    cfg.problem = a.mesh.problem;
    cfg.families = families_of(a.mesh);
    cfg.eps = a.eps;
    cfg.N = a.coarse;
    cfg.algorithm = parse_algorithm(a.algorithm);
    cfg.r = a.r;
    cfg.levels = a.levels;
    cfg.a = a.mesh.a;
    cfg.q = a.mesh.q;
    cfg.gamma0 = a.mesh.gamma0;
    if (!a.mesh.sides.empty()) cfg.sides = parse_sides(a.mesh.sides);
    if (!a.mesh.weighting.empty()) cfg.weighting = parse_weighting(a.mesh.weighting);
    cfg.format = parse_format(a.format);
    cfg.metric = parse_metric(a.metric);
    cfg.threads = a.threads;
    cfg.newton = newton_config(a.solver);
    const Report rep = run_report(cfg);
    std::cout << rep.render();
    if (rep.any_failed()) {
        for (const auto& r : rep.rows)
            if (r.failed && r.step == 1)
                std::fprintf(stderr, "cell %s eps=%g N=%d failed: %s\n", to_string(r.family).c_str(), r.eps, r.N,
                             r.message.c_str());
        return kExitSolver;
    }
    return 0;
}

// ---- layers, bench, mesh --------------------------------------------------------------------

struct LayerArgs {
    std::vector<std::string> families{"shishkin", "vulanovic", "bakhvalov"};
    double eps = 1.0 / 256.0;
    std::vector<int> coarse{8, 16, 32, 64};
    std::vector<int> fine{64, 256, 1024, 4096};
    std::optional<double> a;
    double q = 0.4;
    double gamma0 = 1.0;
};

int run_layers(const LayerArgs& a) {
    std::vector<MeshFamily> fams;
    for (const auto& f : a.families) fams.push_back(parse_family(f));
    std::cout << render_layers(layer_report(a.eps, fams, a.coarse, a.fine, a.a, a.q, a.gamma0));
    return 0;
}

struct BenchArgs {
    MeshOptions mesh;
    SolverOptions solver;
    double eps = 1e-2;
    std::vector<int> coarse{8, 16, 32, 64};
    int repeats = 3;
};

int run_bench(const BenchArgs& a) {
    const MeshFamily family = parse_family(a.mesh.families.front());
    NewtonConfig cfg = newton_config(a.solver);
    cfg.weighting = a.mesh.weighting.empty() ? default_weighting(a.mesh.problem, Algorithm::TG1)
                                             : parse_weighting(a.mesh.weighting);
    const MeshSpec spec = mesh_spec(a.mesh, family, a.eps, 2, Algorithm::TG1);
    const SemilinearProblem p = a.mesh.problem == "ex1" ? example1(a.eps) : log_transform(example2(a.eps));
    std::cout << render_timing(timing_comparison(p, spec, a.coarse, cfg, a.repeats));
    return 0;
}

struct MeshArgs {
    MeshOptions mesh;
    double eps = 1e-2;
    int n = 16;
};

int run_mesh(const MeshArgs& a) {
    const MeshFamily family = parse_family(a.mesh.families.front());
    const Mesh m = build_mesh(mesh_spec(a.mesh, family, a.eps, a.n, Algorithm::Direct));
    if (m.degenerate) std::fprintf(stderr, "warning: a*eps >= q, falling back to the uniform mesh\n");
    std::cout << export_mesh(m);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Layer-adapted meshes, Newton and two-grid solvers for singularly perturbed BVPs"};
    app.require_subcommand(1);

    SolveArgs solve;
    auto* c_solve = app.add_subcommand("solve", "Solve one problem on one mesh (direct or two-grid)");
    add_solver_options(c_solve, solve.mesh, solve.solver);
    add_mesh_options(c_solve, solve.mesh, true);
    c_solve->add_option("--eps", solve.eps, "Perturbation parameter in (0, 1]");
    c_solve->add_option("--n", solve.n, "Intervals of the direct mesh, or the tg1 fine size");
    c_solve->add_option("--algorithm", solve.algorithm, "direct, tg1 or tg2")
        ->check(CLI::IsMember({"direct", "tg1", "tg2"}));
    c_solve->add_option("--coarse", solve.coarse, "Coarse interval count N for two-grid solves");
    c_solve->add_option("--r", solve.r, "Fine size exponent, n = round(N^r)");
    c_solve->add_option("--levels", solve.levels, "Cascade depth for tg2");
    c_solve->add_option("--out", solve.out, "json or nodes")->check(CLI::IsMember({"json", "nodes"}));

    TableArgs table;
    auto* c_table = app.add_subcommand("table", "Convergence table over eps and N");
    add_solver_options(c_table, table.mesh, table.solver);
    add_mesh_options(c_table, table.mesh, false);
    c_table->add_option("--eps", table.eps, "Comma-separated eps values")->delimiter(',');
    c_table->add_option("--coarse", table.coarse, "Comma-separated coarse sizes N")->delimiter(',');
    c_table->add_option("--algorithm", table.algorithm, "direct, tg1, tg2 or tg1_ropt");
    c_table->add_option("--r", table.r, "Fine size exponent for tg1");
    c_table->add_option("--levels", table.levels, "Cascade depth for tg2");
    c_table->add_option("--format", table.format, "markdown, csv or json");
    c_table->add_option("--metric", table.metric, "nodal or interpolant");
    c_table->add_option("--threads", table.threads, "Worker threads (0: all cores)");

    LayerArgs layers;
    auto* c_layers = app.add_subcommand("layers", "Percentage of mesh points inside the boundary layers");
    c_layers->add_option("--mesh", layers.families, "Comma-separated mesh families")->delimiter(',');
    c_layers->add_option("--eps", layers.eps, "Layer width eps");
    c_layers->add_option("--coarse", layers.coarse, "Comma-separated coarse sizes")->delimiter(',');
    c_layers->add_option("--fine", layers.fine, "Comma-separated fine sizes")->delimiter(',');
    c_layers->add_option("--a", layers.a, "Parameter a (default: 4 for bakhvalov, 1 for vulanovic)");
    c_layers->add_option("--q", layers.q, "Parameter q");
    c_layers->add_option("--gamma0", layers.gamma0, "Shishkin gamma0");

    BenchArgs bench;
    auto* c_bench = app.add_subcommand("bench", "Wall-clock comparison of the two-grid solve against the direct fine solve");
    add_solver_options(c_bench, bench.mesh, bench.solver);
    add_mesh_options(c_bench, bench.mesh, true);
    c_bench->add_option("--eps", bench.eps, "Perturbation parameter");
    c_bench->add_option("--coarse", bench.coarse, "Comma-separated coarse sizes N (fine n = N^2)")->delimiter(',');
    c_bench->add_option("--repeats", bench.repeats, "Runs per cell; the minimum is reported");

    MeshArgs mesh;
    auto* c_mesh = app.add_subcommand("mesh", "Print the nodes of a mesh");
    add_mesh_options(c_mesh, mesh.mesh, true);
    c_mesh->add_option("--problem", mesh.mesh.problem, "Problem whose defaults for a and sides apply")
        ->check(CLI::IsMember({"ex1", "ex2"}));
    c_mesh->add_option("--eps", mesh.eps, "Perturbation parameter");
    c_mesh->add_option("--n", mesh.n, "Number of intervals");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*c_solve) return run_solve(solve);
        if (*c_table) return run_table(table);
        if (*c_layers) return run_layers(layers);
        if (*c_bench) return run_bench(bench);
        if (*c_mesh) return run_mesh(mesh);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        switch (e.code()) {
            case ErrorCode::Validation:
            case ErrorCode::DegenerateMesh:
            case ErrorCode::OutOfDomain:
            case ErrorCode::Domain: return kExitValidation;
            default: return kExitSolver;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSolver;
    }
    return 0;
}
