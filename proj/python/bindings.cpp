#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spgrid/bench.hpp"
#include "spgrid/error.hpp"
#include "spgrid/twogrid.hpp"

namespace py = pybind11;
using namespace spgrid;

namespace {

NewtonConfig make_config(const std::string& weighting, const std::string& initial, double tol, int max_iter) {
    NewtonConfig cfg;
    cfg.weighting = parse_weighting(weighting);
    cfg.initial = parse_initial(initial);
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    return cfg;
}

py::dict outcome_dict(const Mesh& mesh, const SolveOutcome& out, const ScalarFn& exact) {
    py::dict d;
    d["nodes"] = mesh.nodes;
    d["y"] = out.y;
    d["iterations"] = out.iterations;
    d["final_update"] = out.final_update;
    d["converged"] = out.converged;
    d["residual"] = out.residual;
    d["wall_time"] = out.wall_time;
    if (exact) d["error"] = nodal_error(mesh, out.y, exact);
    return d;
}

template <class Problem>
py::dict two_grid(const Problem& p, const MeshSpec& mesh, int N, double r, int n, int levels,
                  const NewtonConfig& cfg) {
    TwoGridPlan plan;
    plan.N = N;
    plan.r = r;
    plan.n = n;
    plan.cascade_levels = levels;
    plan.mesh = mesh;
    const TwoGridResult res = algorithm2(p, plan, cfg);
    py::list steps;
    for (std::size_t k = 0; k < res.meshes.size(); ++k) {
        py::dict s;
        s["n"] = res.meshes[k].n();
        s["iterations"] = res.outcomes[k].iterations;
        s["seconds"] = res.seconds[k];
        if (!res.errors.empty()) s["error"] = res.errors[k];
        steps.append(s);
    }
    py::dict d;
    d["steps"] = steps;
    d["nodes"] = res.meshes.back().nodes;
    d["y"] = res.fine().y;
    return d;
}

}  // namespace

PYBIND11_MODULE(_spgrid, m) {
    m.doc() = "Layer-adapted meshes, Newton and two-grid solvers for singularly perturbed BVPs";

    static py::exception<Error> error_type(m, "SpgridError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::Validation)
                PyErr_SetString(PyExc_ValueError, e.what());
            else
                py::set_error(error_type, e.what());
        }
    });

    py::enum_<MeshFamily>(m, "MeshFamily")
        .value("Shishkin", MeshFamily::Shishkin)
        .value("Bakhvalov", MeshFamily::Bakhvalov)
        .value("Vulanovic", MeshFamily::Vulanovic)
        .value("Uniform", MeshFamily::Uniform);
    py::enum_<LayerSides>(m, "LayerSides").value("Both", LayerSides::Both).value("LeftOnly", LayerSides::LeftOnly);

    py::class_<MeshSpec>(m, "MeshSpec")
        .def(py::init([](const std::string& family, double eps, int n, double a, double q, double gamma0,
                         const std::string& sides) {
                 MeshSpec s;
                 s.family = parse_family(family);
                 s.eps = eps;
                 s.n = n;
                 s.a = a;
                 s.q = q;
                 s.gamma0 = gamma0;
                 s.layer_sides = parse_sides(sides);
                 s.validate();
                 return s;
             }),
             py::arg("family"), py::arg("eps"), py::arg("n"), py::arg("a") = 1.0, py::arg("q") = 0.4,
             py::arg("gamma0") = 1.0, py::arg("sides") = "both")
        .def_readwrite("family", &MeshSpec::family)
        .def_readwrite("eps", &MeshSpec::eps)
        .def_readwrite("n", &MeshSpec::n)
        .def_readwrite("a", &MeshSpec::a)
        .def_readwrite("q", &MeshSpec::q)
        .def_readwrite("gamma0", &MeshSpec::gamma0)
        .def_readwrite("layer_sides", &MeshSpec::layer_sides);

    py::class_<Mesh>(m, "Mesh")
        .def_readonly("nodes", &Mesh::nodes)
        .def_readonly("steps", &Mesh::steps)
        .def_readonly("half_steps", &Mesh::half_steps)
        .def_readonly("spec", &Mesh::spec)
        .def_readonly("alpha", &Mesh::alpha)
        .def_readonly("degenerate", &Mesh::degenerate)
        .def_property_readonly("n", &Mesh::n);

    m.def("build_mesh", &build_mesh, py::arg("spec"));
    m.def("layer_fraction", &layer_fraction, py::arg("mesh"), py::arg("eps"));
    m.def("export_mesh", &export_mesh, py::arg("mesh"));
    m.def("shishkin_alpha", &shishkin_alpha, py::arg("eps"), py::arg("gamma0"), py::arg("n"),
          py::arg("pivot") = 0.5);
    m.def("vulanovic_alpha", &vulanovic_alpha, py::arg("eps"), py::arg("a"), py::arg("q"), py::arg("pivot") = 0.5);
    m.def("bakhvalov_alpha", &bakhvalov_alpha, py::arg("eps"), py::arg("a"), py::arg("q"), py::arg("pivot") = 0.5);

    m.def(
        "solve_linear",
        [](const Mesh& mesh, double eps, const std::vector<double>& b, const std::vector<double>& g, double bl,
           double br) { return solve_linear(mesh, eps, b, g, bl, br); },
        py::arg("mesh"), py::arg("eps"), py::arg("b"), py::arg("g"), py::arg("bc_left") = 0.0,
        py::arg("bc_right") = 0.0, "Solve -eps^2 y'' + b y = g with nodal arrays b and g.");

    m.def(
        "solve_example",
        [](const std::string& problem, const MeshSpec& spec, const std::string& weighting,
           const std::string& initial, double tol, int max_iter) {
            const NewtonConfig cfg = make_config(weighting, initial, tol, max_iter);
            const Mesh mesh = build_mesh(spec);
            if (problem == "ex1") {
                const auto p = example1(spec.eps);
                return outcome_dict(mesh, solve_semilinear(mesh, p, cfg), p.exact);
            }
            if (problem == "ex2") {
                const auto p = example2(spec.eps);
                return outcome_dict(mesh, solve_quasilinear_diffusion(mesh, p, cfg), p.exact);
            }
            throw Error(ErrorCode::Validation, "problem must be ex1 or ex2");
        },
        py::arg("problem"), py::arg("spec"), py::arg("weighting") = "pointwise", py::arg("initial") = "reduced",
        py::arg("tol") = 1e-13, py::arg("max_iter") = 50, "Direct Newton solve of a built-in problem.");

    m.def(
        "two_grid",
        [](const std::string& problem, const MeshSpec& spec, int N, double r, int n, int levels,
           const std::string& weighting) {
            const NewtonConfig cfg = make_config(weighting, "reduced", 1e-13, 50);
            if (problem == "ex1") return two_grid(example1(spec.eps), spec, N, r, n, levels, cfg);
            if (problem == "ex2") return two_grid(example2(spec.eps), spec, N, r, n, levels, cfg);
            throw Error(ErrorCode::Validation, "problem must be ex1 or ex2");
        },
        py::arg("problem"), py::arg("spec"), py::arg("N"), py::arg("r") = 2.0, py::arg("n") = 0,
        py::arg("levels") = 1, py::arg("weighting") = "pointwise",
        "Single two-grid correction (levels=1) or the cascade (levels>1); eps and mesh parameters come from spec.");

    m.def(
        "interpolate",
        [](const std::vector<double>& nodes, const std::vector<double>& values, const std::vector<double>& queries) {
            return interpolate(nodes, values, queries);
        },
        py::arg("nodes"), py::arg("values"), py::arg("queries"));

    m.def(
        "choose_r",
        [](int N) {
            const RChoice c = choose_r(N);
            return py::make_tuple(c.r, c.n);
        },
        py::arg("N"));
    m.def("convergence_order", &convergence_order, py::arg("e_coarse"), py::arg("e_fine"));

    m.def(
        "run_report",
        [](const std::string& problem, const std::vector<std::string>& meshes, const std::vector<double>& eps,
           const std::vector<int>& N, const std::string& algorithm, double r, int levels, const std::string& format,
           int threads) {
            ReportConfig cfg;
            cfg.problem = problem;
            cfg.families.clear();
            for (const auto& f : meshes) cfg.families.push_back(parse_family(f));
            cfg.eps = eps;
            cfg.N = N;
            cfg.algorithm = parse_algorithm(algorithm);
            cfg.r = r;
            cfg.levels = levels;
            cfg.format = parse_format(format);
            cfg.threads = threads;
            py::gil_scoped_release release;
            return run_report(cfg).render();
        },
        py::arg("problem") = "ex1", py::arg("meshes") = std::vector<std::string>{"shishkin"},
        py::arg("eps") = std::vector<double>{1e-2}, py::arg("N") = std::vector<int>{8, 16, 32, 64},
        py::arg("algorithm") = "tg1", py::arg("r") = 2.0, py::arg("levels") = 2, py::arg("format") = "csv",
        py::arg("threads") = 0, "Run a convergence study and return the rendered table.");
}
