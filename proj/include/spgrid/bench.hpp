#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spgrid/linsolve.hpp"
#include "spgrid/mesh.hpp"
#include "spgrid/problem.hpp"
#include "spgrid/quasi.hpp"

namespace spgrid {

double nodal_error(const Mesh& mesh, std::span<const double> y, const ScalarFn& exact);
// Max over `samples` uniform points (default 10 n) together with the mesh nodes.
double interpolant_error(const Mesh& mesh, std::span<const double> y, const ScalarFn& exact, int samples = 0);
// (ln E_N - ln E_2N) / ln 2
double convergence_order(double e_coarse, double e_fine);
// Least-squares slope of -ln E against ln N.
double fitted_slope(std::span<const int> sizes, std::span<const double> errors);

enum class Algorithm { Direct, TG1, TG2, TG1ROpt };
enum class OutputFormat { Markdown, Csv, Json };
enum class ErrorMetric { Nodal, Interpolant };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);
OutputFormat parse_format(const std::string& name);
ErrorMetric parse_metric(const std::string& name);

struct ReportConfig {
    std::string problem = "ex1";  // "ex1" or "ex2"
    std::vector<MeshFamily> families{MeshFamily::Shishkin};
    std::vector<double> eps{1e-2};
    std::vector<int> N{8, 16, 32, 64};
    Algorithm algorithm = Algorithm::TG1;
    double r = 2.0;
    int levels = 2;                   // cascade depth for TG2
    std::optional<double> a;          // unset: problem/family default (see default_a)
    double q = 0.4;
    double gamma0 = 1.0;
    std::optional<LayerSides> sides;  // unset: problem/family default
    std::optional<ReactionWeighting> weighting;  // unset: problem/algorithm default
    OutputFormat format = OutputFormat::Markdown;
    ErrorMetric metric = ErrorMetric::Nodal;
    int threads = 0;                  // 0: hardware concurrency
    NewtonConfig newton;              // weighting field is overridden by `weighting`

    void validate() const;
};

// Per-problem defaults for mesh parameters, reaction weighting and layer sides.
double default_a(const std::string& problem, MeshFamily family, Algorithm algorithm);
LayerSides default_sides(const std::string& problem, MeshFamily family);
ReactionWeighting default_weighting(const std::string& problem, Algorithm algorithm);

struct ConvergenceRow {
    std::string problem;
    MeshFamily family = MeshFamily::Uniform;
    double a = 0.0, q = 0.0, gamma0 = 0.0, eps = 0.0;
    int N = 0;
    int n = 0;
    int step = 1;
    double error = 0.0;
    std::optional<double> order;
    int iterations = 0;
    double seconds = 0.0;
    bool failed = false;
    std::string message;
};

struct Report {
    ReportConfig config;
    std::vector<ConvergenceRow> rows;

    bool any_failed() const;
    // Rows of one (family, eps, step) series ordered by N.
    std::vector<ConvergenceRow> series(MeshFamily family, double eps, int step) const;
    std::string render() const;
    std::string render(OutputFormat format) const;
};

Report run_report(const ReportConfig& cfg);

std::string format_number(double v);  // 6 significant digits, scientific below 1e-3

struct LayerRow {
    MeshFamily family;
    int step;  // 1 for coarse sizes, 2 for fine sizes
    std::vector<int> sizes;
    std::vector<double> percent;
};

// Table of layer_fraction over coarse and fine sizes; a unset means the ex1 default per family.
std::vector<LayerRow> layer_report(double eps, const std::vector<MeshFamily>& families, const std::vector<int>& coarse,
                                   const std::vector<int>& fine, std::optional<double> a = std::nullopt,
                                   double q = 0.4, double gamma0 = 1.0);
std::string render_layers(const std::vector<LayerRow>& rows);

struct TimingRow {
    int N = 0;
    int n = 0;
    double coarse_seconds = 0.0;  // nonlinear solve on the N-mesh
    double fine_seconds = 0.0;    // linear solve on the n-mesh about the interpolant
    double two_grid_seconds = 0.0;
    double direct_seconds = 0.0;  // nonlinear solve on the n-mesh
    double ratio = 0.0;           // direct / two-grid
};

// Serial wall-clock comparison of the two-grid solve (n = N^2) against the direct fine solve;
// each timing is the minimum over `repeats` runs.
std::vector<TimingRow> timing_comparison(const SemilinearProblem& p, const MeshSpec& mesh,
                                         const std::vector<int>& coarse, const NewtonConfig& cfg = {},
                                         int repeats = 3);
std::string render_timing(const std::vector<TimingRow>& rows);

}  // namespace spgrid
