#pragma once

#include <span>
#include <vector>

#include "spgrid/mesh.hpp"
#include "spgrid/problem.hpp"
#include "spgrid/quasi.hpp"

namespace spgrid {

// Coarse size N, fine size n (0 means round(N^r)), cascade depth, and the mesh parameters
// shared by every grid (eps and n of `mesh` are overwritten per grid).
struct TwoGridPlan {
    int N = 8;
    double r = 2.0;
    int n = 0;
    int cascade_levels = 1;
    MeshSpec mesh;

    static constexpr long long max_intervals = 1LL << 20;

    void validate() const;
    int fine_size() const;
    // Interval counts of levels 0..cascade_levels: N, n, then N^{2^m} for m >= 2.
    std::vector<int> level_sizes() const;
};

struct TwoGridResult {
    std::vector<Mesh> meshes;            // level 0 is the coarse mesh
    std::vector<SolveOutcome> outcomes;  // level 0: nonlinear solve; levels >= 1: single linear solves
    std::vector<double> seconds;         // wall time per level (mesh build + solve + interpolation)
    std::vector<double> errors;          // nodal max error per level, empty without an exact solution

    const SolveOutcome& coarse() const { return outcomes.front(); }
    const SolveOutcome& fine() const { return outcomes.back(); }
    // Piecewise-linear interpolant of the finest solution.
    double evaluate(double x) const;
};

// Piecewise-linear interpolation of nodal values; sorted queries are located by a merge walk.
std::vector<double> interpolate(std::span<const double> nodes, std::span<const double> values,
                                std::span<const double> queries);
std::vector<double> interpolate(const Mesh& mesh, std::span<const double> values, std::span<const double> queries);

TwoGridResult algorithm1(const SemilinearProblem& p, const TwoGridPlan& plan, const NewtonConfig& cfg = {});
TwoGridResult algorithm1(const QuasilinearDiffusionProblem& p, const TwoGridPlan& plan, const NewtonConfig& cfg = {});
TwoGridResult algorithm2(const SemilinearProblem& p, const TwoGridPlan& plan, const NewtonConfig& cfg = {});
TwoGridResult algorithm2(const QuasilinearDiffusionProblem& p, const TwoGridPlan& plan, const NewtonConfig& cfg = {});

struct RChoice {
    double r;
    int n;
};

// Root of N^r / r = N^2 / ln N on (1, 2], with n = round(N^r).
RChoice choose_r(int N);

}  // namespace spgrid
