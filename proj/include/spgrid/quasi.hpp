#pragma once

#include <span>
#include <string>
#include <vector>

#include "spgrid/linsolve.hpp"
#include "spgrid/mesh.hpp"
#include "spgrid/problem.hpp"

namespace spgrid {

enum class InitialGuess {
    Zero,     // interior values 0
    Reduced,  // per-node root of the reduced equation f(x, u) = 0 (r(x, u) = 0 for diffusion)
    Linear,   // straight line between the boundary values
    Given,    // NewtonConfig::guess
};

// Discretization of (d(u) u')' across an interval [x_i, x_{i+1}].
//   Kirchhoff: (K(y_{i+1}) - K(y_i)) / h with K' = d (needs QuasilinearDiffusionProblem::kirchhoff)
//   Midpoint:  d((y_i + y_{i+1})/2) (y_{i+1} - y_i) / h
enum class DiffusionFlux { Kirchhoff, Midpoint };

// Newton: exact Jacobian. Picard: diffusion coefficient frozen at the previous iterate.
enum class Linearization { Newton, Picard };

std::string to_string(InitialGuess g);
std::string to_string(DiffusionFlux f);
InitialGuess parse_initial(const std::string& name);
DiffusionFlux parse_flux(const std::string& name);

struct NewtonConfig {
    double tol = 1e-13;
    int max_iter = 50;
    InitialGuess initial = InitialGuess::Reduced;
    std::vector<double> guess;  // nodal values for InitialGuess::Given
    ReactionWeighting weighting = ReactionWeighting::Pointwise;
    DiffusionFlux flux = DiffusionFlux::Kirchhoff;
    Linearization linearization = Linearization::Newton;
    bool throw_on_failure = true;

    void validate() const;
};

struct SolveOutcome {
    std::vector<double> y;        // x_0 .. x_n, boundary entries equal the Dirichlet data
    int iterations = 0;
    double final_update = 0.0;    // max-norm of the last correction
    bool converged = false;
    double wall_time = 0.0;       // seconds
    double residual = 0.0;        // max-norm of the discrete residual at interior nodes
    std::vector<double> updates;  // correction norm of every sweep
};

// Per-node root of f(x_i, .) = 0 by damped scalar Newton from 0.
std::vector<double> reduced_guess(const Mesh& mesh, const SemilinearProblem& p);
std::vector<double> reduced_guess(const Mesh& mesh, const QuasilinearDiffusionProblem& p);

// Discrete residual F_i(y), i = 1..n-1 (returned with zero boundary entries, length n+1).
std::vector<double> semilinear_residual(const Mesh& mesh, const SemilinearProblem& p, std::span<const double> y,
                                        ReactionWeighting weighting = ReactionWeighting::Pointwise);
std::vector<double> diffusion_residual(const Mesh& mesh, const QuasilinearDiffusionProblem& p,
                                       std::span<const double> y, const NewtonConfig& cfg = {});

// Linear system of one quasilinearization sweep about w; its solution is the next iterate.
TridiagonalSystem semilinear_newton_system(const Mesh& mesh, const SemilinearProblem& p,
                                           std::span<const double> w, ReactionWeighting weighting);
// Jacobian of diffusion_residual at y (rhs = -F(y)); Picard drops the d_u terms.
TridiagonalSystem diffusion_jacobian(const Mesh& mesh, const QuasilinearDiffusionProblem& p,
                                     std::span<const double> y, const NewtonConfig& cfg);

// One linearized solve about w, returning the full nodal vector.
std::vector<double> newton_step(const Mesh& mesh, const SemilinearProblem& p, std::span<const double> w,
                                const NewtonConfig& cfg = {});
std::vector<double> newton_step(const Mesh& mesh, const QuasilinearDiffusionProblem& p,
                                std::span<const double> w, const NewtonConfig& cfg = {});

SolveOutcome solve_semilinear(const Mesh& mesh, const SemilinearProblem& p, const NewtonConfig& cfg = {});
SolveOutcome solve_quasilinear_diffusion(const Mesh& mesh, const QuasilinearDiffusionProblem& p,
                                         const NewtonConfig& cfg = {});

// Largest relative gap between the analytic Jacobian rows and central differences of F.
double analytic_vs_fd_jacobian(const Mesh& mesh, const SemilinearProblem& p, std::span<const double> y,
                               ReactionWeighting weighting = ReactionWeighting::Pointwise);
double analytic_vs_fd_jacobian(const Mesh& mesh, const QuasilinearDiffusionProblem& p, std::span<const double> y,
                               const NewtonConfig& cfg = {});

}  // namespace spgrid
