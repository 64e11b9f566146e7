#pragma once

#include <span>
#include <vector>

#include "spgrid/mesh.hpp"
#include "spgrid/problem.hpp"

namespace spgrid {

// How the zero-order term b y - g enters row i.
//   Pointwise:  b_i y_i - g_i  (the classical three-point scheme)
//   Consistent: the linear finite-element mass row, weights h_i/(6 hbar_i), 2/3, h_{i+1}/(6 hbar_i)
//               applied to b_{i-1} y_{i-1}, b_i y_i, b_{i+1} y_{i+1} (and likewise to g)
enum class ReactionWeighting { Pointwise, Consistent };

std::string to_string(ReactionWeighting w);
ReactionWeighting parse_weighting(const std::string& name);

// Rows for the interior unknowns y_1 .. y_{n-1}. sub[0] and sup[n-2] hold the coefficients of
// the boundary values, which are already folded into rhs. row_sum[k] is the full row sum
// sub + diag + sup, assembled directly from the reaction terms so that it stays accurate when
// eps^2/h^2 dominates; it may be left empty, in which case it is formed from the entries.
struct TridiagonalSystem {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> sup;
    std::vector<double> rhs;
    std::vector<double> row_sum;

    std::size_t size() const { return diag.size(); }
};

// b and g are nodal arrays of length n+1 (boundary entries are used only by Consistent).
TridiagonalSystem assemble(const Mesh& mesh, double eps, std::span<const double> b, std::span<const double> g,
                           double bc_left, double bc_right,
                           ReactionWeighting weighting = ReactionWeighting::Pointwise);
TridiagonalSystem assemble(const Mesh& mesh, double eps, const ScalarFn& b, const ScalarFn& g, double bc_left,
                           double bc_right, ReactionWeighting weighting = ReactionWeighting::Pointwise);

// Forward elimination and back substitution without pivoting. The pivots are carried as
// row_sum - sup so that diagonally dominant rows do not lose the small reaction part.
std::vector<double> thomas_solve(const TridiagonalSystem& sys);

// max_k |(A y)_k - rhs_k| over interior rows, y holding the interior unknowns.
double residual_norm(const TridiagonalSystem& sys, std::span<const double> y);

// Full vector y_0 .. y_n.
std::vector<double> solve_linear(const Mesh& mesh, double eps, std::span<const double> b,
                                 std::span<const double> g, double bc_left, double bc_right,
                                 ReactionWeighting weighting = ReactionWeighting::Pointwise);
std::vector<double> solve_linear(const Mesh& mesh, double eps, const ScalarFn& b, const ScalarFn& g,
                                 double bc_left, double bc_right,
                                 ReactionWeighting weighting = ReactionWeighting::Pointwise);

}  // namespace spgrid
