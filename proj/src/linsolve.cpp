#include "spgrid/linsolve.hpp"

#include <algorithm>
#include <cmath>

#include "spgrid/error.hpp"

namespace spgrid {

std::string to_string(ReactionWeighting w) {
    return w == ReactionWeighting::Pointwise ? "pointwise" : "consistent";
}

ReactionWeighting parse_weighting(const std::string& name) {
    if (name == "pointwise") return ReactionWeighting::Pointwise;
    if (name == "consistent") return ReactionWeighting::Consistent;
    throw Error(ErrorCode::Validation, "unknown reaction weighting '" + name + "'");
}

TridiagonalSystem assemble(const Mesh& mesh, double eps, std::span<const double> b, std::span<const double> g,
                           double bc_left, double bc_right, ReactionWeighting weighting) {
    const int n = mesh.n();
    if (n < 2) throw Error(ErrorCode::Validation, "mesh needs at least 2 intervals");
    if (b.size() != static_cast<std::size_t>(n + 1) || g.size() != static_cast<std::size_t>(n + 1))
        throw Error(ErrorCode::Validation, "b and g must have one entry per node");
    const bool consistent = weighting == ReactionWeighting::Consistent;
    for (int i = consistent ? 0 : 1; i <= (consistent ? n : n - 1); ++i)
        if (!(b[i] > 0.0))
            throw Error(ErrorCode::NonpositiveCoefficient, "reaction coefficient must be positive at node " +
                                                               std::to_string(i));

    const double e2 = eps * eps;
    TridiagonalSystem sys;
    const int m = n - 1;
    sys.sub.resize(m);
    sys.diag.resize(m);
    sys.sup.resize(m);
    sys.rhs.resize(m);
    sys.row_sum.resize(m);
    for (int i = 1; i < n; ++i) {
        const double hl = mesh.steps[i - 1];
        const double hr = mesh.steps[i];
        const double hb = mesh.half_steps[i - 1];
        double wl = 0.0, wc = 1.0, wr = 0.0;
        if (consistent) {
            wl = hl / (6.0 * hb);
            wc = 2.0 / 3.0;
            wr = hr / (6.0 * hb);
        }
        const int k = i - 1;
        const double cl = e2 / (hb * hl);
        const double cr = e2 / (hb * hr);
        sys.sub[k] = -cl + wl * b[i - 1];
        sys.sup[k] = -cr + wr * b[i + 1];
        sys.diag[k] = cl + cr + wc * b[i];
        sys.row_sum[k] = wl * b[i - 1] + wc * b[i] + wr * b[i + 1];
        sys.rhs[k] = wl * g[i - 1] + wc * g[i] + wr * g[i + 1];
    }
    sys.rhs[0] -= sys.sub[0] * bc_left;
    sys.rhs[m - 1] -= sys.sup[m - 1] * bc_right;
    return sys;
}

TridiagonalSystem assemble(const Mesh& mesh, double eps, const ScalarFn& b, const ScalarFn& g, double bc_left,
                           double bc_right, ReactionWeighting weighting) {
    std::vector<double> bv(mesh.nodes.size()), gv(mesh.nodes.size());
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        bv[i] = b(mesh.nodes[i]);
        gv[i] = g(mesh.nodes[i]);
    }
    return assemble(mesh, eps, bv, gv, bc_left, bc_right, weighting);
}

std::vector<double> thomas_solve(const TridiagonalSystem& sys) {
    const std::size_t m = sys.diag.size();
    if (m == 0 || sys.sub.size() != m || sys.sup.size() != m || sys.rhs.size() != m)
        throw Error(ErrorCode::Validation, "tridiagonal arrays must be nonempty and of equal length");
    if (!sys.row_sum.empty() && sys.row_sum.size() != m)
        throw Error(ErrorCode::Validation, "row_sum length mismatch");
    auto rho = [&](std::size_t k) {
        return sys.row_sum.empty() ? sys.sub[k] + sys.diag[k] + sys.sup[k] : sys.row_sum[k];
    };
    auto check = [](double pivot, std::size_t k) {
        if (!(std::abs(pivot) >= 1e-300))
            throw Error(ErrorCode::ZeroPivot, "pivot vanished in row " + std::to_string(k));
    };

    // sigma_k: sum of the remaining entries of eliminated row k, pivot m_k = sigma_k - sup_k.
    std::vector<double> piv(m), z(m);
    double sigma = rho(0) - sys.sub[0];
    piv[0] = sys.diag[0];
    check(piv[0], 0);
    z[0] = sys.rhs[0];
    for (std::size_t k = 1; k < m; ++k) {
        const double l = sys.sub[k] / piv[k - 1];
        sigma = rho(k) - l * sigma;
        piv[k] = sigma - sys.sup[k];
        check(piv[k], k);
        z[k] = sys.rhs[k] - l * z[k - 1];
    }
    std::vector<double> y(m);
    y[m - 1] = z[m - 1] / piv[m - 1];
    for (std::size_t k = m - 1; k-- > 0;) y[k] = (z[k] - sys.sup[k] * y[k + 1]) / piv[k];
    return y;
}

double residual_norm(const TridiagonalSystem& sys, std::span<const double> y) {
    const std::size_t m = sys.size();
    double worst = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        double ax = sys.diag[k] * y[k];
        if (k > 0) ax += sys.sub[k] * y[k - 1];
        if (k + 1 < m) ax += sys.sup[k] * y[k + 1];
        worst = std::max(worst, std::abs(ax - sys.rhs[k]));
    }
    return worst;
}

namespace {

std::vector<double> with_boundary(const std::vector<double>& interior, double bl, double br) {
    std::vector<double> y(interior.size() + 2);
    y.front() = bl;
    y.back() = br;
    std::copy(interior.begin(), interior.end(), y.begin() + 1);
    return y;
}

}  // namespace

std::vector<double> solve_linear(const Mesh& mesh, double eps, std::span<const double> b,
                                 std::span<const double> g, double bc_left, double bc_right,
                                 ReactionWeighting weighting) {
    return with_boundary(thomas_solve(assemble(mesh, eps, b, g, bc_left, bc_right, weighting)), bc_left,
                         bc_right);
}

std::vector<double> solve_linear(const Mesh& mesh, double eps, const ScalarFn& b, const ScalarFn& g,
                                 double bc_left, double bc_right, ReactionWeighting weighting) {
    return with_boundary(thomas_solve(assemble(mesh, eps, b, g, bc_left, bc_right, weighting)), bc_left,
                         bc_right);
}

}  // namespace spgrid
