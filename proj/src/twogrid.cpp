#include "spgrid/twogrid.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <type_traits>

#include "spgrid/error.hpp"

namespace spgrid {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double lerp_in(std::span<const double> nodes, std::span<const double> values, std::size_t j, double x) {
    if (x == nodes[j + 1]) return values[j + 1];
    const double a = values[j];
    const double b = values[j + 1];
    const double t = (x - nodes[j]) / (nodes[j + 1] - nodes[j]);
    return std::clamp(a + t * (b - a), std::min(a, b), std::max(a, b));
}

double nodal_max_error(const Mesh& mesh, std::span<const double> y, const ScalarFn& exact) {
    double e = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) e = std::max(e, std::abs(exact(mesh.nodes[i]) - y[i]));
    return e;
}

MeshSpec spec_for(const TwoGridPlan& plan, double eps, int n) {
    MeshSpec s = plan.mesh;
    s.eps = eps;
    s.n = n;
    return s;
}

template <class Problem>
SolveOutcome solve_direct(const Mesh& mesh, const Problem& p, const NewtonConfig& cfg) {
    if constexpr (std::is_same_v<Problem, SemilinearProblem>)
        return solve_semilinear(mesh, p, cfg);
    else
        return solve_quasilinear_diffusion(mesh, p, cfg);
}

template <class Problem>
TwoGridResult cascade(const Problem& p, const TwoGridPlan& plan, const NewtonConfig& cfg) {
    plan.validate();
    p.validate();
    const std::vector<int> sizes = plan.level_sizes();
    TwoGridResult res;
    for (std::size_t level = 0; level < sizes.size(); ++level) {
        const auto t0 = Clock::now();
        Mesh mesh = build_mesh(spec_for(plan, p.eps, sizes[level]));
        SolveOutcome out;
        if (level == 0) {
            out = solve_direct(mesh, p, cfg);
        } else {
            const Mesh& prev = res.meshes.back();
            const std::vector<double> w = interpolate(prev, res.outcomes.back().y, mesh.nodes);
            out.y = newton_step(mesh, p, w, cfg);
            out.iterations = 1;
            double upd = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) upd = std::max(upd, std::abs(out.y[i] - w[i]));
            out.final_update = upd;
            out.updates = {upd};
            out.converged = true;
        }
        const double secs = seconds_since(t0);
        if (level > 0) out.wall_time = secs;
        res.seconds.push_back(secs);
        if (p.has_exact()) res.errors.push_back(nodal_max_error(mesh, out.y, p.exact));
        res.meshes.push_back(std::move(mesh));
        res.outcomes.push_back(std::move(out));
    }
    return res;
}

}  // namespace

void TwoGridPlan::validate() const {
    if (N < 2) throw Error(ErrorCode::Validation, "coarse size N must be at least 2");
    if (cascade_levels < 1) throw Error(ErrorCode::Validation, "cascade_levels must be at least 1");
    if (n == 0 && !(r > 1.0)) throw Error(ErrorCode::Validation, "r must exceed 1");
    const std::vector<int> sizes = level_sizes();
    for (std::size_t k = 1; k < sizes.size(); ++k)
        if (sizes[k] <= sizes[k - 1]) throw Error(ErrorCode::Validation, "grid sizes must increase level by level");
}

int TwoGridPlan::fine_size() const {
    if (n > 0) return n;
    const double v = std::round(std::pow(static_cast<double>(N), r));
    if (v > static_cast<double>(max_intervals))
        throw Error(ErrorCode::Validation, "fine grid exceeds the 2^20 interval guard");
    return static_cast<int>(v);
}

std::vector<int> TwoGridPlan::level_sizes() const {
    std::vector<int> sizes{N, fine_size()};
    for (int m = 2; m <= cascade_levels; ++m) {
        const double v = std::pow(static_cast<double>(N), std::ldexp(1.0, m));
        if (v > static_cast<double>(max_intervals))
            throw Error(ErrorCode::Validation, "cascade level " + std::to_string(m) + " exceeds the 2^20 interval guard");
        sizes.push_back(static_cast<int>(std::llround(v)));
    }
    return sizes;
}

double TwoGridResult::evaluate(double x) const {
    const double q[1] = {x};
    return interpolate(meshes.back(), outcomes.back().y, q).front();
}

std::vector<double> interpolate(std::span<const double> nodes, std::span<const double> values,
                                std::span<const double> queries) {
    if (nodes.size() < 2 || values.size() != nodes.size())
        throw Error(ErrorCode::Validation, "interpolation needs matching node and value arrays");
    const double lo = nodes.front();
    const double hi = nodes.back();
    for (double x : queries)
        if (!(x >= lo && x <= hi) || x < 0.0 || x > 1.0)
            throw Error(ErrorCode::OutOfDomain, "query " + std::to_string(x) + " outside [0, 1]");

    const std::size_t last = nodes.size() - 2;  // index of the final interval
    std::vector<double> out(queries.size());
    const bool sorted = std::is_sorted(queries.begin(), queries.end());
    std::size_t j = 0;
    for (std::size_t k = 0; k < queries.size(); ++k) {
        const double x = queries[k];
        if (sorted) {
            while (j < last && nodes[j + 1] <= x) ++j;
        } else {
            const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
            j = std::min<std::size_t>(static_cast<std::size_t>(it - nodes.begin()) - 1, last);
        }
        out[k] = lerp_in(nodes, values, j, x);
    }
    return out;
}

std::vector<double> interpolate(const Mesh& mesh, std::span<const double> values, std::span<const double> queries) {
    return interpolate(mesh.nodes, values, queries);
}

TwoGridResult algorithm1(const SemilinearProblem& p, const TwoGridPlan& plan, const NewtonConfig& cfg) {
    TwoGridPlan one = plan;
    one.cascade_levels = 1;
    return cascade(p, one, cfg);
}

TwoGridResult algorithm1(const QuasilinearDiffusionProblem& p, const TwoGridPlan& plan, const NewtonConfig& cfg) {
    TwoGridPlan one = plan;
    one.cascade_levels = 1;
    return cascade(p, one, cfg);
}

TwoGridResult algorithm2(const SemilinearProblem& p, const TwoGridPlan& plan, const NewtonConfig& cfg) {
    return cascade(p, plan, cfg);
}

TwoGridResult algorithm2(const QuasilinearDiffusionProblem& p, const TwoGridPlan& plan, const NewtonConfig& cfg) {
    return cascade(p, plan, cfg);
}

RChoice choose_r(int N) {
    if (N < 4) throw Error(ErrorCode::Validation, "choose_r needs N >= 4");
    const double L = std::log(static_cast<double>(N));
    // g(r) = ln(N^r / r) - ln(N^2 / ln N), increasing on (1, 2].
    auto g = [&](double r) { return r * L - std::log(r) - (2.0 * L - std::log(L)); };
    double r = 2.0;
    if (g(2.0) > 0.0) {
        double lo = 1.0, hi = 2.0;
        while (hi - lo > 1e-12) {
            const double mid = 0.5 * (lo + hi);
            (g(mid) < 0.0 ? lo : hi) = mid;
        }
        r = 0.5 * (lo + hi);
    }
    return {r, static_cast<int>(std::lround(std::pow(static_cast<double>(N), r)))};
}

}  // namespace spgrid
