#include "spgrid/quasi.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <type_traits>

#include "spgrid/error.hpp"

namespace spgrid {

std::string to_string(InitialGuess g) {
    switch (g) {
        case InitialGuess::Zero: return "zero";
        case InitialGuess::Reduced: return "reduced";
        case InitialGuess::Linear: return "linear";
        case InitialGuess::Given: return "given";
    }
    return "zero";
}

std::string to_string(DiffusionFlux f) { return f == DiffusionFlux::Kirchhoff ? "kirchhoff" : "midpoint"; }

InitialGuess parse_initial(const std::string& name) {
    if (name == "zero") return InitialGuess::Zero;
    if (name == "reduced") return InitialGuess::Reduced;
    if (name == "linear") return InitialGuess::Linear;
    throw Error(ErrorCode::Validation, "unknown initial guess '" + name + "'");
}

DiffusionFlux parse_flux(const std::string& name) {
    if (name == "kirchhoff") return DiffusionFlux::Kirchhoff;
    if (name == "midpoint") return DiffusionFlux::Midpoint;
    throw Error(ErrorCode::Validation, "unknown diffusion flux '" + name + "'");
}

void NewtonConfig::validate() const {
    if (!(tol > 0.0)) throw Error(ErrorCode::Validation, "tol must be positive");
    if (max_iter < 1) throw Error(ErrorCode::Validation, "max_iter must be at least 1");
}

namespace {

using Clock = std::chrono::steady_clock;

struct Weights {
    double l, c, r;
};

Weights row_weights(const Mesh& mesh, int i, ReactionWeighting weighting) {
    if (weighting == ReactionWeighting::Pointwise) return {0.0, 1.0, 0.0};
    const double hb = mesh.half_steps[i - 1];
    return {mesh.steps[i - 1] / (6.0 * hb), 2.0 / 3.0, mesh.steps[i] / (6.0 * hb)};
}

void check_length(const Mesh& mesh, std::span<const double> y) {
    if (y.size() != mesh.nodes.size()) throw Error(ErrorCode::Validation, "nodal vector length mismatch");
}

// Damped scalar Newton for g(u) = 0 starting at 0; returns the best iterate found.
template <class G, class Gu>
double scalar_root(G&& g, Gu&& gu) {
    double u = 0.0;
    double gv = g(u);
    for (int it = 0; it < 100 && std::abs(gv) > 1e-15; ++it) {
        const double slope = gu(u);
        if (!(std::isfinite(slope) && slope != 0.0)) break;
        double step = -gv / slope;
        double trial = u + step;
        double gt = g(trial);
        int halvings = 0;
        while (!(std::isfinite(gt) && std::abs(gt) < std::abs(gv)) && halvings < 60) {
            step *= 0.5;
            trial = u + step;
            gt = g(trial);
            ++halvings;
        }
        if (halvings == 60) break;
        u = trial;
        gv = gt;
    }
    return u;
}

std::vector<double> initial_vector(const Mesh& mesh, double bl, double br, const NewtonConfig& cfg,
                                   const std::vector<double>& reduced) {
    const std::size_t size = mesh.nodes.size();
    std::vector<double> y(size, 0.0);
    switch (cfg.initial) {
        case InitialGuess::Zero: break;
        case InitialGuess::Reduced: y = reduced; break;
        case InitialGuess::Linear:
            for (std::size_t i = 0; i < size; ++i) y[i] = bl + (br - bl) * mesh.nodes[i];
            break;
        case InitialGuess::Given:
            if (cfg.guess.size() != size) throw Error(ErrorCode::Validation, "initial guess length mismatch");
            y = cfg.guess;
            break;
    }
    y.front() = bl;
    y.back() = br;
    return y;
}

bool use_kirchhoff(const QuasilinearDiffusionProblem& p, const NewtonConfig& cfg) {
    return cfg.flux == DiffusionFlux::Kirchhoff && static_cast<bool>(p.kirchhoff);
}

double checked_d(const QuasilinearDiffusionProblem& p, double u) {
    const double v = p.d(u);
    if (!(std::isfinite(v) && v > 0.0))
        throw Error(ErrorCode::SingularDiffusion, "diffusion coefficient not positive at u = " + std::to_string(u));
    return v;
}

// Flux values F_{i+1/2} = (flux across interval i+1), i = 0..n-1.
std::vector<double> fluxes(const Mesh& mesh, const QuasilinearDiffusionProblem& p, std::span<const double> y,
                           bool kirchhoff) {
    const int n = mesh.n();
    std::vector<double> fl(n);
    if (kirchhoff) {
        std::vector<double> K(n + 1);
        for (int i = 0; i <= n; ++i) {
            checked_d(p, y[i]);
            K[i] = p.kirchhoff(y[i]);
            if (!std::isfinite(K[i]))
                throw Error(ErrorCode::SingularDiffusion, "Kirchhoff transform undefined at node " + std::to_string(i));
        }
        for (int i = 0; i < n; ++i) fl[i] = (K[i + 1] - K[i]) / mesh.steps[i];
    } else {
        for (int i = 0; i < n; ++i) {
            const double m = 0.5 * (y[i] + y[i + 1]);
            fl[i] = checked_d(p, m) * (y[i + 1] - y[i]) / mesh.steps[i];
        }
    }
    return fl;
}

}  // namespace

std::vector<double> reduced_guess(const Mesh& mesh, const SemilinearProblem& p) {
    std::vector<double> y(mesh.nodes.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double x = mesh.nodes[i];
        y[i] = scalar_root([&](double u) { return p.f(x, u); }, [&](double u) { return p.f_u(x, u); });
    }
    return y;
}

std::vector<double> reduced_guess(const Mesh& mesh, const QuasilinearDiffusionProblem& p) {
    std::vector<double> y(mesh.nodes.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double x = mesh.nodes[i];
        y[i] = scalar_root([&](double u) { return p.r(x, u); }, [&](double u) { return p.r_u(x, u); });
    }
    return y;
}

std::vector<double> semilinear_residual(const Mesh& mesh, const SemilinearProblem& p, std::span<const double> y,
                                        ReactionWeighting weighting) {
    check_length(mesh, y);
    const int n = mesh.n();
    const double e2 = p.eps * p.eps;
    std::vector<double> f(n + 1), res(n + 1, 0.0);
    for (int i = 0; i <= n; ++i) f[i] = p.f(mesh.nodes[i], y[i]);
    for (int i = 1; i < n; ++i) {
        const double hl = mesh.steps[i - 1], hr = mesh.steps[i], hb = mesh.half_steps[i - 1];
        const double yxx = ((y[i + 1] - y[i]) / hr - (y[i] - y[i - 1]) / hl) / hb;
        const Weights w = row_weights(mesh, i, weighting);
        res[i] = -e2 * yxx + w.l * f[i - 1] + w.c * f[i] + w.r * f[i + 1];
    }
    return res;
}

std::vector<double> diffusion_residual(const Mesh& mesh, const QuasilinearDiffusionProblem& p,
                                       std::span<const double> y, const NewtonConfig& cfg) {
    check_length(mesh, y);
    const int n = mesh.n();
    const double e2 = p.eps * p.eps;
    const std::vector<double> fl = fluxes(mesh, p, y, use_kirchhoff(p, cfg));
    std::vector<double> r(n + 1), res(n + 1, 0.0);
    for (int i = 0; i <= n; ++i) r[i] = p.r(mesh.nodes[i], y[i]);
    for (int i = 1; i < n; ++i) {
        const Weights w = row_weights(mesh, i, cfg.weighting);
        res[i] = -e2 * (fl[i] - fl[i - 1]) / mesh.half_steps[i - 1] + w.l * r[i - 1] + w.c * r[i] + w.r * r[i + 1];
    }
    return res;
}

TridiagonalSystem semilinear_newton_system(const Mesh& mesh, const SemilinearProblem& p,
                                           std::span<const double> w, ReactionWeighting weighting) {
    check_length(mesh, w);
    const int n = mesh.n();
    std::vector<double> b(n + 1), g(n + 1);
    const bool all = weighting == ReactionWeighting::Consistent;
    for (int i = 0; i <= n; ++i) {
        const double x = mesh.nodes[i];
        b[i] = p.f_u(x, w[i]);
        if ((all || (i > 0 && i < n)) && !(std::isfinite(b[i]) && b[i] > 0.0)) {
            char msg[96];
            std::snprintf(msg, sizeof msg, "f_u = %g at x = %g", b[i], x);
            throw Error(ErrorCode::NonpositiveJacobian, msg);
        }
        g[i] = b[i] * w[i] - p.f(x, w[i]);
    }
    return assemble(mesh, p.eps, b, g, p.bc_left, p.bc_right, weighting);
}

TridiagonalSystem diffusion_jacobian(const Mesh& mesh, const QuasilinearDiffusionProblem& p,
                                     std::span<const double> y, const NewtonConfig& cfg) {
    check_length(mesh, y);
    const int n = mesh.n();
    const double e2 = p.eps * p.eps;
    const bool kirchhoff = use_kirchhoff(p, cfg);
    const bool picard = cfg.linearization == Linearization::Picard;

    // For interval j (between nodes j and j+1): dflux/dy_j and dflux/dy_{j+1}.
    std::vector<double> dl(n), dr(n);
    for (int j = 0; j < n; ++j) {
        const double h = mesh.steps[j];
        const double dy = y[j + 1] - y[j];
        if (kirchhoff) {
            if (picard) {
                double coef;
                if (std::abs(dy) > 1e-12 * (1.0 + std::abs(y[j])))
                    coef = (p.kirchhoff(y[j + 1]) - p.kirchhoff(y[j])) / dy;
                else
                    coef = checked_d(p, 0.5 * (y[j] + y[j + 1]));
                dl[j] = -coef / h;
                dr[j] = coef / h;
            } else {
                dl[j] = -checked_d(p, y[j]) / h;
                dr[j] = checked_d(p, y[j + 1]) / h;
            }
        } else {
            const double m = 0.5 * (y[j] + y[j + 1]);
            const double dm = checked_d(p, m);
            const double chain = picard ? 0.0 : p.d_u(m) * dy / (2.0 * h);
            dl[j] = -dm / h + chain;
            dr[j] = dm / h + chain;
        }
    }
    const std::vector<double> res = diffusion_residual(mesh, p, y, cfg);
    TridiagonalSystem sys;
    const int m = n - 1;
    sys.sub.resize(m);
    sys.diag.resize(m);
    sys.sup.resize(m);
    sys.rhs.resize(m);
    for (int i = 1; i < n; ++i) {
        const Weights w = row_weights(mesh, i, cfg.weighting);
        const double c = e2 / mesh.half_steps[i - 1];
        const int k = i - 1;
        // F_i = -c (flux_i - flux_{i-1}) + reaction
        sys.sub[k] = c * dl[i - 1] + w.l * p.r_u(mesh.nodes[i - 1], y[i - 1]);
        sys.diag[k] = -c * (dl[i] - dr[i - 1]) + w.c * p.r_u(mesh.nodes[i], y[i]);
        sys.sup[k] = -c * dr[i] + w.r * p.r_u(mesh.nodes[i + 1], y[i + 1]);
        sys.rhs[k] = -res[i];
    }
    return sys;
}

std::vector<double> newton_step(const Mesh& mesh, const SemilinearProblem& p, std::span<const double> w,
                                const NewtonConfig& cfg) {
    const std::vector<double> interior = thomas_solve(semilinear_newton_system(mesh, p, w, cfg.weighting));
    std::vector<double> y(mesh.nodes.size());
    y.front() = p.bc_left;
    y.back() = p.bc_right;
    std::copy(interior.begin(), interior.end(), y.begin() + 1);
    return y;
}

std::vector<double> newton_step(const Mesh& mesh, const QuasilinearDiffusionProblem& p,
                                std::span<const double> w, const NewtonConfig& cfg) {
    std::vector<double> y(w.begin(), w.end());
    y.front() = p.bc_left;
    y.back() = p.bc_right;
    const std::vector<double> delta = thomas_solve(diffusion_jacobian(mesh, p, y, cfg));
    for (std::size_t k = 0; k < delta.size(); ++k) y[k + 1] += delta[k];
    return y;
}

namespace {

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

template <class Problem>
SolveOutcome iterate(const Mesh& mesh, const Problem& p, const NewtonConfig& cfg) {
    const auto start = Clock::now();
    cfg.validate();
    p.validate();
    SolveOutcome out;
    std::vector<double> reduced;
    if (cfg.initial == InitialGuess::Reduced) reduced = reduced_guess(mesh, p);
    std::vector<double> y = initial_vector(mesh, p.bc_left, p.bc_right, cfg, reduced);
    for (int it = 1; it <= cfg.max_iter; ++it) {
        std::vector<double> next = newton_step(mesh, p, y, cfg);
        double upd = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) upd = std::max(upd, std::abs(next[i] - y[i]));
        if (!std::isfinite(upd)) throw Error(ErrorCode::NoConvergence, "iterate became non-finite");
        y = std::move(next);
        out.updates.push_back(upd);
        out.iterations = it;
        out.final_update = upd;
        if (upd <= cfg.tol) {
            out.converged = true;
            break;
        }
    }
    if constexpr (std::is_same_v<Problem, SemilinearProblem>)
        out.residual = max_abs(semilinear_residual(mesh, p, y, cfg.weighting));
    else
        out.residual = max_abs(diffusion_residual(mesh, p, y, cfg));
    out.y = std::move(y);
    out.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    if (!out.converged && cfg.throw_on_failure) {
        char msg[128];
        std::snprintf(msg, sizeof msg, "%d sweeps, last update %.3e (tol %.1e)", out.iterations, out.final_update,
                      cfg.tol);
        throw Error(ErrorCode::NoConvergence, msg);
    }
    return out;
}

// Central differences of the residual, one column at a time; returns the largest gap relative
// to the analytic entry (entries far below the row scale are compared against the row scale).
template <class ResidualFn>
double fd_gap(const Mesh& mesh, std::span<const double> y, const TridiagonalSystem& J, ResidualFn&& F) {
    const int n = mesh.n();
    std::vector<double> yy(y.begin(), y.end());
    double worst = 0.0;
    for (int j = 1; j < n; ++j) {
        const double step = 1e-6 * (1.0 + std::abs(y[j]));
        yy[j] = y[j] + step;
        const std::vector<double> fp = F(yy);
        yy[j] = y[j] - step;
        const std::vector<double> fm = F(yy);
        yy[j] = y[j];
        for (int i = std::max(1, j - 1); i <= std::min(n - 1, j + 1); ++i) {
            const int k = i - 1;
            const double fd = (fp[i] - fm[i]) / (2.0 * step);
            const double an = i == j - 1 ? J.sup[k] : (i == j ? J.diag[k] : J.sub[k]);
            const double scale = std::max({std::abs(J.sub[k]), std::abs(J.diag[k]), std::abs(J.sup[k])});
            worst = std::max(worst, std::abs(fd - an) / std::max(std::abs(an), 1e-8 * scale));
        }
    }
    return worst;
}

}  // namespace

SolveOutcome solve_semilinear(const Mesh& mesh, const SemilinearProblem& p, const NewtonConfig& cfg) {
    return iterate(mesh, p, cfg);
}

SolveOutcome solve_quasilinear_diffusion(const Mesh& mesh, const QuasilinearDiffusionProblem& p,
                                         const NewtonConfig& cfg) {
    return iterate(mesh, p, cfg);
}

double analytic_vs_fd_jacobian(const Mesh& mesh, const SemilinearProblem& p, std::span<const double> y,
                               ReactionWeighting weighting) {
    const TridiagonalSystem J = semilinear_newton_system(mesh, p, y, weighting);
    return fd_gap(mesh, y, J, [&](const std::vector<double>& v) { return semilinear_residual(mesh, p, v, weighting); });
}

double analytic_vs_fd_jacobian(const Mesh& mesh, const QuasilinearDiffusionProblem& p, std::span<const double> y,
                               const NewtonConfig& cfg) {
    NewtonConfig exact = cfg;
    exact.linearization = Linearization::Newton;
    const TridiagonalSystem J = diffusion_jacobian(mesh, p, y, exact);
    return fd_gap(mesh, y, J, [&](const std::vector<double>& v) { return diffusion_residual(mesh, p, v, exact); });
}

}  // namespace spgrid
