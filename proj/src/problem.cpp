#include "spgrid/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spgrid/error.hpp"

namespace spgrid {

namespace {

void check_common(double eps, bool has_exact, const ScalarFn& exact, double bl, double br) {
    if (!(eps > 0.0 && eps <= 1.0)) throw Error(ErrorCode::Validation, "eps must lie in (0, 1]");
    if (has_exact) {
        if (std::abs(exact(0.0) - bl) > 1e-12 || std::abs(exact(1.0) - br) > 1e-12)
            throw Error(ErrorCode::Validation, "exact solution does not match the boundary values");
    }
}

// Layer function of ex1: (e^{-x/eps} + e^{-(1-x)/eps}) / (1 + e^{-1/eps}).
double ex1_layer(double eps, double x) {
    return (std::exp(-x / eps) + std::exp(-(1.0 - x) / eps)) / (1.0 + std::exp(-1.0 / eps));
}

}  // namespace

void SemilinearProblem::validate() const {
    if (!f || !f_u) throw Error(ErrorCode::Validation, "f and f_u are required");
    if (!(c0_squared > 0.0)) throw Error(ErrorCode::Validation, "c0_squared must be positive");
    check_common(eps, has_exact(), exact, bc_left, bc_right);
}

void QuasilinearDiffusionProblem::validate() const {
    if (!d || !d_u || !r || !r_u) throw Error(ErrorCode::Validation, "d, d_u, r and r_u are required");
    check_common(eps, has_exact(), exact, bc_left, bc_right);
}

SemilinearProblem example1(double eps) {
    SemilinearProblem p;
    p.name = "ex1";
    p.eps = eps;
    p.f = [eps](double x, double u) {
        const double E = ex1_layer(eps, x);
        return (u - 1.0) / (2.0 - u) - E * E / (1.0 + E);
    };
    p.f_u = [](double, double u) { return 1.0 / ((2.0 - u) * (2.0 - u)); };
    p.bc_left = 0.0;
    p.bc_right = 0.0;
    p.exact = [eps](double x) { return 1.0 - ex1_layer(eps, x); };
    p.c0_squared = 0.25;
    p.validate();
    return p;
}

QuasilinearDiffusionProblem example2(double eps) {
    QuasilinearDiffusionProblem p;
    p.name = "ex2";
    p.eps = eps;
    auto exact = [eps](double x) { return std::exp(-x / eps) + std::expm1(x); };
    auto source = [eps, exact](double x) {
        const double E = std::exp(-x / eps);
        const double X = std::exp(x);
        const double s = E + X;
        const double t = eps * X - E;
        return exact(x) - (E + eps * eps * X) / s + t * t / (s * s);
    };
    p.d = [](double u) { return 1.0 / (1.0 + u); };
    p.d_u = [](double u) { return -1.0 / ((1.0 + u) * (1.0 + u)); };
    p.kirchhoff = [](double u) { return std::log1p(u); };
    p.r = [source](double x, double u) { return u - source(x); };
    p.r_u = [](double, double) { return 1.0; };
    p.bc_left = 1.0;
    p.bc_right = std::exp(-1.0 / eps) + std::expm1(1.0);
    p.exact = exact;
    p.c0_squared = 1.0;
    p.validate();
    return p;
}

SemilinearProblem log_transform(const QuasilinearDiffusionProblem& p) {
    p.validate();
    for (double u : {0.0, 0.5, 1.0, 3.0})
        if (std::abs(p.d(u) * (1.0 + u) - 1.0) > 1e-12)
            throw Error(ErrorCode::Validation, "log_transform requires d(u) = 1/(1+u)");
    if (p.bc_left <= -1.0 || p.bc_right <= -1.0)
        throw Error(ErrorCode::Domain, "boundary values must exceed -1");
    SemilinearProblem s;
    s.name = p.name + "-log";
    s.eps = p.eps;
    auto r = p.r;
    auto r_u = p.r_u;
    s.f = [r](double x, double v) { return r(x, std::expm1(v)); };
    s.f_u = [r_u](double x, double v) { return r_u(x, std::expm1(v)) * std::exp(v); };
    s.bc_left = std::log1p(p.bc_left);
    s.bc_right = std::log1p(p.bc_right);
    if (p.has_exact()) {
        auto ex = p.exact;
        s.exact = [ex](double x) { return std::log1p(ex(x)); };
    }
    s.c0_squared = p.c0_squared;
    return s;
}

double sampled_min_f_u(const SemilinearProblem& p, double u_lo, double u_hi, int samples) {
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const double x = static_cast<double>(i) / (samples - 1);
        for (int j = 0; j < samples; ++j) {
            const double u = u_lo + (u_hi - u_lo) * j / (samples - 1);
            const double v = p.f_u(x, u);
            if (std::isfinite(v)) lo = std::min(lo, v);
        }
    }
    return lo;
}

double sampled_min_d(const QuasilinearDiffusionProblem& p, double u_lo, double u_hi, int samples) {
    double lo = std::numeric_limits<double>::infinity();
    for (int j = 0; j < samples; ++j) {
        const double v = p.d(u_lo + (u_hi - u_lo) * j / (samples - 1));
        if (std::isfinite(v)) lo = std::min(lo, v);
    }
    return lo;
}

}  // namespace spgrid
