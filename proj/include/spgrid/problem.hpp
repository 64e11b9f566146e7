#pragma once

#include <functional>
#include <string>

namespace spgrid {

using ScalarFn = std::function<double(double)>;
using FieldFn = std::function<double(double, double)>;

// -eps^2 u'' + f(x, u) = 0 on (0, 1), u(0) = bc_left, u(1) = bc_right.
struct SemilinearProblem {
    std::string name = "custom";
    double eps = 1.0;
    FieldFn f;
    FieldFn f_u;
    double bc_left = 0.0;
    double bc_right = 0.0;
    ScalarFn exact;  // empty when no closed form is known
    double c0_squared = 1.0;

    bool has_exact() const { return static_cast<bool>(exact); }
    void validate() const;
};

// -eps^2 (d(u) u')' + r(x, u) = 0 on (0, 1) with Dirichlet data.
struct QuasilinearDiffusionProblem {
    std::string name = "custom";
    double eps = 1.0;
    ScalarFn d;
    ScalarFn d_u;
    ScalarFn kirchhoff;  // optional antiderivative K of d, enables the Kirchhoff flux
    FieldFn r;
    FieldFn r_u;
    double bc_left = 0.0;
    double bc_right = 0.0;
    ScalarFn exact;
    double c0_squared = 1.0;

    bool has_exact() const { return static_cast<bool>(exact); }
    void validate() const;
};

// u = 1 - (e^{-x/eps} + e^{-(1-x)/eps}) / (1 + e^{-1/eps}),
// f(x, u) = (u - 1)/(2 - u) + s(x) with s manufactured from u.
SemilinearProblem example1(double eps);

// u = e^{-x/eps} + e^x - 1, d(u) = 1/(1 + u), r(x, u) = u - f(x).
QuasilinearDiffusionProblem example2(double eps);

// For d(u) = 1/(1 + u): v = ln(1 + u) satisfies -eps^2 v'' + r(x, e^v - 1) = 0.
SemilinearProblem log_transform(const QuasilinearDiffusionProblem& p);

// Smallest sampled f_u over [0,1] x [u_lo, u_hi] (non-finite samples skipped).
double sampled_min_f_u(const SemilinearProblem& p, double u_lo = -2.0, double u_hi = 2.0, int samples = 41);
// Smallest sampled d over [u_lo, u_hi].
double sampled_min_d(const QuasilinearDiffusionProblem& p, double u_lo, double u_hi, int samples = 101);

}  // namespace spgrid
