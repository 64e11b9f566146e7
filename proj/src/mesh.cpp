#include "spgrid/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "spgrid/error.hpp"

namespace spgrid {

std::string to_string(MeshFamily family) {
    switch (family) {
        case MeshFamily::Shishkin: return "shishkin";
        case MeshFamily::Bakhvalov: return "bakhvalov";
        case MeshFamily::Vulanovic: return "vulanovic";
        case MeshFamily::Uniform: return "uniform";
    }
    return "uniform";
}

std::string to_string(LayerSides sides) {
    return sides == LayerSides::Both ? "both" : "left";
}

MeshFamily parse_family(const std::string& name) {
    std::string s = name;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "shishkin" || s == "s") return MeshFamily::Shishkin;
    if (s == "bakhvalov" || s == "b") return MeshFamily::Bakhvalov;
    if (s == "vulanovic" || s == "v") return MeshFamily::Vulanovic;
    if (s == "uniform" || s == "u") return MeshFamily::Uniform;
    throw Error(ErrorCode::Validation, "unknown mesh family '" + name + "'");
}

LayerSides parse_sides(const std::string& name) {
    if (name == "both") return LayerSides::Both;
    if (name == "left" || name == "leftonly") return LayerSides::LeftOnly;
    throw Error(ErrorCode::Validation, "unknown layer sides '" + name + "'");
}

void MeshSpec::validate() const {
    if (!(eps > 0.0 && eps <= 1.0)) throw Error(ErrorCode::Validation, "eps must lie in (0, 1]");
    if (n < 2) throw Error(ErrorCode::Validation, "n must be at least 2");
    if (!(gamma0 > 0.0)) throw Error(ErrorCode::Validation, "gamma0 must be positive");
    if (family == MeshFamily::Bakhvalov || family == MeshFamily::Vulanovic) {
        if (!(q > 0.0 && q < 0.5)) throw Error(ErrorCode::Validation, "q must lie in (0, 0.5)");
        if (!(a > 0.0)) throw Error(ErrorCode::Validation, "a must be positive");
    }
}

double shishkin_alpha(double eps, double gamma0, int n, double pivot) {
    return std::min(0.5 * pivot, 2.0 / gamma0 * eps * std::log(static_cast<double>(n)));
}

double vulanovic_alpha(double eps, double a, double q, double pivot) {
    const double ae = a * eps;
    if (ae >= q) throw Error(ErrorCode::DegenerateMesh, "a*eps >= q");
    // mu(al) + mu'(al)(p - al) = p reduces to (p + ae) al^2 - 2pq al + p q^2 - ae q p = 0
    // after multiplying by (q - al)^2 / q; the smaller root lies in (0, q).
    const double disc = ae * q * (ae * q + (pivot + ae) * (pivot - q));
    return (pivot * q - std::sqrt(disc)) / (pivot + ae);
}

double bakhvalov_tangency_residual(double alpha, double eps, double a, double q, double pivot) {
    const double ae = a * eps;
    return ae * std::log(q / (q - alpha)) + ae * (pivot - alpha) / (q - alpha) - pivot;
}

double bakhvalov_alpha(double eps, double a, double q, double pivot) {
    if (a * eps >= q) throw Error(ErrorCode::DegenerateMesh, "a*eps >= q");
    auto T = [&](double al) { return bakhvalov_tangency_residual(al, eps, a, q, pivot); };
    if (T(0.0) >= 0.0) return 0.0;
    double lo = 0.0;
    double hi = q - 1e-15;
    if (!(T(hi) > 0.0)) throw Error(ErrorCode::NoRoot, "tangency condition has no sign change");
    // Bisect to full resolution; 1e-14 is reached long before the interval stops shrinking.
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (T(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

MeshGenerator::MeshGenerator(const MeshSpec& spec) : spec_(spec) {
    spec_.validate();
    pivot_ = spec_.pivot();
    const double p = pivot_;
    switch (spec_.family) {
        case MeshFamily::Uniform:
            break;
        case MeshFamily::Shishkin: {
            alpha_ = shishkin_alpha(spec_.eps, spec_.gamma0, spec_.n, p);
            if (alpha_ < 0.5 * p) {
                identity_ = false;
                breakpoint_ = 0.5 * p;
                outer_slope_ = (p - alpha_) / (p - breakpoint_);
            } else {
                alpha_ = 0.5 * p;
            }
            break;
        }
        case MeshFamily::Bakhvalov:
        case MeshFamily::Vulanovic: {
            if (spec_.a * spec_.eps >= spec_.q) {
                degenerate_ = true;
                break;
            }
            alpha_ = spec_.family == MeshFamily::Bakhvalov
                         ? bakhvalov_alpha(spec_.eps, spec_.a, spec_.q, p)
                         : vulanovic_alpha(spec_.eps, spec_.a, spec_.q, p);
            if (alpha_ <= 0.0) {
                alpha_ = 0.0;
                degenerate_ = true;
                break;
            }
            identity_ = false;
            breakpoint_ = alpha_;
            // Secant through (alpha, phi(alpha)) and (p, p): equal to the tangent up to the
            // accuracy of alpha and hits the pivot exactly.
            outer_slope_ = (p - layer(alpha_)) / (p - alpha_);
            break;
        }
    }
}

double MeshGenerator::layer(double t) const {
    const double ae = spec_.a * spec_.eps;
    const double q = spec_.q;
    switch (spec_.family) {
        case MeshFamily::Shishkin: return alpha_ / breakpoint_ * t;
        case MeshFamily::Bakhvalov: return ae * std::log(q / (q - t));
        case MeshFamily::Vulanovic: return ae * t / (q - t);
        case MeshFamily::Uniform: return t;
    }
    return t;
}

double MeshGenerator::layer_slope(double t) const {
    const double ae = spec_.a * spec_.eps;
    const double q = spec_.q;
    switch (spec_.family) {
        case MeshFamily::Shishkin: return alpha_ / breakpoint_;
        case MeshFamily::Bakhvalov: return ae / (q - t);
        case MeshFamily::Vulanovic: return ae * q / ((q - t) * (q - t));
        case MeshFamily::Uniform: return 1.0;
    }
    return 1.0;
}

double MeshGenerator::half(double t) const {
    if (identity_) return t;
    if (t <= breakpoint_) return layer(t);
    const double xb = spec_.family == MeshFamily::Shishkin ? alpha_ : layer(breakpoint_);
    return xb + outer_slope_ * (t - breakpoint_);
}

double MeshGenerator::half_slope(double t) const {
    if (identity_) return 1.0;
    return t < breakpoint_ ? layer_slope(t) : outer_slope_;
}

double MeshGenerator::operator()(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    if (t > pivot_) return 1.0 - half(1.0 - t);
    return half(t);
}

double MeshGenerator::derivative(double t) const {
    if (t > pivot_) return half_slope(1.0 - t);
    return half_slope(t);
}

namespace {

void fill_steps(Mesh& mesh) {
    const int n = mesh.n();
    mesh.steps.resize(n);
    for (int i = 1; i <= n; ++i) mesh.steps[i - 1] = mesh.nodes[i] - mesh.nodes[i - 1];
    mesh.half_steps.resize(std::max(0, n - 1));
    for (int i = 1; i < n; ++i) mesh.half_steps[i - 1] = 0.5 * (mesh.steps[i - 1] + mesh.steps[i]);
}

}  // namespace

Mesh build_mesh(const MeshSpec& spec) {
    const MeshGenerator gen(spec);
    Mesh mesh;
    mesh.spec = spec;
    mesh.alpha = gen.alpha();
    mesh.degenerate = gen.degenerate();
    const int n = spec.n;
    mesh.nodes.resize(n + 1);
    const double dn = static_cast<double>(n);
    if (spec.layer_sides == LayerSides::Both) {
        // Right half mirrors the left half node by node, so x_i + x_{n-i} = 1 up to one rounding.
        for (int i = 0; 2 * i <= n; ++i) mesh.nodes[i] = gen(i / dn);
        for (int i = n / 2 + 1; i <= n; ++i) mesh.nodes[i] = 1.0 - mesh.nodes[n - i];
        if (n % 2 == 0) mesh.nodes[n / 2] = 0.5;
    } else {
        for (int i = 0; i <= n; ++i) mesh.nodes[i] = gen(i / dn);
    }
    mesh.nodes[0] = 0.0;
    mesh.nodes[n] = 1.0;
    fill_steps(mesh);
    return mesh;
}

Mesh mesh_from_nodes(std::vector<double> nodes, double eps) {
    if (nodes.size() < 3) throw Error(ErrorCode::Validation, "a mesh needs at least 3 nodes");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1])) throw Error(ErrorCode::Validation, "nodes must be strictly increasing");
    if (nodes.front() != 0.0 || nodes.back() != 1.0)
        throw Error(ErrorCode::Validation, "nodes must start at 0 and end at 1");
    Mesh mesh;
    mesh.nodes = std::move(nodes);
    mesh.spec.family = MeshFamily::Uniform;
    mesh.spec.eps = eps;
    mesh.spec.n = mesh.n();
    fill_steps(mesh);
    return mesh;
}

double layer_fraction(const Mesh& mesh, double eps) {
    int count = 0;
    for (double x : mesh.nodes)
        if (x <= eps || x >= 1.0 - eps) ++count;
    return 100.0 * count / mesh.n();
}

std::string export_mesh(const Mesh& mesh) {
    std::ostringstream out;
    const MeshSpec& s = mesh.spec;
    char buf[128];
    std::snprintf(buf, sizeof buf, "# %s %d %.17g %.17g %.17g %.17g\n", to_string(s.family).c_str(), s.n,
                  s.eps, s.a, s.q, s.gamma0);
    out << buf;
    for (double x : mesh.nodes) {
        std::snprintf(buf, sizeof buf, "%.17g\n", x);
        out << buf;
    }
    return out.str();
}

}  // namespace spgrid
