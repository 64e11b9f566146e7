#pragma once

#include <string>
#include <vector>

namespace spgrid {

enum class MeshFamily { Shishkin, Bakhvalov, Vulanovic, Uniform };

// Both: layers at x = 0 and x = 1, generating function symmetric about (1/2, 1/2).
// LeftOnly: single layer at x = 0, same construction with the pivot moved to (1, 1).
enum class LayerSides { Both, LeftOnly };

std::string to_string(MeshFamily family);
std::string to_string(LayerSides sides);
MeshFamily parse_family(const std::string& name);
LayerSides parse_sides(const std::string& name);

struct MeshSpec {
    MeshFamily family = MeshFamily::Uniform;
    double eps = 1.0;
    int n = 2;
    double a = 1.0;
    double q = 0.4;
    double gamma0 = 1.0;
    LayerSides layer_sides = LayerSides::Both;

    // Throws Error(Validation) on out-of-range fields.
    void validate() const;
    // Abscissa where the generating function passes through the pivot: 0.5 or 1.
    double pivot() const { return layer_sides == LayerSides::Both ? 0.5 : 1.0; }
};

// Transition point of the piecewise-uniform mesh; the cap is pivot/2.
double shishkin_alpha(double eps, double gamma0, int n, double pivot = 0.5);

// Contact abscissa of the tangent from (pivot, pivot) to mu(t) = a eps t / (q - t).
double vulanovic_alpha(double eps, double a, double q, double pivot = 0.5);

// Contact abscissa of the tangent from (pivot, pivot) to phi(t) = a eps ln(q / (q - t)),
// by bisection on T(alpha) = phi(alpha) + phi'(alpha)(pivot - alpha) - pivot.
double bakhvalov_alpha(double eps, double a, double q, double pivot = 0.5);
double bakhvalov_tangency_residual(double alpha, double eps, double a, double q, double pivot = 0.5);

// The mesh-generating function lambda: [0, 1] -> [0, 1] of a spec (n enters only through
// the Shishkin transition point).
class MeshGenerator {
public:
    explicit MeshGenerator(const MeshSpec& spec);

    double operator()(double t) const;
    double derivative(double t) const;

    // Breakpoint in t between the layer piece and the outer piece (1/4 for Shishkin Both,
    // alpha for B/V); 0 when the generating function is the identity.
    double breakpoint() const { return breakpoint_; }
    // alpha as defined for the family (Shishkin: lambda(breakpoint)).
    double alpha() const { return alpha_; }
    bool degenerate() const { return degenerate_; }
    bool identity() const { return identity_; }
    const MeshSpec& spec() const { return spec_; }

private:
    double half(double t) const;        // lambda on [0, pivot]
    double half_slope(double t) const;  // lambda' on [0, pivot]
    double layer(double t) const;
    double layer_slope(double t) const;

    MeshSpec spec_;
    double pivot_ = 0.5;
    double alpha_ = 0.0;
    double breakpoint_ = 0.0;
    double outer_slope_ = 1.0;
    bool degenerate_ = false;
    bool identity_ = true;
};

struct Mesh {
    std::vector<double> nodes;       // x_0 .. x_n
    std::vector<double> steps;       // steps[i-1] = h_i = x_i - x_{i-1}, i = 1..n
    std::vector<double> half_steps;  // half_steps[i-1] = (h_i + h_{i+1}) / 2, i = 1..n-1
    MeshSpec spec;
    double alpha = 0.0;
    bool degenerate = false;  // parameters violated a eps < q; nodes are uniform

    int n() const { return static_cast<int>(nodes.size()) - 1; }
};

Mesh build_mesh(const MeshSpec& spec);
// Mesh from an explicit sorted node list (spec.family is set to Uniform, spec.n to size-1).
Mesh mesh_from_nodes(std::vector<double> nodes, double eps = 1.0);

// Percentage of nodes in [0, eps] U [1 - eps, 1], relative to the interval count n.
double layer_fraction(const Mesh& mesh, double eps);

// Plain-text listing: header "# family n eps a q gamma0" then one node per line.
std::string export_mesh(const Mesh& mesh);

}  // namespace spgrid
