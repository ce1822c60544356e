#pragma once

#include "blindsim/linalg/types.hpp"
#include "blindsim/mbqc/graph.hpp"

#include <string>
#include <vector>

namespace blindsim::mbqc {

enum class BasisKind { XY, PauliX, PauliZ };

struct MeasBasis {
    BasisKind kind = BasisKind::XY;
    double angle = 0.0; // only for XY

    static MeasBasis xy(double angle) { return {BasisKind::XY, angle}; }
    static MeasBasis x() { return {BasisKind::PauliX, 0.0}; }
    static MeasBasis z() { return {BasisKind::PauliZ, 0.0}; }
};

// One adaptive measurement. The realized angle is
//   (-1)^(sum of s_domain outcomes) * angle + pi * (sum of t_domain outcomes).
struct PatternStep {
    int vertex = 0;
    MeasBasis basis;
    std::vector<int> s_domain; // vertices measured strictly earlier
    std::vector<int> t_domain;
};

// Output wire with its byproduct dependencies: x = XOR of x_domain outcomes,
// z = XOR of z_domain outcomes.
struct PatternOutput {
    int vertex = 0;
    std::vector<int> x_domain;
    std::vector<int> z_domain;
};

struct MeasurementPattern {
    std::vector<PatternStep> steps;
    std::vector<PatternOutput> outputs;

    void validate(const GraphSpec& graph) const;

    std::string to_json() const;
    static MeasurementPattern from_json(const std::string& text);
};

// Byproduct record sigma_q = tensor of X^x_j Z^z_j over the frame's sites.
struct ByproductFrame {
    std::vector<int> x;
    std::vector<int> z;

    int sites() const { return static_cast<int>(x.size()); }
    // q = (x_1..x_N, z_1..z_N)
    std::vector<int> q_bits() const;
    static ByproductFrame zero(int n) { return {std::vector<int>(n, 0), std::vector<int>(n, 0)}; }
};

// A compiled program: graph + pattern + the unitary it realizes on the output
// wires after byproduct correction (inputs start as |+>).
struct CompiledProgram {
    GraphSpec graph;
    MeasurementPattern pattern;
    linalg::CMatrix realized_unitary; // acts on output wires in listed order
};

// Single wire of rotations: vertices 0..k, measure j with angle angles[j],
// realizes J(angles[k-1]) ... J(angles[0]) with J(t) = H diag(1, e^{-it}).
CompiledProgram compile_rotation_chain(const std::vector<double>& angles);

// 2x2 box: two wires with an output-side rung; realizes CZ (J(ta) (x) J(tb)).
CompiledProgram compile_entangling_block(double theta_a, double theta_b);

// The J(theta) = H P(-theta) single-qubit building block.
linalg::CMatrix j_gate(double theta);

} // namespace blindsim::mbqc
