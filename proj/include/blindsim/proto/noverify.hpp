#pragma once

#include "blindsim/proto/verify.hpp"

namespace blindsim::proto {

// The verification-free variant: Bob prepares the agreed resource state and
// streams it; Alice consumes it with her measurement program and keeps the
// unmeasured output wires.
struct NoVerifySystem {
    mbqc::GraphSpec graph;
    mbqc::MeasurementPattern pattern; // steps in arrival (vertex) order
    linalg::CMatrix realized_unitary; // on output wires, |+> inputs
    InputMode input_mode = InputMode::Folded;
    std::vector<double> wire_angles;  // teleport mode only (single wire)

    static NoVerifySystem from_wire(const std::vector<double>& angles, InputMode mode);
    static NoVerifySystem from_program(const mbqc::CompiledProgram& prog);

    int n() const { return graph.vertex_count; }
    int d1_qubits() const { return input_mode == InputMode::Teleport ? 1 : 0; }
    int out_qubits() const { return static_cast<int>(pattern.outputs.size()); }
    void validate() const;
};

struct BobImplementation {
    mbqc::GraphSpec graph;
    std::optional<linalg::StateVector> state_override; // a dishonest resource

    linalg::StateVector resource_state() const;
};

BobImplementation bob_honest_noverify(const mbqc::GraphSpec& graph);

struct NoVerifyRunResult {
    linalg::DensityOperator rho_out;
    Transcript transcript;
    mbqc::ByproductFrame frame;
};

NoVerifyRunResult run_noverify(const NoVerifySystem& sys, const BobImplementation& bob,
                               const DeviceBehavior& device, std::uint64_t seed,
                               const VerifyRunOptions& opts = {});

// Channel semantics: joint input on [D1?][resource register][D3]; the output
// lives on [output wires][D3]. This is the map pi_A R with the resource port
// open; honest composition closes it with the agreed cluster state.
linalg::CMatrix noverify_apply(const NoVerifySystem& sys, const DeviceBehavior& device,
                               const linalg::CMatrix& joint_in, int d3_qubits);

// The exact program action on the reference input, layout [out][D3].
linalg::CMatrix noverify_ideal_reference(const NoVerifySystem& sys, const linalg::CMatrix& d1_d3_in,
                                         int d3_qubits);

} // namespace blindsim::proto
