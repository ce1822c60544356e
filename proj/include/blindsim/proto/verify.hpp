#pragma once

#include "blindsim/linalg/distance.hpp"
#include "blindsim/mbqc/pattern.hpp"
#include "blindsim/proto/attack.hpp"
#include "blindsim/proto/device.hpp"
#include "blindsim/proto/phase1.hpp"
#include "blindsim/proto/transcript.hpp"

#include <cstdint>
#include <optional>

namespace blindsim::proto {

enum class InputMode { Folded, Teleport };

// A linear-wire computation on the resource qubits: wire length N/3, slots
// 0..L-1 measured at the given angles, last slot kept as the output. In
// Teleport mode the slot-0 measurement becomes an entangled two-qubit
// measurement with the held input qubit and realizes the same rotation.
struct WireProgram {
    std::vector<double> angles;
    InputMode input_mode = InputMode::Folded;

    int wire_length() const { return static_cast<int>(angles.size()) + 1; }
    linalg::CMatrix realized_unitary() const; // product of J(angle) factors
    std::string description() const;
    void validate(int resource_qubits) const;
};

struct VerifySystem {
    int n = 3; // positions; resource graph has n/3 vertices
    mbqc::GraphSpec g_graph;
    WireProgram program;

    static VerifySystem make(int n, const WireProgram& program); // path-shaped resource graph
    int d1_qubits() const { return program.input_mode == InputMode::Teleport ? 1 : 0; }
    int out_qubits() const { return 1; }
    void validate() const;
};

// --- full protocol run (sampled or forced outcomes) ------------------------

struct VerifyRunResult {
    linalg::DensityOperator rho_out;
    int flag = 0; // e
    Transcript transcript;
    PermutationTag tag;
    mbqc::ByproductFrame q;
};

// Honest-resource run over the one-way channel; `attack` deviates on the
// prepared qubits before they are sent. The input register for Teleport mode
// is a pure state supplied in `input_state` (defaults to |+>).
struct VerifyRunOptions {
    std::optional<PermutationTag> tag;
    std::optional<linalg::CVector> input_state;
    mbqc::OutcomeSource* outcomes = nullptr; // overrides the seeded source
};

VerifyRunResult run_verify(const VerifySystem& sys, const AttackModel& attack,
                           const DeviceBehavior& device, std::uint64_t seed,
                           const VerifyRunOptions& opts = {});

// --- channel semantics ------------------------------------------------------

// Output layout: [out wires][D3][flag qubit]; flag |0> = accept.
struct VerifyOutputs {
    linalg::CMatrix real;
    linalg::CMatrix ideal;   // ideal functionality composed with the simulator
    double alpha = 0.0;      // reject weight of the real output
    double delta_exact = 0.0; // accepted-but-wrong weight (branch-resolved)
};

// Applies the real system pi_A R (with the strategy closing the resource port)
// and the matching ideal system S sigma to one joint input on [D1?][D3].
// Averages over the secret permutation exactly.
VerifyOutputs verify_apply(const VerifySystem& sys, const AttackModel& attack,
                           const DeviceBehavior& device, const linalg::CMatrix& joint_in,
                           int d3_qubits);

// Open-resource-port form: joint input on [D1?][resource register][D3] in
// ResourceLayout::register_order(). Feasible at small N only.
VerifyOutputs verify_apply_open(const VerifySystem& sys, const DeviceBehavior& device,
                                const linalg::CMatrix& joint_in, int d3_qubits);

// Honest resource register state in register_order (small N only).
linalg::StateVector honest_resource_state(const VerifySystem& sys);

// The exact ideal output for reference inputs.
linalg::CMatrix verify_ideal_reference(const VerifySystem& sys, const linalg::CMatrix& joint_in,
                                       int d3_qubits);

} // namespace blindsim::proto
