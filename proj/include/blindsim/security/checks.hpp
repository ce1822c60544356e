#pragma once

#include "blindsim/security/systems.hpp"

#include <string>
#include <vector>

namespace blindsim::security {

// Joint state prepared by the distinguisher: D1 feeds the input port, D2 the
// resource port (when open), D3 is retained.
struct DistinguisherConfig {
    int d1_qubits = 0;
    int d2_qubits = 0;
    int d3_qubits = 0;
    linalg::CMatrix joint; // on [D1][D2][D3]

    void validate() const;
};

// --- correctness (honest Bob) -----------------------------------------------

struct CorrectnessResult {
    linalg::DistanceReport channel_report; // probe-searched channel distance
    double worst_input_distance = 0.0;     // max over the sampled input family (half norm)
    int inputs = 0;
};

CorrectnessResult check_correctness(const proto::VerifySystem& sys, const proto::DeviceBehavior& device,
                                    int n_inputs, std::uint64_t seed);
CorrectnessResult check_correctness(const proto::NoVerifySystem& sys, const proto::DeviceBehavior& device,
                                    int n_inputs, std::uint64_t seed);

// --- blindness (verification-free variant) ----------------------------------

struct BlindnessResult {
    double worst_distance = 0.0; // half trace norm over the adversarial family
    linalg::DistanceReport channel_report;
    int states_tested = 0;
};

// Distance between pi_A R and S sigma over sampled adversarial resource states
// (probe-entangled ones included) for the given device behaviors.
BlindnessResult check_blindness_noverify(const proto::NoVerifySystem& sys,
                                         const std::vector<proto::DeviceBehavior>& devices, int n_states,
                                         std::uint64_t seed);

// --- flagged-output decomposition --------------------------------------------

struct FlaggedOutputDecomposition {
    double alpha = 0.0;
    double delta = 0.0;
    linalg::CMatrix eta;          // normalized reject branch (empty when alpha=0)
    linalg::CMatrix eta_error;    // normalized accepted residual (empty when delta=0)
    linalg::CMatrix ideal_branch; // the reference component
    double reconstruction_error = 0.0;
    double residual_min_eigenvalue = 0.0;
};

// Splits a flagged output (flag = last qubit) into the reject branch, the
// ideal accepted component and the accepted residual. The reference component
// must be a normalized pure state.
FlaggedOutputDecomposition decompose_flagged_output(const linalg::CMatrix& rho_flagged,
                                                    const linalg::CMatrix& ideal_branch);

// --- verification security ----------------------------------------------------

struct SecurityCheckRow {
    std::string strategy;
    std::string device;
    double delta = 0.0;          // independently brute-forced
    double worst_distance = 0.0; // raw trace norm, real vs ideal
    double bound = 0.0;          // 2*delta + 1e-6 (exact 1e-9 when w != 0)
    bool pass = false;
};

std::vector<SecurityCheckRow> check_security_verify(const proto::VerifySystem& sys,
                                                    const std::vector<adversary::AdversaryStrategy>& strategies,
                                                    const std::vector<proto::DeviceBehavior>& devices,
                                                    int inputs_per_strategy, std::uint64_t seed);

} // namespace blindsim::security
