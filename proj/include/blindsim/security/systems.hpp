#pragma once

#include "blindsim/adversary/strategy.hpp"
#include "blindsim/linalg/distance.hpp"
#include "blindsim/proto/noverify.hpp"
#include "blindsim/proto/verify.hpp"

#include <optional>

namespace blindsim::security {

// Simulator attached to the ideal functionality's adversarial interface: it
// sets f=1 and forwards the adversarial state unmodified.
struct SimulatorSigma {
    int f = 1;
    linalg::CMatrix forward(const linalg::CMatrix& adversarial_state) const { return adversarial_state; }
};

// Ideal functionality for the verification-free variant. The filtered port is
// structurally absent when f=0: the honest resource is substituted inside.
class NoVerifyIdeal {
public:
    NoVerifyIdeal(proto::NoVerifySystem system, proto::DeviceBehavior device, int f)
        : system_(std::move(system)), device_(std::move(device)), f_(f) {}

    int f() const { return f_; }

    // f=0: no adversarial argument exists. Input layout [D1?][D3].
    linalg::CMatrix apply_honest(const linalg::CMatrix& joint_in, int d3_qubits) const;
    // f=1 (composed with sigma): the forwarded state closes the resource port.
    // Input layout [D1?][register][D3].
    linalg::CMatrix apply_forwarded(const linalg::CMatrix& joint_in, int d3_qubits) const;

private:
    proto::NoVerifySystem system_;
    proto::DeviceBehavior device_;
    int f_ = 0;
};

class VerifyIdeal {
public:
    VerifyIdeal(proto::VerifySystem system, proto::DeviceBehavior device, int f)
        : system_(std::move(system)), device_(std::move(device)), f_(f) {}

    int f() const { return f_; }

    linalg::CMatrix apply_honest(const linalg::CMatrix& joint_in, int d3_qubits) const;
    // strategy-closed adversarial port (the forwarded state is produced by the
    // strategy's deviation on the honest preparation)
    linalg::CMatrix apply_strategy(const proto::AttackModel& attack, const linalg::CMatrix& joint_in,
                                   int d3_qubits) const;
    // explicitly forwarded register state (small N)
    linalg::CMatrix apply_forwarded(const linalg::CMatrix& joint_in, int d3_qubits) const;

private:
    proto::VerifySystem system_;
    proto::DeviceBehavior device_;
    int f_ = 0;
};

// --- channel assembly -------------------------------------------------------

// Builds a KrausChannel from any linear matrix-to-matrix applier via its Choi
// matrix (feeds matrix units; dims must be desk-scale).
linalg::KrausChannel channel_from_applier(Eigen::Index dim_in, Eigen::Index dim_out,
                                          const std::function<linalg::CMatrix(const linalg::CMatrix&)>& apply);

// pi_A R pi_B with honest Bob; input [D1?], output [out][flag] / [out].
linalg::KrausChannel build_real_system(const proto::VerifySystem& sys, const proto::DeviceBehavior& device);
linalg::KrausChannel build_real_system(const proto::NoVerifySystem& sys, const proto::DeviceBehavior& device);
// pi_A R with the resource port open; input [D1?][register].
linalg::KrausChannel build_real_system_open(const proto::NoVerifySystem& sys,
                                            const proto::DeviceBehavior& device);
linalg::KrausChannel build_real_system_open(const proto::VerifySystem& sys,
                                            const proto::DeviceBehavior& device);

// S_{f=0} (honest substitution) and S sigma (forwarded port).
linalg::KrausChannel build_ideal_system(const proto::VerifySystem& sys, const proto::DeviceBehavior& device);
linalg::KrausChannel build_ideal_system(const proto::NoVerifySystem& sys, const proto::DeviceBehavior& device);
linalg::KrausChannel build_ideal_system_open(const proto::NoVerifySystem& sys,
                                             const proto::DeviceBehavior& device);
linalg::KrausChannel build_ideal_system_open(const proto::VerifySystem& sys,
                                             const proto::DeviceBehavior& device);

} // namespace blindsim::security
