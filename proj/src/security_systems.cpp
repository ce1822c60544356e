#include "blindsim/security/systems.hpp"

#include "blindsim/linalg/qubit_ops.hpp"

#include <stdexcept>

namespace blindsim::security {

using linalg::CMatrix;
using linalg::CVector;
using linalg::KrausChannel;

namespace {

CVector flag_ket(int e) {
    CVector v = CVector::Zero(2);
    v(e) = 1.0;
    return v;
}

} // namespace

CMatrix NoVerifyIdeal::apply_honest(const CMatrix& joint_in, int d3_qubits) const {
    if (f_ != 0) throw std::invalid_argument("honest application requires f=0");
    // S simulates pi_A inside and substitutes the agreed resource state.
    const linalg::StateVector cluster = mbqc::build_cluster(system_.graph);
    const int d1 = system_.d1_qubits();
    CMatrix joint = linalg::kron(joint_in, CMatrix(cluster.amplitudes() * cluster.amplitudes().adjoint()));
    // [D1][D3][reg] -> [D1][reg][D3]
    const int n_tot = d1 + d3_qubits + system_.n();
    std::vector<int> perm;
    for (int i = 0; i < d1; ++i) perm.push_back(i);
    for (int i = 0; i < system_.n(); ++i) perm.push_back(d1 + d3_qubits + i);
    for (int i = 0; i < d3_qubits; ++i) perm.push_back(d1 + i);
    joint = linalg::permute_qubits(joint, n_tot, perm);
    return proto::noverify_apply(system_, device_, joint, d3_qubits);
}

CMatrix NoVerifyIdeal::apply_forwarded(const CMatrix& joint_in, int d3_qubits) const {
    if (f_ != 1) throw std::invalid_argument("the filtered port is absent when f=0");
    return proto::noverify_apply(system_, device_, joint_in, d3_qubits);
}

CMatrix VerifyIdeal::apply_honest(const CMatrix& joint_in, int d3_qubits) const {
    if (f_ != 0) throw std::invalid_argument("honest application requires f=0");
    return proto::verify_apply(system_, proto::AttackModel::identity(), device_, joint_in, d3_qubits).ideal;
}

CMatrix VerifyIdeal::apply_strategy(const proto::AttackModel& attack, const CMatrix& joint_in,
                                    int d3_qubits) const {
    if (f_ != 1) throw std::invalid_argument("strategy application goes through the simulator (f=1)");
    return proto::verify_apply(system_, attack, device_, joint_in, d3_qubits).ideal;
}

CMatrix VerifyIdeal::apply_forwarded(const CMatrix& joint_in, int d3_qubits) const {
    if (f_ != 1) throw std::invalid_argument("the filtered port is absent when f=0");
    return proto::verify_apply_open(system_, device_, joint_in, d3_qubits).ideal;
}

KrausChannel channel_from_applier(Eigen::Index dim_in, Eigen::Index dim_out,
                                  const std::function<CMatrix(const CMatrix&)>& apply) {
    if (dim_in * dim_out > (Eigen::Index{1} << 12))
        throw std::invalid_argument("channel dimension exceeds the assembly cap");
    CMatrix choi = CMatrix::Zero(dim_in * dim_out, dim_in * dim_out);
    for (Eigen::Index i = 0; i < dim_in; ++i)
        for (Eigen::Index j = 0; j < dim_in; ++j) {
            CMatrix unit = CMatrix::Zero(dim_in, dim_in);
            unit(i, j) = 1.0;
            choi.block(i * dim_out, j * dim_out, dim_out, dim_out) = apply(unit);
        }
    return KrausChannel::from_choi(choi, dim_in, dim_out, 1e-11);
}

KrausChannel build_real_system(const proto::VerifySystem& sys, const proto::DeviceBehavior& device) {
    const Eigen::Index din = Eigen::Index{1} << sys.d1_qubits();
    const Eigen::Index dout = 4; // [out][flag]
    return channel_from_applier(din, dout, [&](const CMatrix& rho) {
        return proto::verify_apply(sys, proto::AttackModel::identity(), device, rho, 0).real;
    });
}

KrausChannel build_real_system(const proto::NoVerifySystem& sys, const proto::DeviceBehavior& device) {
    const Eigen::Index din = Eigen::Index{1} << sys.d1_qubits();
    const Eigen::Index dout = Eigen::Index{1} << sys.out_qubits();
    const linalg::StateVector cluster = mbqc::build_cluster(sys.graph);
    const CMatrix cluster_rho = cluster.amplitudes() * cluster.amplitudes().adjoint();
    const int d1 = sys.d1_qubits();
    return channel_from_applier(din, dout, [&](const CMatrix& rho) {
        CMatrix joint = linalg::kron(rho, cluster_rho); // [D1][reg]
        (void)d1;
        return proto::noverify_apply(sys, device, joint, 0);
    });
}

KrausChannel build_real_system_open(const proto::NoVerifySystem& sys, const proto::DeviceBehavior& device) {
    const Eigen::Index din = Eigen::Index{1} << (sys.d1_qubits() + sys.n());
    const Eigen::Index dout = Eigen::Index{1} << sys.out_qubits();
    return channel_from_applier(din, dout,
                                [&](const CMatrix& rho) { return proto::noverify_apply(sys, device, rho, 0); });
}

KrausChannel build_real_system_open(const proto::VerifySystem& sys, const proto::DeviceBehavior& device) {
    const proto::ResourceLayout layout = proto::resource_layout(sys.n, sys.g_graph);
    const Eigen::Index din = Eigen::Index{1} << layout.register_order().size();
    return channel_from_applier(din, 4, [&](const CMatrix& rho) {
        return proto::verify_apply_open(sys, device, rho, 0).real;
    });
}

KrausChannel build_ideal_system(const proto::VerifySystem& sys, const proto::DeviceBehavior& device) {
    if (device.honest()) {
        // S_{f=0}: always accepts and emits the exact program action
        const CMatrix u = sys.program.realized_unitary();
        const CVector e0 = flag_ket(0);
        if (sys.program.input_mode == proto::InputMode::Teleport) {
            CMatrix k = linalg::kron(u, CMatrix(e0)); // (4x2): |psi> -> U|psi> (x) |e0>
            return KrausChannel({k});
        }
        CVector plus(2);
        plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
        const CVector out = linalg::kron(CVector(u * plus), e0);
        return KrausChannel({CMatrix(out)});
    }
    const VerifyIdeal ideal(sys, device, 0);
    const Eigen::Index din = Eigen::Index{1} << sys.d1_qubits();
    return channel_from_applier(din, 4, [&](const CMatrix& rho) { return ideal.apply_honest(rho, 0); });
}

KrausChannel build_ideal_system(const proto::NoVerifySystem& sys, const proto::DeviceBehavior& device) {
    const NoVerifyIdeal ideal(sys, device, 0);
    const Eigen::Index din = Eigen::Index{1} << sys.d1_qubits();
    const Eigen::Index dout = Eigen::Index{1} << sys.out_qubits();
    return channel_from_applier(din, dout, [&](const CMatrix& rho) { return ideal.apply_honest(rho, 0); });
}

KrausChannel build_ideal_system_open(const proto::NoVerifySystem& sys, const proto::DeviceBehavior& device) {
    const NoVerifyIdeal ideal(sys, device, 1);
    const SimulatorSigma sigma;
    const Eigen::Index din = Eigen::Index{1} << (sys.d1_qubits() + sys.n());
    const Eigen::Index dout = Eigen::Index{1} << sys.out_qubits();
    return channel_from_applier(din, dout, [&](const CMatrix& rho) {
        return ideal.apply_forwarded(sigma.forward(rho), 0);
    });
}

KrausChannel build_ideal_system_open(const proto::VerifySystem& sys, const proto::DeviceBehavior& device) {
    const VerifyIdeal ideal(sys, device, 1);
    const SimulatorSigma sigma;
    const proto::ResourceLayout layout = proto::resource_layout(sys.n, sys.g_graph);
    const Eigen::Index din = Eigen::Index{1} << layout.register_order().size();
    return channel_from_applier(din, 4, [&](const CMatrix& rho) {
        return ideal.apply_forwarded(sigma.forward(rho), 0);
    });
}

} // namespace blindsim::security
