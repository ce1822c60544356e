#include "blindsim/security/checks.hpp"

#include "blindsim/linalg/qubit_ops.hpp"
#include "blindsim/util/random.hpp"

#include <Eigen/Eigenvalues>
#include <random>
#include <stdexcept>

namespace blindsim::security {

using linalg::CMatrix;
using linalg::CVector;
using linalg::DistanceReport;

namespace {

CVector random_pure(Eigen::Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CVector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = linalg::Complex(g(rng), g(rng));
    v.normalize();
    return v;
}

} // namespace

void DistinguisherConfig::validate() const {
    const Eigen::Index dim = Eigen::Index{1} << (d1_qubits + d2_qubits + d3_qubits);
    if (joint.rows() != dim || joint.cols() != dim)
        throw std::invalid_argument("distinguisher state has the wrong dimension");
}

// ---------------------------------------------------------------------------
// correctness
// ---------------------------------------------------------------------------

CorrectnessResult check_correctness(const proto::VerifySystem& sys, const proto::DeviceBehavior& device,
                                    int n_inputs, std::uint64_t seed) {
    const auto real = build_real_system(sys, device);
    const auto ideal = build_ideal_system(sys, device);
    CorrectnessResult res;
    res.channel_report = linalg::channel_distance(real, ideal, real.dim_in(), seed);

    std::mt19937_64 rng(seed);
    const int d1 = sys.d1_qubits();
    for (int k = 0; k < n_inputs; ++k) {
        const int d3 = d1 > 0 ? 1 : 0;
        const Eigen::Index dim = Eigen::Index{1} << (d1 + d3);
        const CVector probe = random_pure(dim, rng);
        const auto out = proto::verify_apply(sys, proto::AttackModel::identity(), device,
                                             CMatrix(probe * probe.adjoint()), d3);
        const double dist = linalg::trace_norm_distance(out.real, out.ideal).half_trace_distance;
        res.worst_input_distance = std::max(res.worst_input_distance, dist);
        ++res.inputs;
    }
    return res;
}

CorrectnessResult check_correctness(const proto::NoVerifySystem& sys, const proto::DeviceBehavior& device,
                                    int n_inputs, std::uint64_t seed) {
    const auto real = build_real_system(sys, device);
    const auto ideal = build_ideal_system(sys, device);
    CorrectnessResult res;
    res.channel_report = linalg::channel_distance(real, ideal, real.dim_in(), seed);

    const NoVerifyIdeal ideal_obj(sys, device, 0);
    const linalg::StateVector cluster = mbqc::build_cluster(sys.graph);
    const CMatrix cluster_rho = cluster.amplitudes() * cluster.amplitudes().adjoint();
    std::mt19937_64 rng(seed);
    const int d1 = sys.d1_qubits();
    for (int k = 0; k < n_inputs; ++k) {
        const int d3 = d1 > 0 ? 1 : 0;
        const Eigen::Index dim = Eigen::Index{1} << (d1 + d3);
        const CVector probe = random_pure(dim, rng);
        const CMatrix in = probe * probe.adjoint();
        // real path: honest Bob closes the port
        CMatrix joint = linalg::kron(in, cluster_rho); // [D1][D3][reg]
        const int n_tot = d1 + d3 + sys.n();
        std::vector<int> perm;
        for (int i = 0; i < d1; ++i) perm.push_back(i);
        for (int i = 0; i < sys.n(); ++i) perm.push_back(d1 + d3 + i);
        for (int i = 0; i < d3; ++i) perm.push_back(d1 + i);
        joint = linalg::permute_qubits(joint, n_tot, perm);
        const CMatrix real_out = proto::noverify_apply(sys, device, joint, d3);
        const CMatrix ideal_out = ideal_obj.apply_honest(in, d3);
        const double dist = linalg::trace_norm_distance(real_out, ideal_out).half_trace_distance;
        res.worst_input_distance = std::max(res.worst_input_distance, dist);
        ++res.inputs;
    }
    return res;
}

// ---------------------------------------------------------------------------
// blindness
// ---------------------------------------------------------------------------

BlindnessResult check_blindness_noverify(const proto::NoVerifySystem& sys,
                                         const std::vector<proto::DeviceBehavior>& devices, int n_states,
                                         std::uint64_t seed) {
    BlindnessResult res;
    std::mt19937_64 rng(seed);
    const int d1 = sys.d1_qubits();
    const int reg = sys.n();

    for (int k = 0; k < n_states; ++k) {
        // adversarial resource states; every third one entangled with a probe
        const int d3 = (k % 3 == 0) ? 1 : 0;
        const Eigen::Index dim = Eigen::Index{1} << (d1 + reg + d3);
        CMatrix joint;
        if (k % 5 == 1) {
            // honest instance through the open port
            const linalg::StateVector cluster = mbqc::build_cluster(sys.graph);
            CMatrix base = cluster.amplitudes() * cluster.amplitudes().adjoint();
            if (d1 > 0) base = linalg::kron(CMatrix(0.5 * CMatrix::Identity(2, 2)), base);
            if (d3 > 0) base = linalg::kron(base, CMatrix(0.5 * CMatrix::Identity(2, 2)));
            joint = base;
        } else {
            const CVector probe = random_pure(dim, rng);
            joint = probe * probe.adjoint();
        }
        for (const auto& device : devices) {
            const CMatrix real_out = proto::noverify_apply(sys, device, joint, d3);
            const NoVerifyIdeal ideal(sys, device, 1);
            const SimulatorSigma sigma;
            const CMatrix ideal_out = ideal.apply_forwarded(sigma.forward(joint), d3);
            const double dist = linalg::trace_norm_distance(real_out, ideal_out).half_trace_distance;
            res.worst_distance = std::max(res.worst_distance, dist);
        }
        ++res.states_tested;
    }

    // channel-level comparison with an entangled-probe search (small probe)
    if (d1 + reg <= 7) {
        const auto& device = devices.empty() ? proto::DeviceBehavior::honest_device() : devices.front();
        const auto real_ch = build_real_system_open(sys, device);
        const auto ideal_ch = build_ideal_system_open(sys, device);
        res.channel_report = linalg::channel_distance(real_ch, ideal_ch, 4, seed);
    }
    return res;
}

// ---------------------------------------------------------------------------
// flagged-output decomposition
// ---------------------------------------------------------------------------

FlaggedOutputDecomposition decompose_flagged_output(const CMatrix& rho_flagged,
                                                    const CMatrix& ideal_branch) {
    const int n_tot = linalg::log2_dim(rho_flagged.rows());
    const int flag = n_tot - 1;
    CVector e0 = CVector::Zero(2), e1 = CVector::Zero(2);
    e0(0) = 1.0;
    e1(1) = 1.0;
    const CMatrix reject = linalg::project_out_qubit(rho_flagged, n_tot, flag, e1);
    const CMatrix accept = linalg::project_out_qubit(rho_flagged, n_tot, flag, e0);
    if (ideal_branch.rows() != accept.rows())
        throw std::invalid_argument("reference component has the wrong dimension");
    // the reference must be a normalized pure state
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (ideal_branch + ideal_branch.adjoint()));
    const auto& evals = es.eigenvalues();
    if (std::abs(evals.maxCoeff() - 1.0) > 1e-9 || evals.cwiseAbs().sum() > 1.0 + 1e-9)
        throw std::invalid_argument("reference component must be a normalized pure state");
    const CVector v = es.eigenvectors().col(evals.size() - 1);

    FlaggedOutputDecomposition dec;
    dec.ideal_branch = ideal_branch;
    dec.alpha = reject.trace().real();
    if (dec.alpha > 1e-13) dec.eta = reject / dec.alpha;

    const double overlap = (v.adjoint() * accept * v).value().real();
    const CMatrix residual = accept - overlap * ideal_branch;
    dec.delta = residual.trace().real();
    Eigen::SelfAdjointEigenSolver<CMatrix> er(0.5 * (residual + residual.adjoint()), Eigen::EigenvaluesOnly);
    dec.residual_min_eigenvalue = er.eigenvalues().minCoeff();
    if (dec.residual_min_eigenvalue < -1e-6)
        throw std::invalid_argument("negative residual weight: the flagged output does not follow the model");
    if (dec.delta > 1e-13) dec.eta_error = residual / dec.delta;

    // reconstruction check
    CMatrix rebuilt = CMatrix::Zero(rho_flagged.rows(), rho_flagged.cols());
    auto with_flag = [&](const CMatrix& body, int e) {
        const int nb = linalg::log2_dim(body.rows());
        return linalg::insert_qubit(body, nb, nb, e == 0 ? e0 : e1);
    };
    if (dec.alpha > 1e-13) rebuilt += dec.alpha * with_flag(dec.eta, 1);
    if (dec.delta > 1e-13) rebuilt += dec.delta * with_flag(dec.eta_error, 0);
    rebuilt += overlap * with_flag(ideal_branch, 0);
    dec.reconstruction_error = linalg::trace_norm(rebuilt - rho_flagged);
    return dec;
}

// ---------------------------------------------------------------------------
// verification security (the 2-delta bound)
// ---------------------------------------------------------------------------

std::vector<SecurityCheckRow> check_security_verify(const proto::VerifySystem& sys,
                                                    const std::vector<adversary::AdversaryStrategy>& strategies,
                                                    const std::vector<proto::DeviceBehavior>& devices,
                                                    int inputs_per_strategy, std::uint64_t seed) {
    std::vector<SecurityCheckRow> rows;
    std::mt19937_64 rng(seed);
    const int d1 = sys.d1_qubits();

    for (const auto& strategy : strategies) {
        if (!strategy.applicable(sys.n, sys.program.input_mode)) continue;
        const double delta = adversary::delta_for_strategy(strategy, sys);

        for (const auto& device : devices) {
            SecurityCheckRow row;
            row.strategy = strategy.name;
            row.device = device.w;
            row.delta = delta;
            row.bound = device.honest() ? 2.0 * delta + 1e-6 : 1e-9;

            for (int k = 0; k < inputs_per_strategy; ++k) {
                double dist = 0.0;
                if (strategy.kind == adversary::AdversaryStrategy::Kind::WrongResource) {
                    const auto reg_state = adversary::wrong_resource_state(strategy, sys);
                    CMatrix joint = reg_state.amplitudes() * reg_state.amplitudes().adjoint();
                    const auto out = proto::verify_apply_open(sys, device, joint, 0);
                    dist = linalg::trace_norm_distance(out.real, out.ideal).raw_trace_norm;
                } else {
                    const int d3 = 1;
                    const Eigen::Index dim = Eigen::Index{1} << (d1 + d3);
                    CMatrix joint;
                    if (k == 0 && d1 == 1) {
                        CVector bell(4);
                        bell << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
                        joint = bell * bell.adjoint();
                    } else {
                        const CVector probe = random_pure(dim, rng);
                        joint = probe * probe.adjoint();
                    }
                    const auto out = proto::verify_apply(sys, strategy.attack_model(sys.n), device, joint, d3);
                    dist = linalg::trace_norm_distance(out.real, out.ideal).raw_trace_norm;
                }
                row.worst_distance = std::max(row.worst_distance, dist);
            }
            row.pass = row.worst_distance <= row.bound;
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace blindsim::security
