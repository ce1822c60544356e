#include "blindsim/proto/noverify.hpp"

#include "blindsim/linalg/paulis.hpp"
#include "blindsim/linalg/qubit_ops.hpp"
#include "blindsim/mbqc/engine.hpp"
#include "blindsim/proto/one_way.hpp"
#include "blindsim/util/random.hpp"

#include <algorithm>
#include <stdexcept>

namespace blindsim::proto {

using linalg::CMatrix;
using linalg::CVector;
using linalg::DensityOperator;
using linalg::StateVector;

NoVerifySystem NoVerifySystem::from_wire(const std::vector<double>& angles, InputMode mode) {
    NoVerifySystem sys;
    const auto prog = mbqc::compile_rotation_chain(angles);
    sys.graph = prog.graph;
    sys.pattern = prog.pattern;
    sys.realized_unitary = prog.realized_unitary;
    sys.input_mode = mode;
    sys.wire_angles = angles;
    if (mode == InputMode::Teleport && angles.empty())
        throw std::invalid_argument("teleport input needs at least one measured wire slot");
    sys.validate();
    return sys;
}

NoVerifySystem NoVerifySystem::from_program(const mbqc::CompiledProgram& prog) {
    NoVerifySystem sys;
    sys.graph = prog.graph;
    sys.pattern = prog.pattern;
    sys.realized_unitary = prog.realized_unitary;
    sys.input_mode = InputMode::Folded;
    sys.validate();
    return sys;
}

void NoVerifySystem::validate() const {
    graph.validate();
    pattern.validate(graph);
    // arrival order: steps must measure vertices in increasing order and
    // outputs must be the tail of the register
    for (size_t i = 0; i + 1 < pattern.steps.size(); ++i)
        if (pattern.steps[i].vertex >= pattern.steps[i + 1].vertex)
            throw std::invalid_argument("pattern must consume qubits in arrival order");
    for (size_t i = 0; i + 1 < pattern.outputs.size(); ++i)
        if (pattern.outputs[i].vertex >= pattern.outputs[i + 1].vertex)
            throw std::invalid_argument("outputs must be listed in arrival order");
    if (input_mode == InputMode::Teleport && pattern.steps.front().vertex != 0)
        throw std::invalid_argument("teleport input consumes the first wire qubit");
}

StateVector BobImplementation::resource_state() const {
    if (state_override.has_value()) return *state_override;
    return mbqc::build_cluster(graph);
}

BobImplementation bob_honest_noverify(const mbqc::GraphSpec& graph) {
    graph.validate();
    return BobImplementation{graph, std::nullopt};
}

namespace {

constexpr double kBranchCutoff = 1e-16;

CVector zbasis_ket(int s) {
    CVector v = CVector::Zero(2);
    v(s) = 1.0;
    return v;
}

CVector teleport_ket_nv(double angle, int a, int b) {
    CVector phi = CVector::Zero(4);
    phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
    CMatrix m = linalg::phase_gate(angle) * linalg::pauli_xz(0, b) * linalg::pauli_xz(a, 0);
    return linalg::kron(m, CMatrix::Identity(2, 2)) * phi;
}

struct NvWalk {
    const NoVerifySystem* sys = nullptr;
    int d3 = 0;
    CMatrix out;

    void finish(CMatrix cur, const std::vector<int>& outcome_of, int wx, int wz) {
        const auto& pattern = sys->pattern;
        const int n_tot = linalg::log2_dim(cur.rows());
        if (sys->input_mode == InputMode::Teleport) {
            if (pattern.outputs.size() != 1) throw std::logic_error("teleport wires have one output");
            if (wx || wz) linalg::apply_1q(cur, n_tot, 0, linalg::pauli_xz(wx, wz).adjoint());
        } else {
            for (size_t k = 0; k < pattern.outputs.size(); ++k) {
                const auto& o = pattern.outputs[k];
                int x = 0, z = 0;
                for (int v : o.x_domain) x ^= outcome_of[static_cast<size_t>(v)];
                for (int v : o.z_domain) z ^= outcome_of[static_cast<size_t>(v)];
                if (x || z)
                    linalg::apply_1q(cur, n_tot, static_cast<int>(k), linalg::pauli_xz(x, z).adjoint());
            }
        }
        out += cur;
    }

    // cur: [D1 if alive][remaining register][D3]
    void walk(CMatrix cur, size_t step_idx, bool d1_alive, std::vector<int> outcome_of, int wx, int wz) {
        if (cur.cwiseAbs().maxCoeff() < kBranchCutoff) return;
        const auto& pattern = sys->pattern;
        if (step_idx == pattern.steps.size()) {
            finish(std::move(cur), outcome_of, wx, wz);
            return;
        }
        const int n_tot = linalg::log2_dim(cur.rows());
        const auto& step = pattern.steps[step_idx];
        // consumed in arrival order: the current front register qubit
        const int front = d1_alive ? 1 : 0;
        const int idx = front + step.vertex - static_cast<int>(step_idx);

        if (sys->input_mode == InputMode::Teleport) {
            const double angle = sys->wire_angles[step_idx];
            if (step_idx == 0) {
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) {
                        CMatrix branch =
                            linalg::project_out_qubit_pair(cur, n_tot, 0, idx, teleport_ket_nv(angle, a, b));
                        walk(std::move(branch), step_idx + 1, false, outcome_of, b, a);
                    }
                return;
            }
            const double physical = (wx ? -1.0 : 1.0) * angle;
            for (int s = 0; s < 2; ++s) {
                CMatrix branch = linalg::project_out_qubit(cur, n_tot, idx, mbqc::xy_basis_ket(physical, s));
                walk(std::move(branch), step_idx + 1, d1_alive, outcome_of, s ^ wz, wx);
            }
            return;
        }

        // folded: domain-adapted measurement
        mbqc::MeasBasis basis = step.basis;
        if (basis.kind == mbqc::BasisKind::XY) {
            int sflip = 0, tadd = 0;
            for (int v : step.s_domain) sflip ^= outcome_of[static_cast<size_t>(v)];
            for (int v : step.t_domain) tadd ^= outcome_of[static_cast<size_t>(v)];
            basis.angle = (sflip ? -1.0 : 1.0) * basis.angle + (tadd ? M_PI : 0.0);
        }
        for (int s = 0; s < 2; ++s) {
            CVector ket;
            switch (basis.kind) {
                case mbqc::BasisKind::XY: ket = mbqc::xy_basis_ket(basis.angle, s); break;
                case mbqc::BasisKind::PauliX: ket = mbqc::xy_basis_ket(0.0, s); break;
                case mbqc::BasisKind::PauliZ: ket = zbasis_ket(s); break;
            }
            CMatrix branch = linalg::project_out_qubit(cur, n_tot, idx, ket);
            auto next = outcome_of;
            next[static_cast<size_t>(step.vertex)] = s;
            walk(std::move(branch), step_idx + 1, d1_alive, std::move(next), wx, wz);
        }
    }
};

} // namespace

CMatrix noverify_apply(const NoVerifySystem& sys, const DeviceBehavior& device, const CMatrix& joint_in,
                       int d3_qubits) {
    sys.validate();
    const int d1 = sys.d1_qubits();
    const int reg = sys.n();
    const Eigen::Index expect = Eigen::Index{1} << (d1 + reg + d3_qubits);
    if (joint_in.rows() != expect) throw std::invalid_argument("joint input has wrong dimension");

    if (!device.honest() && device.kind == DeviceBehavior::Kind::FixedOutput) {
        std::vector<int> keep;
        for (int k = 0; k < d3_qubits; ++k) keep.push_back(d1 + reg + k);
        const CMatrix d3_part = linalg::partial_trace_qubits(joint_in, d1 + reg + d3_qubits, keep);
        return linalg::kron(device.fixed_rho, d3_part);
    }

    NvWalk w;
    w.sys = &sys;
    w.d3 = d3_qubits;
    const Eigen::Index out_dim = Eigen::Index{1} << (sys.out_qubits() + d3_qubits);
    w.out = CMatrix::Zero(out_dim, out_dim);
    w.walk(joint_in, 0, d1 == 1, std::vector<int>(static_cast<size_t>(reg), 0), 0, 0);

    CMatrix out = w.out;
    if (!device.honest() && device.kind == DeviceBehavior::Kind::NoisyHonest) {
        const int n_tot = sys.out_qubits() + d3_qubits;
        for (int q = 0; q < sys.out_qubits(); ++q) {
            CMatrix acc = (1.0 - device.noise) * out;
            for (auto p : {linalg::Pauli::X, linalg::Pauli::Y, linalg::Pauli::Z}) {
                CMatrix t = out;
                linalg::apply_1q(t, n_tot, q, linalg::pauli_matrix(p));
                acc += (device.noise / 3.0) * t;
            }
            out = acc;
        }
    }
    return out;
}

CMatrix noverify_ideal_reference(const NoVerifySystem& sys, const CMatrix& d1_d3_in, int d3_qubits) {
    if (sys.input_mode == InputMode::Teleport) {
        CMatrix out = d1_d3_in;
        linalg::apply_1q(out, 1 + d3_qubits, 0, sys.realized_unitary);
        return out;
    }
    const int k = sys.out_qubits();
    const CVector plus = StateVector::plus(k).amplitudes();
    const CVector ideal = sys.realized_unitary * plus;
    return linalg::kron(CMatrix(ideal * ideal.adjoint()), d1_d3_in);
}

NoVerifyRunResult run_noverify(const NoVerifySystem& sys, const BobImplementation& bob,
                               const DeviceBehavior& device, std::uint64_t seed,
                               const VerifyRunOptions& opts) {
    sys.validate();
    if (bob.graph.vertex_count != sys.n()) throw std::invalid_argument("Bob sends the wrong qubit count");

    mbqc::RandomOutcomeSource seeded(util::split_seed(seed, 0));
    mbqc::OutcomeSource& src = opts.outcomes != nullptr ? *opts.outcomes : seeded;

    Transcript tr;
    tr.protocol_variant = "noverify";
    tr.seed = seed;

    OneWayChannel wire;
    auto bob_end = wire.bob_end();
    auto alice_end = wire.alice_end();

    const StateVector resource = bob.resource_state();
    CVector cur = resource.amplitudes();
    int n_live = sys.n();
    bool d1_alive = false;
    if (sys.input_mode == InputMode::Teleport) {
        CVector plus(2);
        plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
        cur = linalg::kron(CVector(opts.input_state.value_or(plus)), cur);
        ++n_live;
        d1_alive = true;
    }

    std::vector<int> outcome_of(static_cast<size_t>(sys.n()), 0);
    int wx = 0, wz = 0;
    size_t step_idx = 0;
    for (int v = 0; v < sys.n(); ++v) {
        bob_end.send(v);
        tr.add("bob", "send_qubit", "vertex:" + std::to_string(v), false);
        alice_end.receive();
        const bool is_step = step_idx < sys.pattern.steps.size() &&
                             sys.pattern.steps[step_idx].vertex == v;
        if (!is_step) {
            tr.add("alice", "keep", "vertex:" + std::to_string(v), true);
            continue;
        }
        const int front = d1_alive ? 1 : 0;
        const int idx = front + v - static_cast<int>(step_idx);
        if (sys.input_mode == InputMode::Teleport && step_idx == 0) {
            std::vector<double> probs;
            std::vector<CVector> posts;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    CVector branch = linalg::project_out_qubit_pair(
                        cur, n_live, 0, idx, teleport_ket_nv(sys.wire_angles[0], a, b));
                    probs.push_back(branch.squaredNorm());
                    posts.push_back(std::move(branch));
                }
            std::mt19937_64 rng(util::split_seed(seed, 100 + static_cast<std::uint64_t>(v)));
            double u = util::uniform01(rng), accum = 0.0;
            size_t pick = probs.size() - 1;
            for (size_t k = 0; k < probs.size(); ++k) {
                accum += probs[k];
                if (u < accum) {
                    pick = k;
                    break;
                }
            }
            cur = posts[pick] / std::sqrt(std::max(probs[pick], 1e-300));
            n_live -= 2;
            d1_alive = false;
            wx = static_cast<int>(pick) & 1;
            wz = static_cast<int>(pick >> 1) & 1;
            tr.add("alice", "bell_measure", "vertex:" + std::to_string(v), true);
            ++step_idx;
            continue;
        }
        mbqc::MeasBasis basis = sys.pattern.steps[step_idx].basis;
        if (sys.input_mode == InputMode::Teleport) {
            basis = mbqc::MeasBasis::xy((wx ? -1.0 : 1.0) * sys.wire_angles[step_idx]);
        } else if (basis.kind == mbqc::BasisKind::XY) {
            int sflip = 0, tadd = 0;
            for (int d : sys.pattern.steps[step_idx].s_domain) sflip ^= outcome_of[static_cast<size_t>(d)];
            for (int d : sys.pattern.steps[step_idx].t_domain) tadd ^= outcome_of[static_cast<size_t>(d)];
            basis.angle = (sflip ? -1.0 : 1.0) * basis.angle + (tadd ? M_PI : 0.0);
        }
        auto rr = mbqc::measure_site(StateVector(cur / cur.norm()), idx, basis, src);
        const int s = rr.outcome == -1 ? 1 : 0;
        if (sys.input_mode == InputMode::Teleport) {
            const int sigma = s ^ wz;
            wz = wx;
            wx = sigma;
        }
        outcome_of[static_cast<size_t>(v)] = s;
        cur = rr.post.amplitudes();
        --n_live;
        tr.add("alice", "measure", "vertex:" + std::to_string(v), true);
        ++step_idx;
    }

    // byproduct correction on the outputs
    mbqc::ByproductFrame frame = mbqc::ByproductFrame::zero(sys.out_qubits());
    if (sys.input_mode == InputMode::Teleport) {
        frame.x[0] = wx;
        frame.z[0] = wz;
    } else {
        for (size_t k = 0; k < sys.pattern.outputs.size(); ++k) {
            for (int v : sys.pattern.outputs[k].x_domain) frame.x[k] ^= outcome_of[static_cast<size_t>(v)];
            for (int v : sys.pattern.outputs[k].z_domain) frame.z[k] ^= outcome_of[static_cast<size_t>(v)];
        }
    }
    StateVector corrected = mbqc::correct_byproduct(StateVector(CVector(cur / cur.norm())), frame);

    NoVerifyRunResult result{DensityOperator::pure(corrected), std::move(tr), frame};
    if (!device.honest()) {
        if (device.kind == DeviceBehavior::Kind::FixedOutput) {
            result.rho_out = DensityOperator(device.fixed_rho);
        } else {
            CMatrix m = result.rho_out.matrix();
            const int n_out = sys.out_qubits();
            for (int q = 0; q < n_out; ++q) {
                CMatrix acc = (1.0 - device.noise) * m;
                for (auto p : {linalg::Pauli::X, linalg::Pauli::Y, linalg::Pauli::Z}) {
                    CMatrix t = m;
                    linalg::apply_1q(t, n_out, q, linalg::pauli_matrix(p));
                    acc += (device.noise / 3.0) * t;
                }
                m = acc;
            }
            result.rho_out = DensityOperator(m);
        }
    }
    result.transcript.add("alice", "output", "rho_out", true);
    return result;
}

} // namespace blindsim::proto
