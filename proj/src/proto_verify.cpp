#include "blindsim/proto/verify.hpp"

#include "blindsim/linalg/paulis.hpp"
#include "blindsim/linalg/qubit_ops.hpp"
#include "blindsim/mbqc/engine.hpp"
#include "blindsim/proto/one_way.hpp"
#include "blindsim/util/random.hpp"

#include <sstream>
#include <stdexcept>

namespace blindsim::proto {

using linalg::CMatrix;
using linalg::Complex;
using linalg::CVector;
using linalg::DensityOperator;
using linalg::StateVector;

// ---------------------------------------------------------------------------
// DeviceBehavior / AttackModel helpers
// ---------------------------------------------------------------------------

DeviceBehavior DeviceBehavior::fixed_output(const CMatrix& rho, int flag, const std::string& tag) {
    if (tag == "0") throw std::invalid_argument("w=0 is reserved for the honest device");
    DeviceBehavior d;
    d.kind = Kind::FixedOutput;
    d.w = tag;
    d.fixed_rho = rho;
    d.fixed_flag = flag;
    return d;
}

DeviceBehavior DeviceBehavior::noisy_honest(double strength, const std::string& tag) {
    if (tag == "0") throw std::invalid_argument("w=0 is reserved for the honest device");
    if (strength < 0.0 || strength > 1.0) throw std::invalid_argument("bad noise strength");
    DeviceBehavior d;
    d.kind = Kind::NoisyHonest;
    d.w = tag;
    d.noise = strength;
    return d;
}

AttackModel AttackModel::pauli(std::vector<linalg::Pauli> p) {
    AttackModel a;
    a.kind = Kind::PauliVector;
    a.paulis = std::move(p);
    bool trivial = true;
    for (auto q : a.paulis) trivial &= (q == linalg::Pauli::I);
    if (trivial) a.kind = Kind::None;
    return a;
}

AttackModel AttackModel::local_channel(std::map<int, linalg::KrausChannel> site_channels) {
    AttackModel a;
    a.kind = Kind::LocalKraus;
    a.site_kraus = std::move(site_channels);
    return a;
}

AttackModel AttackModel::on_register(linalg::KrausChannel ch) {
    AttackModel a;
    a.kind = Kind::RegisterChannel;
    a.register_channel = std::move(ch);
    return a;
}

std::vector<int> AttackModel::support(int n) const {
    std::vector<int> s;
    switch (kind) {
        case Kind::None: break;
        case Kind::PauliVector:
            for (int i = 0; i < n && i < static_cast<int>(paulis.size()); ++i)
                if (paulis[static_cast<size_t>(i)] != linalg::Pauli::I) s.push_back(i);
            break;
        case Kind::LocalKraus:
            for (const auto& [site, ch] : site_kraus) s.push_back(site);
            break;
        case Kind::RegisterChannel:
            for (int i = 0; i < n; ++i) s.push_back(i);
            break;
    }
    return s;
}

// ---------------------------------------------------------------------------
// WireProgram / VerifySystem
// ---------------------------------------------------------------------------

CMatrix WireProgram::realized_unitary() const {
    CMatrix u = CMatrix::Identity(2, 2);
    for (double a : angles) u = mbqc::j_gate(a) * u;
    return u;
}

std::string WireProgram::description() const {
    std::ostringstream os;
    os << (input_mode == InputMode::Teleport ? "teleport" : "folded");
    os.precision(17);
    for (double a : angles) os << "," << a;
    return os.str();
}

void WireProgram::validate(int resource_qubits) const {
    if (wire_length() != resource_qubits)
        throw std::invalid_argument("program length does not match the resource wire");
    if (input_mode == InputMode::Teleport && angles.empty())
        throw std::invalid_argument("teleport input needs at least one measured wire slot");
}

VerifySystem VerifySystem::make(int n, const WireProgram& program) {
    VerifySystem sys;
    sys.n = n;
    sys.g_graph = mbqc::GraphSpec::linear(n / 3);
    sys.program = program;
    sys.validate();
    return sys;
}

void VerifySystem::validate() const {
    if (n <= 0 || n % 3 != 0) throw std::invalid_argument("position count must be a positive multiple of 3");
    if (g_graph.vertex_count != n / 3) throw std::invalid_argument("resource graph must have N/3 vertices");
    program.validate(g_graph.vertex_count);
}

// ---------------------------------------------------------------------------
// shared walker pieces
// ---------------------------------------------------------------------------

namespace {

constexpr double kBranchCutoff = 1e-16;

CVector zbasis_ket(int s) {
    CVector v = CVector::Zero(2);
    v(s) = 1.0;
    return v;
}

// Entangled-measurement kets (P(angle) Z^b X^a (x) I)|Phi+>: projecting the
// held input and a wire qubit onto this basis teleports J(angle) * input into
// the wire's neighbor with byproduct x=b, z=a.
CVector teleport_ket(double angle, int a, int b) {
    CVector phi = CVector::Zero(4);
    phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
    CMatrix m = linalg::phase_gate(angle) * linalg::pauli_xz(0, b) * linalg::pauli_xz(a, 0);
    CMatrix m4 = linalg::kron(m, CMatrix::Identity(2, 2));
    return m4 * phi;
}

struct BranchStats {
    double alpha = 0.0;
    double accept = 0.0;
    double delta = 0.0;
};

struct WalkConfig {
    const VerifySystem* sys = nullptr;
    const PermutationTag* tag = nullptr;
    int d3 = 0;
    // per-position operator lists applied before Alice handles the qubit
    // (attack Kraus branches; empty list = no deviation)
    std::vector<std::vector<CMatrix>> site_ops;
    // explicit per-position corrections (open-port path); empty = cancelled
    std::vector<std::pair<int, int>> corrections;
    const CMatrix* ideal_ref = nullptr;  // [out][d3] reference, trace normalized
    const CMatrix* ideal_wire = nullptr; // 2x2 pure reference; branch D3 marginal kept
    bool track_delta = false;
};

// Recursive branch walk over the positions. `cur` lives on
// [D1 (if alive)][remaining register][D3]; the front register qubit is always
// the current position. Accumulates real output branches (without flag).
class VerifyWalker {
public:
    VerifyWalker(const WalkConfig& cfg) : cfg_(cfg) {
        const int out_dim = 2; // single output wire qubit
        const Eigen::Index d = out_dim << cfg_.d3;
        accept_out_ = CMatrix::Zero(d, d);
        reject_out_ = CMatrix::Zero(d, d);
    }

    void run(const CMatrix& cur, bool d1_alive, int front) { walk(cur, 0, d1_alive, front, 0, 0, 0); }

    const CMatrix& accept_out() const { return accept_out_; }
    const CMatrix& reject_out() const { return reject_out_; }
    const BranchStats& stats() const { return stats_; }

private:
    int total_qubits(const CMatrix& cur) const { return linalg::log2_dim(cur.rows()); }

    void walk(CMatrix cur, int pos, bool d1_alive, int front, int wx, int wz, int e) {
        const double w = cur.trace().real();
        if (w < kBranchCutoff && cur.cwiseAbs().maxCoeff() < kBranchCutoff) return;
        const auto& sys = *cfg_.sys;
        if (pos == sys.n) {
            finish(std::move(cur), d1_alive, wx, wz, e);
            return;
        }
        const int n_tot = total_qubits(cur);

        // adversarial deviation on this position's qubit
        if (!cfg_.site_ops[static_cast<size_t>(pos)].empty()) {
            for (const auto& op : cfg_.site_ops[static_cast<size_t>(pos)]) {
                CMatrix branch = cur;
                linalg::apply_1q(branch, n_tot, front, op);
                walk_role(std::move(branch), pos, d1_alive, front, wx, wz, e);
            }
            return;
        }
        walk_role(std::move(cur), pos, d1_alive, front, wx, wz, e);
    }

    void walk_role(CMatrix cur, int pos, bool d1_alive, int front, int wx, int wz, int e) {
        const auto& sys = *cfg_.sys;
        const int n_tot = total_qubits(cur);

        if (!cfg_.corrections.empty()) {
            const auto [cx, cz] = cfg_.corrections[static_cast<size_t>(pos)];
            if (cx || cz) {
                const CMatrix op = linalg::pauli_xz(cx, cz).adjoint();
                linalg::apply_1q(cur, n_tot, front, op);
            }
        }

        const Role role = cfg_.tag->role(pos);
        if (role == Role::TrapX || role == Role::TrapZ) {
            for (int s = 0; s < 2; ++s) {
                const CVector ket = role == Role::TrapX ? mbqc::xy_basis_ket(0.0, s) : zbasis_ket(s);
                CMatrix branch = linalg::project_out_qubit(cur, n_tot, front, ket);
                walk(std::move(branch), pos + 1, d1_alive, front, wx, wz, e | s);
            }
            return;
        }

        // computation position
        const int slot = cfg_.tag->slot_of_position(pos);
        const int wire_len = sys.g_graph.vertex_count;
        if (slot == wire_len - 1) {
            // output qubit: kept, register pointer moves past it
            walk(std::move(cur), pos + 1, d1_alive, front + 1, wx, wz, e);
            return;
        }
        const double angle = sys.program.angles[static_cast<size_t>(slot)];
        if (sys.program.input_mode == InputMode::Teleport && slot == 0) {
            if (!d1_alive) throw std::logic_error("teleport slot reached without a held input");
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const CVector ket = teleport_ket(angle, a, b);
                    CMatrix branch = linalg::project_out_qubit_pair(cur, n_tot, 0, front, ket);
                    // teleported byproduct: x = b, z = a
                    walk(std::move(branch), pos + 1, false, front - 1, b, a, e);
                }
            return;
        }
        const double physical = (wx ? -1.0 : 1.0) * angle;
        for (int s = 0; s < 2; ++s) {
            CMatrix branch = linalg::project_out_qubit(cur, n_tot, front, mbqc::xy_basis_ket(physical, s));
            const int sigma = s ^ wz;
            walk(std::move(branch), pos + 1, d1_alive, front, sigma, wx, e);
        }
    }

    void finish(CMatrix cur, bool d1_alive, int wx, int wz, int e) {
        if (d1_alive) throw std::logic_error("input register not consumed");
        // remaining layout: [out][D3]; undo the wire byproduct
        const int n_tot = total_qubits(cur);
        if (wx || wz) linalg::apply_1q(cur, n_tot, 0, linalg::pauli_xz(wx, wz).adjoint());
        const double tr = cur.trace().real();
        if (e == 0) {
            accept_out_ += cur;
            stats_.accept += tr;
            if (cfg_.track_delta && tr > 1e-13) {
                double dist = 0.0;
                if (cfg_.ideal_ref != nullptr) {
                    dist = linalg::trace_norm_distance(CMatrix(cur / tr), *cfg_.ideal_ref).half_trace_distance;
                } else if (cfg_.ideal_wire != nullptr) {
                    std::vector<int> keep_d3;
                    for (int k = 0; k < cfg_.d3; ++k) keep_d3.push_back(1 + k);
                    const CMatrix d3_part = linalg::partial_trace_qubits(cur, 1 + cfg_.d3, keep_d3);
                    const CMatrix ref = linalg::kron(*cfg_.ideal_wire, d3_part) / tr;
                    dist = linalg::trace_norm_distance(CMatrix(cur / tr), ref).half_trace_distance;
                }
                if (dist > 1e-9) stats_.delta += tr;
            }
        } else {
            reject_out_ += cur;
            stats_.alpha += tr;
        }
    }

    WalkConfig cfg_;
    CMatrix accept_out_;
    CMatrix reject_out_;
    BranchStats stats_;
};

CMatrix append_flag(const CMatrix& body, int flag) {
    const int n = linalg::log2_dim(body.rows());
    return linalg::insert_qubit(body, n, n, zbasis_ket(flag));
}

// (U (x) I_{D3}) applied to the reference input; layout [out][D3].
CMatrix ideal_reference(const VerifySystem& sys, const CMatrix& joint_in, int d3) {
    const CMatrix u = sys.program.realized_unitary();
    if (sys.program.input_mode == InputMode::Teleport) {
        CMatrix out = joint_in; // [D1][D3] with D1 becoming the output wire
        linalg::apply_1q(out, 1 + d3, 0, u);
        return out;
    }
    CVector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const CVector ideal_vec = u * plus;
    return linalg::kron(CMatrix(ideal_vec * ideal_vec.adjoint()), joint_in); // joint_in = [D3]
}

std::vector<std::vector<CMatrix>> resolve_site_ops(const VerifySystem& sys, const AttackModel& attack,
                                                   const std::pair<int, int>* q_pattern_on_support,
                                                   const std::vector<int>& support) {
    std::vector<std::vector<CMatrix>> site_ops(static_cast<size_t>(sys.n));
    switch (attack.kind) {
        case AttackModel::Kind::None: break;
        case AttackModel::Kind::PauliVector: {
            if (static_cast<int>(attack.paulis.size()) != sys.n)
                throw std::invalid_argument("Pauli attack length mismatch");
            for (int i = 0; i < sys.n; ++i) {
                const auto p = attack.paulis[static_cast<size_t>(i)];
                if (p != linalg::Pauli::I) site_ops[static_cast<size_t>(i)] = {linalg::pauli_matrix(p)};
            }
            break;
        }
        case AttackModel::Kind::LocalKraus: {
            for (const auto& [site, ch] : attack.site_kraus) {
                if (site < 0 || site >= sys.n) throw std::invalid_argument("attack site out of range");
                if (ch.dim_in() != 2 || ch.dim_out() != 2)
                    throw std::invalid_argument("site attack must be a single-qubit channel");
                std::vector<CMatrix> ops = ch.kraus_ops();
                if (q_pattern_on_support != nullptr) {
                    // conjugate by the byproduct pattern on this site
                    int idx = -1;
                    for (size_t k = 0; k < support.size(); ++k)
                        if (support[k] == site) idx = static_cast<int>(k);
                    const auto [qx, qz] = q_pattern_on_support[idx];
                    const CMatrix pq = linalg::pauli_xz(qx, qz);
                    for (auto& op : ops) op = pq.adjoint() * op * pq;
                }
                site_ops[static_cast<size_t>(site)] = std::move(ops);
            }
            break;
        }
        case AttackModel::Kind::RegisterChannel:
            throw std::logic_error("register channels are resolved by the caller");
    }
    return site_ops;
}

} // namespace

StateVector honest_resource_state(const VerifySystem& sys) {
    const ResourceLayout layout = resource_layout(sys.n, sys.g_graph);
    const auto order = layout.register_order();
    if (order.size() > 12) throw std::invalid_argument("resource register exceeds the state cap");
    mbqc::GraphSpec g;
    g.vertex_count = static_cast<int>(order.size());
    std::map<int, int> index_of;
    for (size_t i = 0; i < order.size(); ++i) index_of[order[i]] = static_cast<int>(i);
    for (int id : order)
        for (int w : layout.adjacency(id))
            if (index_of.count(w)) g.add_edge(index_of[id], index_of[w]);
    return mbqc::build_cluster(g);
}

CMatrix verify_ideal_reference(const VerifySystem& sys, const CMatrix& joint_in, int d3_qubits) {
    return ideal_reference(sys, joint_in, d3_qubits);
}

// ---------------------------------------------------------------------------
// closed-port application (strategy closes the resource port)
// ---------------------------------------------------------------------------

namespace {

struct ClosedPortTerm {
    double weight = 1.0;
    std::vector<std::vector<CMatrix>> site_ops;
    std::optional<CMatrix> register_op; // applied to the N-qubit block
};

// Expands the attack into exact mixture terms for one permutation tag,
// averaging over the preparation byproduct where the attack does not commute
// with it.
std::vector<ClosedPortTerm> expand_attack(const VerifySystem& sys, const PermutationTag& tag,
                                          const AttackModel& attack) {
    std::vector<ClosedPortTerm> terms;
    if (attack.kind == AttackModel::Kind::None || attack.kind == AttackModel::Kind::PauliVector) {
        // Pauli conjugation by the byproduct only flips signs; the channel is
        // untouched, so no averaging is needed.
        ClosedPortTerm t;
        t.site_ops = resolve_site_ops(sys, attack, nullptr, {});
        terms.push_back(std::move(t));
        return terms;
    }
    const ResourceLayout layout = resource_layout(sys.n, sys.g_graph);
    const SteeringScript script = steering_script(layout, tag, sys.g_graph);
    const QByproductMap qmap = phase1_q_map(layout, script);
    const std::vector<int> support = attack.support(sys.n);
    const auto patterns = qmap.support_on(support);
    const double w = 1.0 / static_cast<double>(patterns.size());

    for (const auto& pattern : patterns) {
        ClosedPortTerm t;
        t.weight = w;
        if (attack.kind == AttackModel::Kind::LocalKraus) {
            t.site_ops = resolve_site_ops(sys, attack, pattern.data(), support);
        } else { // RegisterChannel
            t.site_ops.resize(static_cast<size_t>(sys.n));
            CMatrix pq = CMatrix::Identity(1, 1);
            for (int i = 0; i < sys.n; ++i) {
                const auto [qx, qz] = pattern[static_cast<size_t>(i)];
                pq = linalg::kron(pq, linalg::pauli_xz(qx, qz));
            }
            // sigma_q^dag K sigma_q for every Kraus operator
            t.register_op = pq; // marker; expanded by the caller
        }
        terms.push_back(std::move(t));
    }
    return terms;
}

} // namespace

VerifyOutputs verify_apply(const VerifySystem& sys, const AttackModel& attack,
                           const DeviceBehavior& device, const CMatrix& joint_in, int d3_qubits) {
    sys.validate();
    const int d1 = sys.d1_qubits();
    const Eigen::Index expect_dim = Eigen::Index{1} << (d1 + d3_qubits);
    if (joint_in.rows() != expect_dim) throw std::invalid_argument("joint input has wrong dimension");

    const double in_tr = joint_in.trace().real();
    const CMatrix ref_raw = ideal_reference(sys, joint_in, d3_qubits);
    const CMatrix ref_norm = in_tr > 1e-13 ? CMatrix(ref_raw / in_tr) : ref_raw;

    // scripted devices bypass the measurement dynamics entirely
    if (!device.honest() && device.kind == DeviceBehavior::Kind::FixedOutput) {
        std::vector<int> keep;
        for (int k = 0; k < d3_qubits; ++k) keep.push_back(d1 + k);
        const CMatrix d3_part = linalg::partial_trace_qubits(joint_in, d1 + d3_qubits, keep);
        CMatrix body = linalg::kron(device.fixed_rho, d3_part);
        const CMatrix out = append_flag(body, device.fixed_flag);
        VerifyOutputs res{out, out, device.fixed_flag == 1 ? in_tr : 0.0, 0.0};
        return res;
    }

    // average over the secret permutation; honest dynamics do not depend on
    // where the traps sit, so the untouched case needs a single tag
    auto tags = PermutationTag::enumerate_all(sys.n);
    if (attack.none()) tags.erase(tags.begin() + 1, tags.end());
    const double tag_weight = 1.0 / static_cast<double>(tags.size());

    const Eigen::Index out_dim = Eigen::Index{2} << d3_qubits;
    CMatrix accept = CMatrix::Zero(out_dim, out_dim);
    CMatrix reject = CMatrix::Zero(out_dim, out_dim);
    BranchStats stats;

    for (size_t ti = 0; ti < tags.size(); ++ti) {
        const auto& tag = tags[ti];
        const StateVector psi_p = build_psi_p(tag, sys.g_graph);
        // cur layout: [D1?][register][D3]
        CMatrix cur0 = linalg::kron(joint_in, CMatrix(psi_p.amplitudes() * psi_p.amplitudes().adjoint()));
        // reorder from [D1][D3][reg] to [D1][reg][D3]
        {
            const int n_tot = d1 + d3_qubits + sys.n;
            std::vector<int> perm;
            for (int i = 0; i < d1; ++i) perm.push_back(i);
            for (int i = 0; i < sys.n; ++i) perm.push_back(d1 + d3_qubits + i);
            for (int i = 0; i < d3_qubits; ++i) perm.push_back(d1 + i);
            cur0 = linalg::permute_qubits(cur0, n_tot, perm);
        }

        const auto terms = expand_attack(sys, tag, attack);
        for (const auto& term : terms) {
            WalkConfig cfg;
            cfg.sys = &sys;
            cfg.tag = &tag;
            cfg.d3 = d3_qubits;
            cfg.site_ops = term.site_ops;
            cfg.ideal_ref = &ref_norm;
            cfg.track_delta = true;

            CMatrix cur = cur0;
            std::vector<CMatrix> register_branches{cur};
            if (term.register_op.has_value()) {
                register_branches.clear();
                const CMatrix& pq = *term.register_op;
                for (const auto& k : attack.register_channel->kraus_ops()) {
                    const CMatrix conj = pq.adjoint() * k * pq;
                    CMatrix embedded = linalg::kron(
                        CMatrix::Identity(Eigen::Index{1} << d1, Eigen::Index{1} << d1),
                        linalg::kron(conj, CMatrix::Identity(Eigen::Index{1} << d3_qubits,
                                                             Eigen::Index{1} << d3_qubits)));
                    register_branches.push_back(embedded * cur * embedded.adjoint());
                }
            }

            for (const auto& rb : register_branches) {
                VerifyWalker walker(cfg);
                walker.run(rb, d1 == 1, d1);
                const double scale = tag_weight * term.weight;
                accept += scale * walker.accept_out();
                reject += scale * walker.reject_out();
                stats.alpha += scale * walker.stats().alpha;
                stats.accept += scale * walker.stats().accept;
                stats.delta += scale * walker.stats().delta;
            }
        }
    }

    VerifyOutputs res;
    if (!device.honest() && device.kind == DeviceBehavior::Kind::NoisyHonest) {
        // depolarize the output wire, keep the honest flag
        auto depolarize = [&](CMatrix m) {
            const int n_tot = linalg::log2_dim(m.rows());
            CMatrix acc = (1.0 - device.noise) * m;
            for (auto p : {linalg::Pauli::X, linalg::Pauli::Y, linalg::Pauli::Z}) {
                CMatrix t = m;
                linalg::apply_1q(t, n_tot, 0, linalg::pauli_matrix(p));
                acc += (device.noise / 3.0) * t;
            }
            return acc;
        };
        accept = depolarize(accept);
        reject = depolarize(reject);
    }

    res.real = append_flag(accept, 0) + append_flag(reject, 1);
    res.alpha = stats.alpha;
    res.delta_exact = stats.delta;
    if (device.honest()) {
        // ideal: reject branches forwarded, accepted weight replaced by the
        // exact program action on the held input
        res.ideal = append_flag(reject, 1) + stats.accept / std::max(in_tr, 1e-300) * append_flag(ref_raw, 0);
        if (in_tr <= 1e-13) res.ideal = append_flag(reject, 1) + stats.accept * append_flag(ref_raw, 0);
    } else {
        res.ideal = res.real;
    }
    return res;
}

// ---------------------------------------------------------------------------
// open-port application
// ---------------------------------------------------------------------------

namespace {

struct OpenWalkResult {
    CMatrix accept; // [out][D3]
    CMatrix reject;
    double alpha = 0.0;
    double accept_w = 0.0;
};

// Phase-1 script applied to an arbitrary resource register, then phase 2 with
// the recorded corrections. cur layout: [D1?][sent..][outs..][D3].
void open_walk_phase1(const VerifySystem& sys, const ResourceLayout& layout,
                      const SteeringScript& script, size_t step_idx, CMatrix cur,
                      std::map<int, int> index_of, std::map<int, std::pair<int, int>> frames,
                      int d1, int d3, const PermutationTag& tag, const CMatrix& ideal_wire,
                      OpenWalkResult& out, BranchStats& stats) {
    if (cur.cwiseAbs().maxCoeff() < kBranchCutoff) return;
    const int n_tot = linalg::log2_dim(cur.rows());
    if (step_idx == script.steps.size()) {
        // phase 2 on the remaining register (outs in position order)
        WalkConfig cfg;
        cfg.sys = &sys;
        cfg.tag = &tag;
        cfg.d3 = d3;
        cfg.site_ops.resize(static_cast<size_t>(sys.n));
        cfg.corrections.resize(static_cast<size_t>(sys.n));
        for (int i = 0; i < sys.n; ++i) cfg.corrections[static_cast<size_t>(i)] = frames[layout.out(i)];
        cfg.ideal_wire = &ideal_wire;
        cfg.track_delta = true;
        VerifyWalker walker(cfg);
        walker.run(cur, d1 == 1, d1);
        out.accept += walker.accept_out();
        out.reject += walker.reject_out();
        stats.alpha += walker.stats().alpha;
        stats.accept += walker.stats().accept;
        stats.delta += walker.stats().delta;
        return;
    }

    const auto& step = script.steps[step_idx];
    const int qidx = index_of.at(step.vertex);
    auto shrink_index = [&](std::map<int, int> m, int removed_idx) {
        std::map<int, int> next;
        for (auto& [v, idx] : m) {
            if (v == step.vertex) continue;
            next[v] = idx > removed_idx ? idx - 1 : idx;
        }
        return next;
    };

    for (int raw = 0; raw < 2; ++raw) {
        CVector ket = step.xy ? mbqc::xy_basis_ket(0.0, raw) : zbasis_ket(raw);
        CMatrix branch = linalg::project_out_qubit(cur, n_tot, qidx, ket);
        auto next_frames = frames;
        // Alice's bookkeeping: identical rules to the honest preparation
        if (step.xy) {
            const int ideal = raw ^ frames.at(step.vertex).second; // z component
            auto& succ = next_frames[step.successor];
            if (ideal) {
                succ.first ^= 1;
                for (int nb : layout.adjacency(step.successor))
                    if (nb != step.vertex && next_frames.count(nb)) next_frames[nb].second ^= 1;
            }
        } else {
            const int ideal = raw ^ frames.at(step.vertex).first; // x component
            if (ideal)
                for (int nb : layout.adjacency(step.vertex))
                    if (next_frames.count(nb)) next_frames[nb].second ^= 1;
        }
        next_frames.erase(step.vertex);
        open_walk_phase1(sys, layout, script, step_idx + 1, std::move(branch), shrink_index(index_of, qidx),
                         std::move(next_frames), d1, d3, tag, ideal_wire, out, stats);
    }
}

} // namespace

VerifyOutputs verify_apply_open(const VerifySystem& sys, const DeviceBehavior& device,
                                const CMatrix& joint_in, int d3_qubits) {
    sys.validate();
    if (sys.program.input_mode == InputMode::Teleport)
        throw std::invalid_argument("open-port analysis supports the folded input mode");
    const ResourceLayout layout = resource_layout(sys.n, sys.g_graph);
    const int d1 = 0;
    const int reg = static_cast<int>(layout.register_order().size());
    const Eigen::Index expect = Eigen::Index{1} << (reg + d3_qubits);
    if (joint_in.rows() != expect) throw std::invalid_argument("joint input has wrong dimension");
    if (reg + d3_qubits > 14) throw std::invalid_argument("open-port register exceeds the analysis cap");

    const double in_tr = joint_in.trace().real();
    CVector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const CVector ideal_vec = sys.program.realized_unitary() * plus;

    if (!device.honest() && device.kind == DeviceBehavior::Kind::FixedOutput) {
        std::vector<int> keep;
        for (int k = 0; k < d3_qubits; ++k) keep.push_back(reg + k);
        const CMatrix d3_part = linalg::partial_trace_qubits(joint_in, reg + d3_qubits, keep);
        const CMatrix out = append_flag(linalg::kron(device.fixed_rho, d3_part), device.fixed_flag);
        return VerifyOutputs{out, out, device.fixed_flag == 1 ? in_tr : 0.0, 0.0};
    }

    const auto tags = PermutationTag::enumerate_all(sys.n);
    const double tag_weight = 1.0 / static_cast<double>(tags.size());
    const Eigen::Index out_dim = Eigen::Index{2} << d3_qubits;

    CMatrix accept = CMatrix::Zero(out_dim, out_dim);
    CMatrix reject = CMatrix::Zero(out_dim, out_dim);
    CMatrix ideal_accept = CMatrix::Zero(out_dim, out_dim);
    BranchStats stats;

    for (const auto& tag : tags) {
        const SteeringScript script = steering_script(layout, tag, sys.g_graph);
        std::map<int, int> index_of;
        const auto order = layout.register_order();
        for (size_t i = 0; i < order.size(); ++i) index_of[order[i]] = static_cast<int>(i);
        std::map<int, std::pair<int, int>> frames;
        for (int id : order) frames[id] = {0, 0};

        const CMatrix ideal_wire = ideal_vec * ideal_vec.adjoint();
        OpenWalkResult res_walk{CMatrix::Zero(out_dim, out_dim), CMatrix::Zero(out_dim, out_dim), 0, 0};
        BranchStats tag_stats;
        open_walk_phase1(sys, layout, script, 0, joint_in, index_of, frames, d1, d3_qubits, tag,
                         ideal_wire, res_walk, tag_stats);

        accept += tag_weight * res_walk.accept;
        reject += tag_weight * res_walk.reject;
        stats.alpha += tag_weight * tag_stats.alpha;
        stats.accept += tag_weight * tag_stats.accept;
        stats.delta += tag_weight * tag_stats.delta;

        // ideal accepted branch: fresh program output (x) the D3 marginal of
        // the accepted branches
        std::vector<int> keep_d3;
        for (int k = 0; k < d3_qubits; ++k) keep_d3.push_back(1 + k);
        const CMatrix d3_marginal = linalg::partial_trace_qubits(res_walk.accept, 1 + d3_qubits, keep_d3);
        ideal_accept += tag_weight * linalg::kron(CMatrix(ideal_vec * ideal_vec.adjoint()), d3_marginal);
    }

    VerifyOutputs res;
    res.alpha = stats.alpha;
    res.delta_exact = stats.delta;
    if (!device.honest() && device.kind == DeviceBehavior::Kind::NoisyHonest) {
        auto depolarize = [&](CMatrix m) {
            const int n_tot = linalg::log2_dim(m.rows());
            CMatrix acc = (1.0 - device.noise) * m;
            for (auto p : {linalg::Pauli::X, linalg::Pauli::Y, linalg::Pauli::Z}) {
                CMatrix t = m;
                linalg::apply_1q(t, n_tot, 0, linalg::pauli_matrix(p));
                acc += (device.noise / 3.0) * t;
            }
            return acc;
        };
        accept = depolarize(accept);
        reject = depolarize(reject);
    }
    res.real = append_flag(accept, 0) + append_flag(reject, 1);
    if (device.honest()) {
        res.ideal = append_flag(ideal_accept, 0) + append_flag(reject, 1);
    } else {
        res.ideal = res.real;
    }
    (void)in_tr;
    return res;
}

// ---------------------------------------------------------------------------
// sampled protocol run
// ---------------------------------------------------------------------------

VerifyRunResult run_verify(const VerifySystem& sys, const AttackModel& attack,
                           const DeviceBehavior& device, std::uint64_t seed,
                           const VerifyRunOptions& opts) {
    sys.validate();
    if (!attack.is_pauli() && attack.kind != AttackModel::Kind::LocalKraus)
        throw std::invalid_argument("sampled runs support Pauli and local-channel deviations");

    mbqc::RandomOutcomeSource seeded(util::split_seed(seed, 0));
    mbqc::OutcomeSource& src = opts.outcomes != nullptr ? *opts.outcomes : seeded;
    std::mt19937_64 rng(util::split_seed(seed, 1));

    Transcript tr;
    tr.protocol_variant = "verify";
    tr.seed = seed;

    const PermutationTag tag = opts.tag.has_value() ? *opts.tag : PermutationTag::sample(sys.n, rng);
    const ResourceLayout layout = resource_layout(sys.n, sys.g_graph);
    const SteeringScript script = steering_script(layout, tag, sys.g_graph);

    OneWayChannel wire;
    auto bob = wire.bob_end();
    auto alice = wire.alice_end();

    // phase 1: Bob streams the preparation resource; Alice measures on arrival.
    // The simulation evaluates commuting measurements in carve-first order; the
    // wire traffic below is the public protocol order.
    Phase1Result p1 = run_phase1_honest(layout, script, src);
    for (int id : layout.send_order()) {
        bob.send(id);
        tr.add("bob", "send_qubit", "prep:" + std::to_string(id), false);
        const int slot = alice.receive();
        tr.add("alice", "measure", "prep-slot:" + std::to_string(slot), true);
    }
    tr.add("alice", "measure", "frame:" + std::to_string(util::fnv1a(std::string(
                                   reinterpret_cast<const char*>(p1.q.x.data()), p1.q.x.size() * sizeof(int)))),
           true);

    // deviation on the prepared register
    CVector reg = p1.bob_state.amplitudes();
    std::vector<std::vector<CMatrix>> site_ops(static_cast<size_t>(sys.n));
    if (attack.kind == AttackModel::Kind::PauliVector) {
        for (int i = 0; i < sys.n; ++i) {
            const auto p = attack.paulis[static_cast<size_t>(i)];
            if (p != linalg::Pauli::I) linalg::apply_1q(reg, sys.n, i, linalg::pauli_matrix(p));
        }
    } else if (attack.kind == AttackModel::Kind::LocalKraus) {
        for (const auto& [site, ch] : attack.site_kraus) {
            // sample a Kraus branch
            std::vector<double> probs;
            std::vector<CVector> branches;
            for (const auto& k : ch.kraus_ops()) {
                CVector b = reg;
                linalg::apply_1q(b, sys.n, site, k);
                probs.push_back(b.squaredNorm());
                branches.push_back(std::move(b));
            }
            double u = util::uniform01(rng), accum = 0.0;
            size_t pick = probs.size() - 1;
            for (size_t k = 0; k < probs.size(); ++k) {
                accum += probs[k];
                if (u < accum) {
                    pick = k;
                    break;
                }
            }
            reg = branches[pick] / std::sqrt(std::max(probs[pick], 1e-300));
        }
    }

    // phase 2: positions arrive in order
    const int wire_len = sys.g_graph.vertex_count;
    int wx = 0, wz = 0, e = 0;
    std::optional<CVector> held_input;
    if (sys.program.input_mode == InputMode::Teleport) {
        CVector plus(2);
        plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
        held_input = opts.input_state.value_or(plus);
    }

    int n_live = sys.n;
    CVector cur = reg;
    if (held_input.has_value()) {
        cur = linalg::kron(*held_input, reg); // [D1][register]
        ++n_live;
    }
    int front = held_input.has_value() ? 1 : 0;

    for (int pos = 0; pos < sys.n; ++pos) {
        bob.send(sys.n + pos);
        tr.add("bob", "send_qubit", "pos:" + std::to_string(pos), false);
        const int slot_recv = alice.receive();
        (void)slot_recv;
        // correction
        const int qx = p1.q.x[static_cast<size_t>(pos)], qz = p1.q.z[static_cast<size_t>(pos)];
        if (qx || qz) linalg::apply_1q(cur, n_live, front, linalg::pauli_xz(qx, qz).adjoint());
        tr.add("alice", "correct", "pos:" + std::to_string(pos), true);

        const Role role = tag.role(pos);
        if (role == Role::TrapX || role == Role::TrapZ) {
            const mbqc::MeasBasis basis = role == Role::TrapX ? mbqc::MeasBasis::x() : mbqc::MeasBasis::z();
            auto rr = mbqc::measure_site(StateVector(cur / cur.norm()), front, basis, src);
            e |= (rr.outcome == -1) ? 1 : 0;
            cur = rr.post.amplitudes();
            --n_live;
            tr.add("alice", "trap", "pos:" + std::to_string(pos), true);
            continue;
        }
        const int slot = tag.slot_of_position(pos);
        if (slot == wire_len - 1) {
            ++front;
            tr.add("alice", "keep", "pos:" + std::to_string(pos), true);
            continue;
        }
        const double angle = sys.program.angles[static_cast<size_t>(slot)];
        if (sys.program.input_mode == InputMode::Teleport && slot == 0) {
            // entangled measurement of (held input, this qubit)
            std::vector<double> probs;
            std::vector<CVector> posts;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    CVector branch = linalg::project_out_qubit_pair(cur, n_live, 0, front, teleport_ket(angle, a, b));
                    probs.push_back(branch.squaredNorm());
                    posts.push_back(std::move(branch));
                }
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
            front -= 1;
            wx = static_cast<int>(pick) & 1;        // b
            wz = static_cast<int>(pick >> 1) & 1;   // a
            tr.add("alice", "bell_measure", "pos:" + std::to_string(pos), true);
            continue;
        }
        const double physical = (wx ? -1.0 : 1.0) * angle;
        auto rr = mbqc::measure_site(StateVector(cur / cur.norm()), front, mbqc::MeasBasis::xy(physical), src);
        const int s = rr.outcome == -1 ? 1 : 0;
        const int sigma = s ^ wz;
        wz = wx;
        wx = sigma;
        cur = rr.post.amplitudes();
        --n_live;
        tr.add("alice", "measure", "pos:" + std::to_string(pos), true);
    }

    // remaining register: the output wire qubit; undo the wire byproduct
    if (wx || wz) linalg::apply_1q(cur, n_live, front - 1 >= 0 ? front - 1 : 0, linalg::pauli_xz(wx, wz).adjoint());
    cur.normalize();

    VerifyRunResult result{DensityOperator(CMatrix(cur * cur.adjoint())), e, std::move(tr), tag, p1.q};

    if (!device.honest()) {
        if (device.kind == DeviceBehavior::Kind::FixedOutput) {
            result.rho_out = DensityOperator(device.fixed_rho);
            result.flag = device.fixed_flag;
        } else {
            CMatrix m = result.rho_out.matrix();
            CMatrix acc = (1.0 - device.noise) * m;
            for (auto p : {linalg::Pauli::X, linalg::Pauli::Y, linalg::Pauli::Z})
                acc += (device.noise / 3.0) * linalg::pauli_matrix(p) * m * linalg::pauli_matrix(p).adjoint();
            result.rho_out = DensityOperator(acc);
        }
    }
    result.transcript.add("alice", "flag", "e:" + std::to_string(result.flag), true);
    result.transcript.add("alice", "output", "rho_out", true);
    return result;
}

} // namespace blindsim::proto
