#include "blindsim/mbqc/engine.hpp"

#include "blindsim/linalg/paulis.hpp"
#include "blindsim/linalg/qubit_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blindsim::mbqc {

using linalg::CMatrix;
using linalg::Complex;
using linalg::CVector;
using linalg::StateVector;

int RandomOutcomeSource::draw(double p_plus) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return u < p_plus ? 0 : 1;
}

int ForcedOutcomeSource::draw(double p_plus) {
    if (next_ >= bits_.size()) throw std::invalid_argument("forced outcome list exhausted");
    const int bit = bits_[next_++];
    const double p = bit == 0 ? p_plus : 1.0 - p_plus;
    if (p < 1e-12) throw std::invalid_argument("zero-probability forced outcome");
    return bit;
}

StateVector build_cluster(const GraphSpec& graph) {
    graph.validate();
    if (graph.vertex_count > 12) throw std::invalid_argument("too many vertices (cap is 12)");
    StateVector psi = StateVector::plus(graph.vertex_count);
    CVector amps = psi.amplitudes();
    for (const auto& [a, b] : graph.edges) linalg::apply_cz(amps, graph.vertex_count, a, b);
    return StateVector(std::move(amps));
}

CVector xy_basis_ket(double theta, int s) {
    CVector v(2);
    const double r = 1.0 / std::sqrt(2.0);
    v(0) = r;
    v(1) = (s == 0 ? 1.0 : -1.0) * std::exp(Complex(0, theta)) * r;
    return v;
}

namespace {

CVector basis_ket(const MeasBasis& basis, int s) {
    switch (basis.kind) {
        case BasisKind::XY: return xy_basis_ket(basis.angle, s);
        case BasisKind::PauliX: return xy_basis_ket(0.0, s);
        case BasisKind::PauliZ: {
            CVector v = CVector::Zero(2);
            v(s) = 1.0;
            return v;
        }
    }
    throw std::invalid_argument("bad basis");
}

} // namespace

MeasureResult measure_site(const StateVector& state, int vertex, const MeasBasis& basis,
                           OutcomeSource& source) {
    const int n = state.qubits();
    if (vertex < 0 || vertex >= n) throw std::invalid_argument("vertex out of range");
    const CVector plus_branch = linalg::project_out_qubit(state.amplitudes(), n, vertex, basis_ket(basis, 0));
    const double p_plus = plus_branch.squaredNorm();
    const int s = source.draw(p_plus);
    CVector post = s == 0 ? plus_branch
                          : linalg::project_out_qubit(state.amplitudes(), n, vertex, basis_ket(basis, 1));
    const double norm = post.norm();
    if (norm < 1e-9) throw std::invalid_argument("zero-probability measurement branch");
    post /= norm;
    return MeasureResult{s == 0 ? +1 : -1, StateVector(std::move(post))};
}

namespace {

int xor_over(const std::vector<int>& domain, const std::vector<int>& outcome_of, const char* what) {
    int acc = 0;
    for (int v : domain) {
        if (v < 0 || v >= static_cast<int>(outcome_of.size()) || outcome_of[static_cast<size_t>(v)] < 0)
            throw std::invalid_argument(std::string("domain references unmeasured vertex in ") + what);
        acc ^= outcome_of[static_cast<size_t>(v)];
    }
    return acc;
}

// Register order is ascending vertex id; returns the current register index.
int register_index(const std::vector<int>& live, int vertex) {
    const auto it = std::lower_bound(live.begin(), live.end(), vertex);
    if (it == live.end() || *it != vertex) throw std::invalid_argument("vertex not live");
    return static_cast<int>(it - live.begin());
}

StateVector reorder_state(const StateVector& psi, const std::vector<int>& current, const std::vector<int>& desired) {
    if (current == desired) return psi;
    const int n = psi.qubits();
    if (static_cast<int>(current.size()) != n || current.size() != desired.size())
        throw std::invalid_argument("bad reorder request");
    std::vector<int> pos_in_current(current.size());
    for (size_t i = 0; i < desired.size(); ++i) {
        const auto it = std::find(current.begin(), current.end(), desired[i]);
        if (it == current.end()) throw std::invalid_argument("reorder vertex missing");
        pos_in_current[i] = static_cast<int>(it - current.begin());
    }
    CVector out = CVector::Zero(psi.dim());
    for (Eigen::Index idx = 0; idx < psi.dim(); ++idx) {
        std::uint64_t src = 0;
        for (int j = 0; j < n; ++j) {
            const int bit = static_cast<int>((static_cast<std::uint64_t>(idx) >> (n - 1 - j)) & 1);
            if (bit) src |= linalg::bit_mask(n, pos_in_current[static_cast<size_t>(j)]);
        }
        out(idx) = psi.amp(src);
    }
    return StateVector(std::move(out));
}

} // namespace

PatternRun run_pattern_on_state(const StateVector& reg, const GraphSpec& graph,
                                const MeasurementPattern& pattern, OutcomeSource& source) {
    pattern.validate(graph);
    if (reg.qubits() != graph.vertex_count) throw std::invalid_argument("register/graph size mismatch");

    std::vector<int> live(static_cast<size_t>(graph.vertex_count));
    for (int i = 0; i < graph.vertex_count; ++i) live[static_cast<size_t>(i)] = i;
    std::vector<int> outcome_of(static_cast<size_t>(graph.vertex_count), -1);

    StateVector psi = reg;
    std::vector<int> outcomes;
    for (const auto& step : pattern.steps) {
        MeasBasis basis = step.basis;
        if (basis.kind == BasisKind::XY) {
            const int sflip = xor_over(step.s_domain, outcome_of, "s_domain");
            const int tadd = xor_over(step.t_domain, outcome_of, "t_domain");
            basis.angle = (sflip ? -1.0 : 1.0) * basis.angle + (tadd ? M_PI : 0.0);
        }
        const int idx = register_index(live, step.vertex);
        MeasureResult rr = measure_site(psi, idx, basis, source);
        const int s = rr.outcome == +1 ? 0 : 1;
        outcome_of[static_cast<size_t>(step.vertex)] = s;
        outcomes.push_back(s);
        psi = std::move(rr.post);
        live.erase(live.begin() + idx);
    }

    ByproductFrame frame = ByproductFrame::zero(static_cast<int>(pattern.outputs.size()));
    std::vector<int> desired;
    for (size_t i = 0; i < pattern.outputs.size(); ++i) {
        const auto& out = pattern.outputs[i];
        frame.x[i] = xor_over(out.x_domain, outcome_of, "x_domain");
        frame.z[i] = xor_over(out.z_domain, outcome_of, "z_domain");
        desired.push_back(out.vertex);
    }
    if (live.size() != pattern.outputs.size())
        throw std::invalid_argument("pattern leaves undeclared unmeasured vertices");

    return PatternRun{reorder_state(psi, live, desired), std::move(frame), std::move(outcomes)};
}

PatternRun run_pattern(const GraphSpec& graph, const MeasurementPattern& pattern, OutcomeSource& source) {
    return run_pattern_on_state(build_cluster(graph), graph, pattern, source);
}

PatternRun run_pattern(const GraphSpec& graph, const MeasurementPattern& pattern, std::uint64_t seed) {
    RandomOutcomeSource src(seed);
    return run_pattern(graph, pattern, src);
}

StateVector correct_byproduct(const StateVector& state, const ByproductFrame& frame) {
    if (frame.sites() != state.qubits()) throw std::invalid_argument("frame length mismatch");
    CVector amps = state.amplitudes();
    for (int j = 0; j < frame.sites(); ++j) {
        const CMatrix op = linalg::pauli_xz(frame.x[static_cast<size_t>(j)], frame.z[static_cast<size_t>(j)]).adjoint();
        linalg::apply_1q(amps, state.qubits(), j, op);
    }
    return StateVector(std::move(amps));
}

linalg::DensityOperator correct_byproduct(const linalg::DensityOperator& rho, const ByproductFrame& frame) {
    if (frame.sites() != rho.qubits()) throw std::invalid_argument("frame length mismatch");
    CMatrix m = rho.matrix();
    for (int j = 0; j < frame.sites(); ++j) {
        const CMatrix op = linalg::pauli_xz(frame.x[static_cast<size_t>(j)], frame.z[static_cast<size_t>(j)]).adjoint();
        linalg::apply_1q(m, rho.qubits(), j, op);
    }
    return linalg::DensityOperator(std::move(m));
}

} // namespace blindsim::mbqc
