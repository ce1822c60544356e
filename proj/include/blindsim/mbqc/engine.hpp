#pragma once

#include "blindsim/linalg/state.hpp"
#include "blindsim/mbqc/pattern.hpp"

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

namespace blindsim::mbqc {

// Supplies measurement outcomes: either Born-rule sampling or a forced branch.
class OutcomeSource {
public:
    virtual ~OutcomeSource() = default;
    // p_plus is the probability of outcome 0 (the +1 eigenvalue); returns 0 or 1.
    virtual int draw(double p_plus) = 0;
};

class RandomOutcomeSource final : public OutcomeSource {
public:
    explicit RandomOutcomeSource(std::uint64_t seed) : rng_(seed) {}
    int draw(double p_plus) override;

private:
    std::mt19937_64 rng_;
};

// Forces a fixed outcome string; throws on a zero-probability branch.
class ForcedOutcomeSource final : public OutcomeSource {
public:
    explicit ForcedOutcomeSource(std::vector<int> bits) : bits_(std::move(bits)) {}
    int draw(double p_plus) override;
    bool exhausted() const { return next_ >= bits_.size(); }

private:
    std::vector<int> bits_;
    std::size_t next_ = 0;
};

// (prod CZ_{ij}) |+>^N over the graph's edges.
linalg::StateVector build_cluster(const GraphSpec& graph);

// Basis kets for XY(theta): |s> = (|0> + (-1)^s e^{i theta} |1>)/sqrt(2).
linalg::CVector xy_basis_ket(double theta, int s);

struct MeasureResult {
    int outcome = +1; // +1 or -1 eigenvalue
    linalg::StateVector post; // measured qubit removed, renormalized
};

// Projective measurement of one qubit of `state` (by current register index).
MeasureResult measure_site(const linalg::StateVector& state, int vertex, const MeasBasis& basis,
                           OutcomeSource& source);

struct PatternRun {
    linalg::StateVector output_state; // on output vertices, in listed order
    ByproductFrame frame;             // per output vertex
    std::vector<int> outcomes;        // 0/1 per step
};

PatternRun run_pattern(const GraphSpec& graph, const MeasurementPattern& pattern, OutcomeSource& source);
PatternRun run_pattern(const GraphSpec& graph, const MeasurementPattern& pattern, std::uint64_t seed);
// Runs the pattern against an arbitrary register (one qubit per graph vertex).
PatternRun run_pattern_on_state(const linalg::StateVector& reg, const GraphSpec& graph,
                                const MeasurementPattern& pattern, OutcomeSource& source);

// Applies sigma_q^dagger site-wise.
linalg::StateVector correct_byproduct(const linalg::StateVector& state, const ByproductFrame& frame);
linalg::DensityOperator correct_byproduct(const linalg::DensityOperator& rho, const ByproductFrame& frame);

} // namespace blindsim::mbqc
