#pragma once

#include "blindsim/linalg/channel.hpp"

#include <cstdint>

namespace blindsim::linalg {

enum class DistanceMethod { exact_state, choi_bound, entangled_probe_search };

struct DistanceReport {
    double half_trace_distance = 0.0;
    double raw_trace_norm = 0.0; // always 2 * half_trace_distance
    DistanceMethod method = DistanceMethod::exact_state;
};

const char* to_string(DistanceMethod m);

// Trace norm ||A||_tr = sum of singular values (A need not be a state).
double trace_norm(const CMatrix& a);

DistanceReport trace_norm_distance(const DensityOperator& a, const DensityOperator& b);
DistanceReport trace_norm_distance(const CMatrix& a, const CMatrix& b);

// Lower-bound estimate of the channel distinguishability
//   max_psi || (I (x) C1)(psi) - (I (x) C2)(psi) ||_tr
// over pure probe (x) input states. Starts from the maximally entangled probe
// (a certified lower bound) and tightens it by alternating-ascent search; the
// report's method records which value won.
DistanceReport channel_distance(const KrausChannel& c1, const KrausChannel& c2,
                                Eigen::Index probe_dim, std::uint64_t seed = 17,
                                int restarts = 3, int max_iters = 60);

// Output trace distance on one fixed probe-extended input (certified lower bound).
DistanceReport channel_output_distance(const KrausChannel& c1, const KrausChannel& c2,
                                       const CMatrix& joint_input, Eigen::Index probe_dim);

} // namespace blindsim::linalg
