#pragma once

#include "blindsim/linalg/channel.hpp"

#include <optional>
#include <string>

namespace blindsim::proto {

// Behavior of Alice's measurement device. w == "0" is the honest device; any
// other tag selects a deterministic scripted behavior that produces
// (rho_out, e) from whatever the device received.
struct DeviceBehavior {
    enum class Kind { Honest, FixedOutput, NoisyHonest };

    Kind kind = Kind::Honest;
    std::string w = "0";
    linalg::CMatrix fixed_rho;  // FixedOutput: the scripted output state
    int fixed_flag = 0;         // FixedOutput: the scripted e
    double noise = 0.0;         // NoisyHonest: output depolarizing strength

    bool honest() const { return kind == Kind::Honest; }

    static DeviceBehavior honest_device() { return {}; }
    static DeviceBehavior fixed_output(const linalg::CMatrix& rho, int flag, const std::string& tag);
    static DeviceBehavior noisy_honest(double strength, const std::string& tag);
};

} // namespace blindsim::proto
