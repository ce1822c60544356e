#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace blindsim::security {

inline constexpr const char* kToolVersion = "blindsim 0.1.0";

struct CheckResult {
    std::string check;
    std::string config_hash;
    std::uint64_t seed = 0;
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
};

std::string to_json(const CheckResult& r);
// full report: {version, config_hash, seed, checks: [...], pass}
std::string report_json(const std::string& config_hash, std::uint64_t seed,
                        const std::vector<CheckResult>& results);
bool all_pass(const std::vector<CheckResult>& results);

} // namespace blindsim::security
