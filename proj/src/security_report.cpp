#include "blindsim/security/report.hpp"

#include <json.hpp>

namespace blindsim::security {

std::string to_json(const CheckResult& r) {
    nlohmann::json j;
    j["check"] = r.check;
    j["config_hash"] = r.config_hash;
    j["seed"] = r.seed;
    j["measured"] = r.measured;
    j["bound"] = r.bound;
    j["pass"] = r.pass;
    return j.dump();
}

std::string report_json(const std::string& config_hash, std::uint64_t seed,
                        const std::vector<CheckResult>& results) {
    nlohmann::json j;
    j["version"] = kToolVersion;
    j["config_hash"] = config_hash;
    j["seed"] = seed;
    auto arr = nlohmann::json::array();
    for (const auto& r : results) arr.push_back(nlohmann::json::parse(to_json(r)));
    j["checks"] = arr;
    j["pass"] = all_pass(results);
    return j.dump(2) + "\n";
}

bool all_pass(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

} // namespace blindsim::security
