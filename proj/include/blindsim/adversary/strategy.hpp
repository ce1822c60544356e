#pragma once

#include "blindsim/adversary/code.hpp"
#include "blindsim/proto/attack.hpp"
#include "blindsim/proto/device.hpp"
#include "blindsim/proto/verify.hpp"

#include <map>
#include <string>
#include <vector>

namespace blindsim::adversary {

// One catalogued way for Bob (or his state supplier) to deviate. Every
// strategy factors through the legal interface: prepare and send only.
struct AdversaryStrategy {
    enum class Kind { Honest, WrongResource, PauliAttack, ChannelAttack, Adaptive };

    Kind kind = Kind::Honest;
    std::string name = "honest";
    std::map<int, linalg::Pauli> site_paulis;               // PauliAttack / Adaptive script
    std::map<int, std::string> site_channel_kinds;          // ChannelAttack: kind per site
    std::map<int, double> site_channel_params;
    std::map<int, linalg::KrausChannel> site_raw_kraus;     // ChannelAttack: explicit operators
    std::string resource_kind;                              // WrongResource: zeros | ghz | random
    std::uint64_t seed = 0;

    bool is_pauli_type() const { return kind == Kind::Honest || kind == Kind::PauliAttack || kind == Kind::Adaptive; }
    // closed-port realization on N positions
    proto::AttackModel attack_model(int n) const;
    // positions touched (for the combinatorial oracle)
    std::map<int, linalg::Pauli> pauli_map(int n) const;
    bool applicable(int n, proto::InputMode mode) const;

    std::string to_json() const;
    static AdversaryStrategy from_json(const std::string& text);

    static std::vector<AdversaryStrategy> library(int n);
};

// Local single-qubit channels used by ChannelAttack sites.
linalg::KrausChannel make_site_channel(const std::string& kind, double param);

// Register state supplied by a wrong-resource strategy, in the open-port
// register convention of the verify variant.
linalg::StateVector wrong_resource_state(const AdversaryStrategy& strategy,
                                         const proto::VerifySystem& sys);

// --- oracles ---------------------------------------------------------------

struct Fraction {
    long long num = 0;
    long long den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Exact probability, over the uniform order-preserving permutation, that the
// logical value flips while no trap fires.
Fraction undetected_error_prob_bruteforce(int n, const CodeConfig& code,
                                          const std::map<int, linalg::Pauli>& attack);

// Exact probability that at least one trap fires.
Fraction trap_flag_prob_bruteforce(int n, const std::map<int, linalg::Pauli>& attack);

struct McEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    long long trials = 0;
};

McEstimate undetected_error_prob_montecarlo(int n, const CodeConfig& code,
                                            const std::map<int, linalg::Pauli>& attack, long long trials,
                                            std::uint64_t seed);

// Probability that the run is accepted with a wrong output. Pauli-type
// strategies delegate to the combinatorial oracle (a worst-case count);
// channel strategies are evaluated exactly on the full dynamics at tier A.
double delta_for_strategy(const AdversaryStrategy& strategy, const proto::VerifySystem& sys);

// Scripted misbehaving devices (w != 0).
proto::DeviceBehavior cheating_device(const std::string& kind);

} // namespace blindsim::adversary
