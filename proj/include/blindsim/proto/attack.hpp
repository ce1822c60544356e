#pragma once

#include "blindsim/linalg/channel.hpp"
#include "blindsim/linalg/paulis.hpp"

#include <map>
#include <optional>
#include <vector>

namespace blindsim::proto {

// Deviation applied to the qubits Bob holds just before sending them.
struct AttackModel {
    enum class Kind { None, PauliVector, LocalKraus, RegisterChannel };

    Kind kind = Kind::None;
    std::vector<linalg::Pauli> paulis;                // PauliVector: one per position
    std::map<int, linalg::KrausChannel> site_kraus;   // LocalKraus: position -> 1-qubit channel
    std::optional<linalg::KrausChannel> register_channel; // RegisterChannel: on the full register

    bool none() const { return kind == Kind::None; }
    bool is_pauli() const { return kind == Kind::None || kind == Kind::PauliVector; }
    // positions touched by a non-identity component
    std::vector<int> support(int n) const;

    static AttackModel identity() { return {}; }
    static AttackModel pauli(std::vector<linalg::Pauli> p);
    static AttackModel local_channel(std::map<int, linalg::KrausChannel> site_channels);
    static AttackModel on_register(linalg::KrausChannel ch);
};

} // namespace blindsim::proto
