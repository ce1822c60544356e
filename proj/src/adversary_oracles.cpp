#include "blindsim/adversary/strategy.hpp"

#include "blindsim/proto/permutation.hpp"
#include "blindsim/util/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace blindsim::adversary {

using linalg::Pauli;
using proto::PermutationTag;
using proto::Role;

void CodeConfig::validate(int computation_slots) const {
    if (distance <= 0 || distance % 2 == 0) throw std::invalid_argument("code distance must be odd and positive");
    if (static_cast<int>(logical_slots.size()) < distance)
        throw std::invalid_argument("logical support smaller than the code distance");
    for (int s : logical_slots)
        if (s < 0 || s >= computation_slots) throw std::invalid_argument("logical slot out of range");
}

CodeConfig CodeConfig::tier_a(int computation_slots) {
    CodeConfig c;
    c.distance = 1;
    for (int s = 0; s < computation_slots; ++s) c.logical_slots.push_back(s);
    return c;
}

CodeConfig CodeConfig::repetition(int distance, int computation_slots) {
    if (distance > computation_slots)
        throw std::invalid_argument("repetition distance exceeds the computation block");
    CodeConfig c;
    c.distance = distance;
    for (int s = 0; s < distance; ++s) c.logical_slots.push_back(s);
    return c;
}

double undetected_error_bound(int distance) { return std::pow(2.0 / 3.0, distance / 3.0); }

namespace {

// X-type support flips a |0> trap; Z-type flips a |+> trap; Y flips both.
bool flags_trap(Role role, Pauli p) {
    if (role == Role::TrapZ) return p == Pauli::X || p == Pauli::Y;
    if (role == Role::TrapX) return p == Pauli::Z || p == Pauli::Y;
    return false;
}

struct Outcome {
    bool flipped = false;
    bool flagged = false;
};

struct SiteAttack {
    int site = 0;
    Pauli pauli = Pauli::I;
};

// Allocation-free evaluation against a packed role string.
Outcome evaluate_roles(const std::vector<Role>& roles, const CodeConfig& code,
                       const std::vector<SiteAttack>& attack) {
    Outcome out;
    int touched_logical = 0;
    for (const auto& [site, p] : attack) {
        const Role role = roles[static_cast<size_t>(site)];
        if (flags_trap(role, p)) out.flagged = true;
        if (role == Role::Computation) {
            int slot = 0; // rank among the computation positions
            for (int q = 0; q < site; ++q)
                if (roles[static_cast<size_t>(q)] == Role::Computation) ++slot;
            if (std::find(code.logical_slots.begin(), code.logical_slots.end(), slot) !=
                code.logical_slots.end())
                ++touched_logical;
        }
    }
    out.flipped = code.logical_flipped(touched_logical);
    return out;
}

std::vector<SiteAttack> pack_attack(int n, const std::map<int, Pauli>& attack) {
    std::vector<SiteAttack> packed;
    for (const auto& [site, p] : attack) {
        if (site < 0 || site >= n) throw std::invalid_argument("attack site out of range");
        if (p != Pauli::I) packed.push_back({site, p});
    }
    return packed;
}

// Cached role strings of every order-preserving assignment.
const std::vector<std::vector<Role>>& all_role_strings(int n) {
    static std::map<int, std::vector<std::vector<Role>>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<std::vector<Role>> table;
    for (const auto& tag : PermutationTag::enumerate_all(n)) table.push_back(tag.roles());
    return cache.emplace(n, std::move(table)).first->second;
}

} // namespace

Fraction undetected_error_prob_bruteforce(int n, const CodeConfig& code,
                                          const std::map<int, Pauli>& attack) {
    if (n % 3 != 0 || n <= 0) throw std::invalid_argument("position count must be a positive multiple of 3");
    if (n > 12) throw std::invalid_argument("exhaustive enumeration capped at N=12");
    code.validate(n / 3);
    const auto packed = pack_attack(n, attack);
    long long hits = 0, total = 0;
    for (const auto& roles : all_role_strings(n)) {
        ++total;
        const Outcome o = evaluate_roles(roles, code, packed);
        if (o.flipped && !o.flagged) ++hits;
    }
    const long long g = std::gcd(std::max(hits, 1LL), total);
    return hits == 0 ? Fraction{0, total} : Fraction{hits / g, total / g};
}

Fraction trap_flag_prob_bruteforce(int n, const std::map<int, Pauli>& attack) {
    if (n % 3 != 0 || n <= 0 || n > 12) throw std::invalid_argument("bad position count");
    const auto packed = pack_attack(n, attack);
    long long hits = 0, total = 0;
    for (const auto& roles : all_role_strings(n)) {
        ++total;
        bool flagged = false;
        for (const auto& [site, p] : packed) flagged |= flags_trap(roles[static_cast<size_t>(site)], p);
        if (flagged) ++hits;
    }
    const long long g = std::gcd(std::max(hits, 1LL), total);
    return hits == 0 ? Fraction{0, total} : Fraction{hits / g, total / g};
}

McEstimate undetected_error_prob_montecarlo(int n, const CodeConfig& code,
                                            const std::map<int, Pauli>& attack, long long trials,
                                            std::uint64_t seed) {
    if (trials < 1000) throw std::invalid_argument("at least 10^3 trials");
    code.validate(n / 3);
    const auto packed = pack_attack(n, attack);
    std::mt19937_64 rng(seed);
    std::vector<Role> pool;
    for (int i = 0; i < n / 3; ++i) {
        pool.push_back(Role::Computation);
        pool.push_back(Role::TrapX);
        pool.push_back(Role::TrapZ);
    }
    long long hits = 0;
    std::vector<Role> roles = pool;
    for (long long t = 0; t < trials; ++t) {
        roles = pool;
        for (int i = n - 1; i > 0; --i) {
            const int j = std::min(static_cast<int>(util::uniform01(rng) * (i + 1)), i);
            std::swap(roles[static_cast<size_t>(i)], roles[static_cast<size_t>(j)]);
        }
        const Outcome o = evaluate_roles(roles, code, packed);
        if (o.flipped && !o.flagged) ++hits;
    }
    McEstimate e;
    e.trials = trials;
    e.estimate = static_cast<double>(hits) / static_cast<double>(trials);
    e.stderr_ = std::sqrt(std::max(e.estimate * (1.0 - e.estimate), 0.0) / static_cast<double>(trials));
    return e;
}

double delta_for_strategy(const AdversaryStrategy& strategy, const proto::VerifySystem& sys) {
    if (!strategy.applicable(sys.n, sys.program.input_mode))
        throw std::invalid_argument("strategy not implementable at this configuration");
    if (strategy.kind == AdversaryStrategy::Kind::Honest) return 0.0;
    if (strategy.is_pauli_type()) {
        const auto attack = strategy.pauli_map(sys.n);
        const CodeConfig code = CodeConfig::tier_a(sys.n / 3);
        return undetected_error_prob_bruteforce(sys.n, code, attack).value();
    }
    // exact density-operator evaluation at tier A
    const int d1 = sys.d1_qubits();
    linalg::CMatrix joint;
    int d3 = 0;
    if (d1 == 1) {
        linalg::CVector bell(4);
        bell << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
        joint = bell * bell.adjoint();
        d3 = 1;
    } else {
        joint = linalg::CMatrix::Identity(1, 1);
    }
    if (strategy.kind == AdversaryStrategy::Kind::WrongResource) {
        const linalg::StateVector reg = wrong_resource_state(strategy, sys);
        const linalg::CMatrix reg_rho = reg.amplitudes() * reg.amplitudes().adjoint();
        const auto open = proto::verify_apply_open(sys, proto::DeviceBehavior::honest_device(), reg_rho, 0);
        return open.delta_exact;
    }
    const auto out = proto::verify_apply(sys, strategy.attack_model(sys.n),
                                         proto::DeviceBehavior::honest_device(), joint, d3);
    return out.delta_exact;
}

} // namespace blindsim::adversary
