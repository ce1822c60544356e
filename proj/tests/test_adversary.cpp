#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "blindsim/adversary/strategy.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace blindsim;
using namespace blindsim::adversary;
using linalg::Pauli;

TEST_CASE("brute force oracle on the spec'd pinned cases") {
    const CodeConfig d1 = CodeConfig::tier_a(1);

    // empty attack: nothing flips
    CHECK(undetected_error_prob_bruteforce(3, d1, {}).value() == 0.0);

    // N=3, d=1, X on position 0: flips iff the position is the computation
    // qubit, and then no trap is touched -> 2 of the 6 assignments
    const auto fx = undetected_error_prob_bruteforce(3, d1, {{0, Pauli::X}});
    CHECK(fx.num == 1);
    CHECK(fx.den == 3);

    // Y attacks always flag the touched trap kinds
    const auto fy = undetected_error_prob_bruteforce(3, d1, {{1, Pauli::Y}});
    CHECK(fy.value() == doctest::Approx(1.0 / 3.0));

    // a trap-guaranteed hit: two-site Y,Y at N=3 always touches a trap
    const auto f2 = undetected_error_prob_bruteforce(3, d1, {{0, Pauli::Y}, {1, Pauli::Y}});
    CHECK(f2.value() == doctest::Approx(0.0));
}

TEST_CASE("bound holds for all single- and two-site attacks at small N") {
    const Pauli paulis[] = {Pauli::X, Pauli::Y, Pauli::Z};
    for (int n : {3, 6, 9}) {
        std::vector<CodeConfig> codes{CodeConfig::tier_a(n / 3)};
        if (n / 3 >= 3) codes.push_back(CodeConfig::repetition(3, n / 3));
        for (const auto& code : codes) {
            const double bound = undetected_error_bound(code.distance);
            for (int i = 0; i < n; ++i)
                for (auto p : paulis) {
                    CHECK(undetected_error_prob_bruteforce(n, code, {{i, p}}).value() <= bound + 1e-12);
                    for (int j = i + 1; j < n; ++j)
                        for (auto q : paulis)
                            CHECK(undetected_error_prob_bruteforce(n, code, {{i, p}, {j, q}}).value() <=
                                  bound + 1e-12);
                }
        }
    }
}

TEST_CASE("monte carlo oracle agrees with brute force within three sigma") {
    const CodeConfig d1 = CodeConfig::tier_a(2);
    const std::map<int, Pauli> attack{{0, Pauli::X}, {4, Pauli::Z}};
    const auto exact = undetected_error_prob_bruteforce(6, d1, attack);
    const auto mc = undetected_error_prob_montecarlo(6, d1, attack, 100000, 7);
    CHECK(std::abs(mc.estimate - exact.value()) <= 3.0 * std::max(mc.stderr_, 1e-4));

    const auto empty = undetected_error_prob_montecarlo(3, CodeConfig::tier_a(1), {}, 1000, 3);
    CHECK(empty.estimate == 0.0);
    CHECK(empty.stderr_ == 0.0);
    CHECK_THROWS_AS(undetected_error_prob_montecarlo(3, CodeConfig::tier_a(1), {}, 10, 3),
                    std::invalid_argument);
}

TEST_CASE("enlarging an attack's support never lowers the flag probability") {
    for (int n : {3, 6, 9}) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(n));
        const Pauli paulis[] = {Pauli::X, Pauli::Y, Pauli::Z};
        for (int rep = 0; rep < 30; ++rep) {
            std::map<int, Pauli> attack;
            const int size = 1 + static_cast<int>(rng() % 3);
            while (static_cast<int>(attack.size()) < std::min(size, n))
                attack[static_cast<int>(rng() % n)] = paulis[rng() % 3];
            const double base = trap_flag_prob_bruteforce(n, attack).value();
            std::map<int, Pauli> larger = attack;
            for (int site = 0; site < n; ++site)
                if (!larger.count(site)) {
                    larger[site] = paulis[rng() % 3];
                    break;
                }
            const double grown = trap_flag_prob_bruteforce(n, larger).value();
            CHECK(grown >= base - 1e-12);
        }
    }
}

TEST_CASE("code config invariant: fewer than d touches never flip") {
    const CodeConfig rep3 = CodeConfig::repetition(3, 4);
    CHECK_FALSE(rep3.logical_flipped(0));
    CHECK_FALSE(rep3.logical_flipped(2));
    CHECK(rep3.logical_flipped(3));
    CHECK_THROWS_AS(CodeConfig::repetition(2, 4).validate(4), std::invalid_argument); // even distance
    CHECK_THROWS_AS(CodeConfig::repetition(5, 4), std::invalid_argument);
}

TEST_CASE("delta_for_strategy: oracle delegation and exact evaluation") {
    const proto::VerifySystem sys3 = proto::VerifySystem::make(3, proto::WireProgram{{}, proto::InputMode::Folded});

    AdversaryStrategy honest;
    CHECK(delta_for_strategy(honest, sys3) == 0.0);

    AdversaryStrategy pz;
    pz.kind = AdversaryStrategy::Kind::PauliAttack;
    pz.site_paulis[1] = Pauli::Z;
    CHECK(delta_for_strategy(pz, sys3) == doctest::Approx(1.0 / 3.0));

    // quantum-exact delta never exceeds the combinatorial count
    const auto out = proto::verify_apply(sys3, pz.attack_model(3), proto::DeviceBehavior::honest_device(),
                                         linalg::CMatrix::Identity(1, 1), 0);
    CHECK(out.delta_exact <= delta_for_strategy(pz, sys3) + 1e-12);

    // full depolarizing on every position: exact evaluation stays below the
    // Pauli-mixture average and the verification bound
    AdversaryStrategy depol;
    depol.kind = AdversaryStrategy::Kind::ChannelAttack;
    for (int i = 0; i < 3; ++i) {
        depol.site_channel_kinds[i] = "depolarize";
        depol.site_channel_params[i] = 1.0;
    }
    const double dq = delta_for_strategy(depol, sys3);
    const CodeConfig d1 = CodeConfig::tier_a(1);
    double mixture = 0.0;
    const Pauli all[] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c) {
                std::map<int, Pauli> combo;
                if (all[a] != Pauli::I) combo[0] = all[a];
                if (all[b] != Pauli::I) combo[1] = all[b];
                if (all[c] != Pauli::I) combo[2] = all[c];
                mixture += undetected_error_prob_bruteforce(3, d1, combo).value() / 64.0;
            }
    CHECK(dq <= mixture + 1e-9);
    CHECK(dq <= undetected_error_bound(1) + 1e-12);
    CHECK(dq > 0.0);
}

TEST_CASE("cheating devices") {
    CHECK_THROWS_AS(cheating_device("honest"), std::invalid_argument);
    CHECK_THROWS_AS(cheating_device("0"), std::invalid_argument);

    const auto dev = cheating_device("always_accept");
    const proto::VerifySystem sys = proto::VerifySystem::make(3, proto::WireProgram{{}, proto::InputMode::Folded});

    // against an arbitrary malicious Bob the device still reports e=0
    AdversaryStrategy pz;
    pz.kind = AdversaryStrategy::Kind::PauliAttack;
    pz.site_paulis[0] = Pauli::Z;
    const auto out = proto::verify_apply(sys, pz.attack_model(3), dev, linalg::CMatrix::Identity(1, 1), 0);
    CHECK(out.alpha == doctest::Approx(0.0));

    // against honest Bob the scripted output is returned as-is
    const auto res = proto::run_verify(sys, proto::AttackModel::identity(), dev, 5);
    CHECK(res.flag == 0);
    CHECK((res.rho_out.matrix() - dev.fixed_rho).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("strategy library and JSON round trip") {
    const auto lib = AdversaryStrategy::library(6);
    CHECK(lib.size() >= 10);
    int applicable = 0;
    for (const auto& s : lib) {
        const auto back = AdversaryStrategy::from_json(s.to_json());
        CHECK(back.kind == s.kind);
        CHECK(back.name == s.name);
        CHECK(back.site_paulis == s.site_paulis);
        if (s.applicable(6, proto::InputMode::Folded)) ++applicable;
    }
    CHECK(applicable >= 8);
}

TEST_CASE("wrong-resource states live on the open-port register") {
    const proto::VerifySystem sys = proto::VerifySystem::make(3, proto::WireProgram{{}, proto::InputMode::Folded});
    AdversaryStrategy wr;
    wr.kind = AdversaryStrategy::Kind::WrongResource;
    wr.resource_kind = "ghz";
    const auto st = wrong_resource_state(wr, sys);
    CHECK(st.qubits() == 6);
    const double delta = delta_for_strategy(wr, sys);
    CHECK(delta >= 0.0);
    CHECK(delta <= undetected_error_bound(1) + 1e-9);
}
