#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "blindsim/linalg/paulis.hpp"
#include "blindsim/linalg/qubit_ops.hpp"
#include "blindsim/mbqc/engine.hpp"
#include "blindsim/mbqc/streaming.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace blindsim;
using linalg::CMatrix;
using linalg::Complex;
using linalg::CVector;
using linalg::StateVector;
using namespace blindsim::mbqc;

namespace {

// Enumerates every forced-outcome branch of a pattern and checks that the
// frame-corrected output matches `target` (fidelity within tol). Returns the
// number of admissible branches.
int check_all_branches(const GraphSpec& g, const MeasurementPattern& p, const StateVector& target,
                       double tol = 1e-12) {
    const int m = static_cast<int>(p.steps.size());
    int admissible = 0;
    for (int bits = 0; bits < (1 << m); ++bits) {
        std::vector<int> forced(static_cast<size_t>(m));
        for (int j = 0; j < m; ++j) forced[static_cast<size_t>(j)] = (bits >> j) & 1;
        ForcedOutcomeSource src(forced);
        try {
            const PatternRun run = run_pattern(g, p, src);
            ++admissible;
            const StateVector corrected = correct_byproduct(run.output_state, run.frame);
            CHECK(corrected.fidelity(target) >= 1.0 - tol);
        } catch (const std::invalid_argument&) {
            continue; // zero-probability branch
        }
    }
    return admissible;
}

StateVector apply_u(const CMatrix& u, const StateVector& psi) {
    return StateVector(u * psi.amplitudes());
}

} // namespace

TEST_CASE("build_cluster basics") {
    const StateVector single = build_cluster(GraphSpec::edgeless(1));
    CHECK(single.fidelity(StateVector::plus(1)) == doctest::Approx(1.0));

    // two vertices, one edge: (|0+> + |1->)/sqrt(2) = (1,1,1,-1)/2
    const StateVector pair = build_cluster(GraphSpec::linear(2));
    CVector expected(4);
    expected << 0.5, 0.5, 0.5, -0.5;
    CHECK((pair.amplitudes() - expected).norm() < 1e-14);

    GraphSpec big;
    big.vertex_count = 13;
    CHECK_THROWS_AS(build_cluster(big), std::invalid_argument);
}

TEST_CASE("cluster is edge-order independent") {
    GraphSpec a;
    a.vertex_count = 4;
    a.add_edge(0, 1);
    a.add_edge(1, 2);
    a.add_edge(2, 3);
    GraphSpec b;
    b.vertex_count = 4;
    b.add_edge(2, 3);
    b.add_edge(0, 1);
    b.add_edge(1, 2);
    CHECK((build_cluster(a).amplitudes() - build_cluster(b).amplitudes()).norm() < 1e-15);
}

TEST_CASE("measure_site eigenstate and unbiased cases") {
    ForcedOutcomeSource plus_src({0});
    const auto r = measure_site(StateVector::plus(1), 0, MeasBasis::x(), plus_src);
    CHECK(r.outcome == +1);

    // forcing the minus outcome on an eigenstate is a zero-probability error
    ForcedOutcomeSource minus_src({1});
    CHECK_THROWS_AS(measure_site(StateVector::plus(1), 0, MeasBasis::x(), minus_src), std::invalid_argument);

    // Z on |+> and XY(theta) on |0> are unbiased
    RandomOutcomeSource rng(42);
    int minus_count = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        const auto rr = measure_site(StateVector::plus(1), 0, MeasBasis::z(), rng);
        if (rr.outcome == -1) ++minus_count;
    }
    const double p = static_cast<double>(minus_count) / trials;
    CHECK(std::abs(p - 0.5) < 3.0 * std::sqrt(0.25 / trials));

    for (double theta : {0.3, 1.2, 2.9}) {
        int minus = 0;
        for (int t = 0; t < trials; ++t) {
            const auto rr = measure_site(StateVector::basis(1, 0), 0, MeasBasis::xy(theta), rng);
            if (rr.outcome == -1) ++minus;
        }
        CHECK(std::abs(static_cast<double>(minus) / trials - 0.5) < 3.0 * std::sqrt(0.25 / trials));
    }
}

TEST_CASE("two-vertex wire teleports with H") {
    const auto prog = compile_rotation_chain({0.0});
    const StateVector target = apply_u(prog.realized_unitary, StateVector::plus(1));
    CHECK(target.fidelity(StateVector::basis(1, 0)) == doctest::Approx(1.0)); // J(0)|+> = |0>
    const int branches = check_all_branches(prog.graph, prog.pattern, target);
    CHECK(branches == 2);
}

TEST_CASE("three-vertex wire realizes a Z-type rotation") {
    const double theta = 0.815;
    const auto prog = compile_rotation_chain({-theta, 0.0});
    // J(0) J(-theta) = P(theta) up to phase
    const CMatrix p = linalg::phase_gate(theta);
    const CMatrix u = prog.realized_unitary;
    const Complex ratio = u(0, 0) / p(0, 0);
    CHECK((u - ratio * p).cwiseAbs().maxCoeff() < 1e-12);
    const int branches = check_all_branches(prog.graph, prog.pattern, apply_u(u, StateVector::plus(1)));
    CHECK(branches == 4);
}

TEST_CASE("empty pattern returns the cluster unchanged") {
    const GraphSpec g = GraphSpec::linear(2);
    MeasurementPattern p;
    p.outputs.push_back({0, {}, {}});
    p.outputs.push_back({1, {}, {}});
    ForcedOutcomeSource src({});
    const auto run = run_pattern(g, p, src);
    CHECK(run.output_state.fidelity(build_cluster(g)) == doctest::Approx(1.0));
    CHECK(run.frame.x == std::vector<int>{0, 0});
    CHECK(run.frame.z == std::vector<int>{0, 0});
}

TEST_CASE("branch-exact byproduct tracking on chains up to 4 qubits") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    for (int len = 1; len <= 3; ++len) {
        for (int rep = 0; rep < 4; ++rep) {
            std::vector<double> angles;
            for (int j = 0; j < len; ++j) angles.push_back(angle(rng));
            const auto prog = compile_rotation_chain(angles);
            const StateVector target = apply_u(prog.realized_unitary, StateVector::plus(1));
            const int branches = check_all_branches(prog.graph, prog.pattern, target);
            CHECK(branches == (1 << len));
        }
    }
}

TEST_CASE("entangling block realizes CZ (J x J) on every branch") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    for (int rep = 0; rep < 5; ++rep) {
        const auto prog = compile_entangling_block(angle(rng), angle(rng));
        const StateVector target = apply_u(prog.realized_unitary, StateVector::plus(2));
        const int branches = check_all_branches(prog.graph, prog.pattern, target);
        CHECK(branches == 4);
    }
}

TEST_CASE("100 random adaptive patterns on a 5-qubit wire, all branches") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> angles;
        for (int j = 0; j < 4; ++j) angles.push_back(angle(rng));
        const auto prog = compile_rotation_chain(angles);
        const StateVector target = apply_u(prog.realized_unitary, StateVector::plus(1));
        const int branches = check_all_branches(prog.graph, prog.pattern, target, 1e-9);
        CHECK(branches == 16);
    }
}

TEST_CASE("correct_byproduct basics") {
    std::mt19937_64 rng(5);
    const CVector raw = testutil::random_state_vector(8, rng);
    const StateVector psi{raw};

    const auto zero = ByproductFrame::zero(3);
    CHECK(correct_byproduct(psi, zero).fidelity(psi) == doctest::Approx(1.0));

    // frame (x_1 = 1) undoes an X on site 0
    CVector flipped = raw;
    linalg::apply_1q(flipped, 3, 0, linalg::pauli_x());
    ByproductFrame fx = ByproductFrame::zero(3);
    fx.x[0] = 1;
    CHECK(correct_byproduct(StateVector(flipped), fx).fidelity(psi) == doctest::Approx(1.0));

    // site-wise restriction: sigma_q = I (x) XZ (x) Z corrected exactly
    CVector twisted = raw;
    linalg::apply_1q(twisted, 3, 1, linalg::pauli_x() * linalg::pauli_z());
    linalg::apply_1q(twisted, 3, 2, linalg::pauli_z());
    ByproductFrame fr = ByproductFrame::zero(3);
    fr.x[1] = 1;
    fr.z[1] = 1;
    fr.z[2] = 1;
    CHECK(correct_byproduct(StateVector(twisted), fr).fidelity(psi) == doctest::Approx(1.0));

    // involution up to global phase
    const auto once = correct_byproduct(psi, fr);
    const auto twice = correct_byproduct(once, fr);
    CHECK(twice.fidelity(psi) == doctest::Approx(1.0));

    ByproductFrame wrong = ByproductFrame::zero(2);
    CHECK_THROWS_AS(correct_byproduct(psi, wrong), std::invalid_argument);
}

TEST_CASE("pattern validation rejects malformed programs") {
    const GraphSpec g = GraphSpec::linear(3);
    MeasurementPattern p;
    p.steps.push_back({0, MeasBasis::xy(0.1), {1}, {}}); // depends on a later vertex
    p.outputs.push_back({2, {}, {}});
    CHECK_THROWS_AS(p.validate(g), std::invalid_argument);

    MeasurementPattern q;
    q.steps.push_back({0, MeasBasis::xy(0.1), {}, {}});
    q.outputs.push_back({0, {}, {}}); // output was measured
    CHECK_THROWS_AS(q.validate(g), std::invalid_argument);
}

TEST_CASE("pattern JSON round trip") {
    const auto prog = compile_rotation_chain({0.25, -1.5, 2.75});
    const auto back = MeasurementPattern::from_json(prog.pattern.to_json());
    CHECK(back.steps.size() == prog.pattern.steps.size());
    for (size_t i = 0; i < back.steps.size(); ++i) {
        CHECK(back.steps[i].vertex == prog.pattern.steps[i].vertex);
        CHECK(back.steps[i].basis.angle == doctest::Approx(prog.pattern.steps[i].basis.angle));
        CHECK(back.steps[i].s_domain == prog.pattern.steps[i].s_domain);
    }
    const auto g2 = GraphSpec::from_json(prog.graph.to_json());
    CHECK(g2 == prog.graph);
}

TEST_CASE("streaming engine matches run_pattern on wires") {
    std::mt19937_64 seeder(21);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    for (int rep = 0; rep < 10; ++rep) {
        const double a0 = angle(seeder), a1 = angle(seeder);
        const auto prog = compile_rotation_chain({a0, a1});
        for (int bits = 0; bits < 4; ++bits) {
            std::vector<int> forced = {bits & 1, (bits >> 1) & 1};
            ForcedOutcomeSource src1(forced);
            const auto run = run_pattern(prog.graph, prog.pattern, src1);

            // same wire, streamed lazily
            StreamingGraphEngine eng;
            ForcedOutcomeSource src2(forced);
            eng.create(0);
            eng.create(1);
            eng.entangle(0, 1);
            eng.measure_xy(0, a0, 1, src2);
            eng.create(2);
            eng.entangle(1, 2);
            eng.measure_xy(1, a1, 2, src2);
            const auto frame = eng.frame(2);
            CHECK(frame.x == run.frame.x[0]);
            CHECK(frame.z == run.frame.z[0]);
            CHECK(eng.state_in_order({2}).fidelity(run.output_state) == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("streaming Z measurement deletes a vertex with the graph rule") {
    // chain 0-1-2; Z on middle leaves Z^s on both neighbors and no edge
    for (int forced_bit : {0, 1}) {
        StreamingGraphEngine eng;
        ForcedOutcomeSource src({forced_bit});
        eng.create(0);
        eng.create(1);
        eng.create(2);
        eng.entangle(0, 1);
        eng.entangle(1, 2);
        const int ideal = eng.measure_z(1, src);
        CHECK(ideal == forced_bit);
        // corrected state should be |+>|+>
        auto f0 = eng.frame(0);
        auto f2 = eng.frame(2);
        CHECK(f0.x == 0);
        CHECK(f2.x == 0);
        CHECK(f0.z == ideal);
        CHECK(f2.z == ideal);
        CVector amps = eng.state_in_order({0, 2}).amplitudes();
        linalg::apply_1q(amps, 2, 0, linalg::pauli_xz(0, f0.z).adjoint());
        linalg::apply_1q(amps, 2, 1, linalg::pauli_xz(0, f2.z).adjoint());
        CHECK(StateVector(amps).fidelity(StateVector::plus(2)) == doctest::Approx(1.0));
    }
}

TEST_CASE("streaming engine builds the entangling block lazily") {
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    std::mt19937_64 seeder(3);
    const double ta = angle(seeder), tb = angle(seeder);
    const auto prog = compile_entangling_block(ta, tb);
    const StateVector target = StateVector(prog.realized_unitary * StateVector::plus(2).amplitudes());
    for (int bits = 0; bits < 4; ++bits) {
        StreamingGraphEngine eng;
        ForcedOutcomeSource src({bits & 1, (bits >> 1) & 1});
        eng.create(0); // wire-a input
        eng.create(2); // wire-a output
        eng.entangle(0, 2);
        eng.create(1); // wire-b input
        eng.create(3); // wire-b output
        eng.entangle(1, 3);
        eng.entangle(2, 3); // rung
        eng.measure_xy(0, ta, 2, src);
        eng.measure_xy(1, tb, 3, src);
        auto f2 = eng.frame(2);
        auto f3 = eng.frame(3);
        CVector amps = eng.state_in_order({2, 3}).amplitudes();
        linalg::apply_1q(amps, 2, 0, linalg::pauli_xz(f2.x, f2.z).adjoint());
        linalg::apply_1q(amps, 2, 1, linalg::pauli_xz(f3.x, f3.z).adjoint());
        CHECK(StateVector(amps).fidelity(target) == doctest::Approx(1.0));
    }
}
