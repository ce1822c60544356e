#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "blindsim/linalg/channel.hpp"
#include "blindsim/linalg/distance.hpp"
#include "blindsim/linalg/paulis.hpp"
#include "blindsim/linalg/qubit_ops.hpp"
#include "blindsim/linalg/state.hpp"
#include "test_util.hpp"

using namespace blindsim;
using linalg::CMatrix;
using linalg::Complex;
using linalg::CVector;
using linalg::DensityOperator;
using linalg::KrausChannel;
using linalg::StateVector;

TEST_CASE("tensor of basis states") {
    const StateVector zero = StateVector::basis(1, 0);
    const StateVector one = StateVector::basis(1, 1);
    const StateVector t = linalg::tensor(zero, one);
    REQUIRE(t.dim() == 4);
    CHECK(std::abs(t.amp(1) - 1.0) < 1e-15); // |0>|1> -> index 01
    CHECK(std::abs(t.amp(0)) < 1e-15);
    CHECK(std::abs(t.amp(2)) < 1e-15);
    CHECK(std::abs(t.amp(3)) < 1e-15);
}

TEST_CASE("tensor identity and uniform state") {
    const CMatrix i2 = CMatrix::Identity(2, 2);
    const CMatrix i4 = linalg::kron(i2, i2);
    CHECK((i4 - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

    const StateVector plus = StateVector::plus(1);
    const StateVector pp = linalg::tensor(plus, plus);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(pp.amp(static_cast<std::uint64_t>(i)) - 0.5) < 1e-14);
}

TEST_CASE("state invariants enforced") {
    CVector bad(2);
    bad << 1.0, 1.0;
    CHECK_THROWS_AS(StateVector{bad}, std::invalid_argument);
    CVector odd = CVector::Zero(3);
    odd(0) = 1.0;
    CHECK_THROWS_AS(StateVector{odd}, std::invalid_argument);
}

TEST_CASE("density operator invariants enforced") {
    CMatrix not_herm(2, 2);
    not_herm << 1.0, Complex(0, 0.5), 0.0, 0.0;
    CHECK_THROWS_AS(DensityOperator{not_herm}, std::invalid_argument);
    CMatrix neg(2, 2);
    neg << 1.5, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS(DensityOperator{neg}, std::invalid_argument);
    CMatrix bad_trace = CMatrix::Identity(2, 2);
    CHECK_THROWS_AS(DensityOperator{bad_trace}, std::invalid_argument);
}

TEST_CASE("partial trace of Bell state is maximally mixed") {
    CVector bell(4);
    bell << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
    const DensityOperator rho = DensityOperator::pure(StateVector(bell));
    const DensityOperator red = linalg::partial_trace(rho, {2, 2}, {0});
    CHECK((red.matrix() - 0.5 * CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("partial trace of product state and keep-all") {
    std::mt19937_64 rng(7);
    const DensityOperator a = testutil::random_density(1, rng);
    const DensityOperator b = testutil::random_density(1, rng);
    const DensityOperator ab = linalg::tensor(a, b);
    const DensityOperator red = linalg::partial_trace(ab, {2, 2}, {0});
    CHECK((red.matrix() - a.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    const DensityOperator all = linalg::partial_trace(ab, {2, 2}, {0, 1});
    CHECK((all.matrix() - ab.matrix()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK_THROWS_AS(linalg::partial_trace(ab, {2, 2}, {2}), std::invalid_argument);
    CHECK_THROWS_AS(linalg::partial_trace(ab, {2, 3}, {0}), std::invalid_argument);
}

TEST_CASE("partial trace preserves trace on mixed-radix systems") {
    std::mt19937_64 rng(11);
    // 2 (x) 2 (x) 2 register treated as dims {2,4}
    const DensityOperator rho = testutil::random_density(3, rng);
    const DensityOperator red = linalg::partial_trace(rho, {2, 4}, {1});
    CHECK(std::abs(red.matrix().trace().real() - 1.0) < 1e-12);
}

TEST_CASE("trace norm distance basics") {
    const DensityOperator z0 = DensityOperator::pure(StateVector::basis(1, 0));
    const DensityOperator z1 = DensityOperator::pure(StateVector::basis(1, 1));
    const auto orth = linalg::trace_norm_distance(z0, z1);
    CHECK(orth.raw_trace_norm == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(orth.half_trace_distance == doctest::Approx(1.0).epsilon(1e-12));

    const auto self = linalg::trace_norm_distance(z0, z0);
    CHECK(self.raw_trace_norm == 0.0);

    // |0><0| vs |+><+|: eigenvalues of the difference are +-1/sqrt(2),
    // frozen from the 2x2 characteristic polynomial.
    const DensityOperator plus = DensityOperator::pure(StateVector::plus(1));
    const auto rep = linalg::trace_norm_distance(z0, plus);
    CHECK(rep.half_trace_distance == doctest::Approx(0.70710678118654752).epsilon(1e-12));
    CHECK(rep.raw_trace_norm == doctest::Approx(2.0 * rep.half_trace_distance).epsilon(1e-12));
}

TEST_CASE("trace norm distance is a metric on random triples") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 25; ++trial) {
        const auto a = testutil::random_density(2, rng);
        const auto b = testutil::random_density(2, rng);
        const auto c = testutil::random_density(2, rng);
        const double dab = linalg::trace_norm_distance(a, b).half_trace_distance;
        const double dba = linalg::trace_norm_distance(b, a).half_trace_distance;
        const double dac = linalg::trace_norm_distance(a, c).half_trace_distance;
        const double dcb = linalg::trace_norm_distance(c, b).half_trace_distance;
        CHECK(std::abs(dab - dba) < 1e-9);
        CHECK(dab <= dac + dcb + 1e-9);
        CHECK(linalg::trace_norm_distance(a, a).half_trace_distance < 1e-12);
        if (dab < 1e-12) CHECK((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("apply_channel basics and invariant preservation") {
    const DensityOperator plus = DensityOperator::pure(StateVector::plus(1));

    const auto ident = KrausChannel::identity(2);
    CHECK((linalg::apply_channel(ident, plus).matrix() - plus.matrix()).cwiseAbs().maxCoeff() < 1e-14);

    // completely dephasing channel
    std::vector<CMatrix> deph;
    CMatrix p0 = CMatrix::Zero(2, 2), p1 = CMatrix::Zero(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    deph.push_back(p0);
    deph.push_back(p1);
    const KrausChannel dephase{std::move(deph)};
    CHECK((dephase.apply_matrix(plus.matrix()) - 0.5 * CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);

    const auto xflip = KrausChannel::from_unitary(linalg::pauli_x());
    const DensityOperator z0 = DensityOperator::pure(StateVector::basis(1, 0));
    const DensityOperator z1 = DensityOperator::pure(StateVector::basis(1, 1));
    CHECK((xflip.apply_matrix(z0.matrix()) - z1.matrix()).cwiseAbs().maxCoeff() < 1e-14);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const auto ch = testutil::random_channel(4, rng, 3);
        const auto rho = testutil::random_density(2, rng);
        CHECK_NOTHROW(linalg::apply_channel(ch, rho)); // output passes invariants
    }
}

TEST_CASE("kraus channel trace preservation enforced") {
    std::vector<CMatrix> half{0.5 * CMatrix::Identity(2, 2)};
    CHECK_THROWS_AS(KrausChannel{std::move(half)}, std::invalid_argument);
}

TEST_CASE("data processing inequality on random channels") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const auto ch = testutil::random_channel(4, rng, 2);
        const auto a = testutil::random_density(2, rng);
        const auto b = testutil::random_density(2, rng);
        const double before = linalg::trace_norm_distance(a, b).half_trace_distance;
        const double after =
            linalg::trace_norm_distance(ch.apply_matrix(a.matrix()), ch.apply_matrix(b.matrix())).half_trace_distance;
        CHECK(after <= before + 1e-9);
    }
}

TEST_CASE("channel distance basics") {
    const auto ident = KrausChannel::identity(2);
    const auto same = linalg::channel_distance(ident, ident, 2);
    CHECK(same.raw_trace_norm == 0.0);

    const auto xconj = KrausChannel::from_unitary(linalg::pauli_x());
    const auto rep = linalg::channel_distance(ident, xconj, 2);
    CHECK(rep.raw_trace_norm == doctest::Approx(2.0).epsilon(1e-9));

    // identity vs identity with a global phase
    const auto phased = KrausChannel::from_unitary(std::exp(Complex(0, 0.73)) * CMatrix::Identity(2, 2));
    const auto none = linalg::channel_distance(ident, phased, 2);
    CHECK(none.raw_trace_norm < 1e-10);
}

TEST_CASE("channel distance dominates fixed-probe output distance") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 8; ++trial) {
        const auto c1 = testutil::random_channel(2, rng);
        const auto c2 = testutil::random_channel(2, rng);
        const auto est = linalg::channel_distance(c1, c2, 2, /*seed=*/trial);
        for (int k = 0; k < 5; ++k) {
            const CVector probe = testutil::random_state_vector(4, rng);
            const auto fixed = linalg::channel_output_distance(c1, c2, probe * probe.adjoint(), 2);
            CHECK(fixed.raw_trace_norm <= est.raw_trace_norm + 1e-9);
        }
    }
}

TEST_CASE("choi round trip") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 6; ++trial) {
        const auto ch = testutil::random_channel(4, rng, 2);
        const auto back = KrausChannel::from_choi(ch.choi(), 4, 4);
        const auto rho = testutil::random_density(2, rng);
        CHECK((ch.apply_matrix(rho.matrix()) - back.apply_matrix(rho.matrix())).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("qubit register helpers") {
    // qubit 0 is most significant: X on qubit 0 of |00> gives |10> = index 2
    CVector psi = CVector::Zero(4);
    psi(0) = 1.0;
    linalg::apply_1q(psi, 2, 0, linalg::pauli_x());
    CHECK(std::abs(psi(2) - 1.0) < 1e-15);

    // CZ phase only on |11>
    CVector pp = CVector::Constant(4, Complex(0.5, 0));
    linalg::apply_cz(pp, 2, 0, 1);
    CHECK(std::abs(pp(3) + 0.5) < 1e-15);
    CHECK(std::abs(pp(1) - 0.5) < 1e-15);

    // insert/project round trip
    CVector one_qubit(2);
    one_qubit << 0.6, 0.8;
    CVector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const CVector two = linalg::insert_qubit(one_qubit, 1, 1, plus);
    const CVector back = linalg::project_out_qubit(two, 2, 1, plus);
    CHECK((back - one_qubit).norm() < 1e-14);
}
