#include "blindsim/security/composition.hpp"

#include "blindsim/linalg/channel.hpp"
#include "blindsim/util/random.hpp"

#include <random>
#include <thread>

namespace blindsim::security {

using linalg::CMatrix;
using linalg::Complex;
using linalg::CVector;
using linalg::KrausChannel;

namespace {

CMatrix random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMatrix a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
    Eigen::HouseholderQR<CMatrix> qr(a);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < dim; ++i) {
        const Complex d = r(i, i);
        if (std::abs(d) > 1e-14) q.col(i) *= d / std::abs(d);
    }
    return q;
}

KrausChannel random_channel(std::mt19937_64& rng, Eigen::Index dim = 2, Eigen::Index env = 2) {
    const CMatrix u = random_unitary(dim * env, rng);
    std::vector<CMatrix> ops;
    for (Eigen::Index e = 0; e < env; ++e) {
        CMatrix k(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i)
            for (Eigen::Index j = 0; j < dim; ++j) k(i, j) = u(i * env + e, j * env + 0);
        ops.push_back(std::move(k));
    }
    return KrausChannel(std::move(ops));
}

CVector random_pure(Eigen::Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CVector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(g(rng), g(rng));
    v.normalize();
    return v;
}

// embeds a single-qubit channel at a qubit slot of an n-qubit register
KrausChannel embed_1q(const KrausChannel& ch, int n, int slot) {
    std::vector<CMatrix> ops;
    const Eigen::Index left = Eigen::Index{1} << slot;
    const Eigen::Index right = Eigen::Index{1} << (n - slot - 1);
    const CMatrix il = CMatrix::Identity(left, left), ir = CMatrix::Identity(right, right);
    for (const auto& k : ch.kraus_ops()) ops.push_back(linalg::kron(linalg::kron(il, k), ir));
    return KrausChannel(std::move(ops), false);
}

double output_gap(const KrausChannel& a, const KrausChannel& b, const CMatrix& rho) {
    return linalg::trace_norm(a.apply_matrix(rho) - b.apply_matrix(rho)) / 2.0;
}

} // namespace

CompositionOutcome serial_composition_check(int trials, std::uint64_t seed, int family_size) {
    CompositionOutcome outcome;
    outcome.trials.resize(static_cast<size_t>(trials));
    auto run_trial = [&](int t) {
        const std::uint64_t trial_seed = util::split_seed(seed, static_cast<std::uint64_t>(t));
        std::mt19937_64 rng(trial_seed);

        const KrausChannel r_res = random_channel(rng);
        const KrausChannel s_res = random_channel(rng);
        const KrausChannel t_res = random_channel(rng);
        const KrausChannel pi = random_channel(rng);
        const KrausChannel pi2 = random_channel(rng);
        const KrausChannel sigma = random_channel(rng);
        const KrausChannel sigma2 = random_channel(rng);

        // all systems on one qubit, probe on one more (slot 0 = probe)
        const KrausChannel real1 = embed_1q(pi.compose_after(r_res), 2, 1);
        const KrausChannel ideal1 = embed_1q(s_res.compose_after(sigma), 2, 1);
        const KrausChannel real2 = embed_1q(pi2.compose_after(s_res), 2, 1);
        const KrausChannel ideal2 = embed_1q(t_res.compose_after(sigma2), 2, 1);
        const KrausChannel sigma_emb = embed_1q(sigma, 2, 1);
        const KrausChannel composed_real = embed_1q(pi2.compose_after(pi).compose_after(r_res), 2, 1);
        const KrausChannel composed_ideal =
            embed_1q(t_res.compose_after(sigma2).compose_after(sigma), 2, 1);

        std::vector<CMatrix> family;
        {
            CVector ent = CVector::Zero(4);
            ent(0) = ent(3) = 1.0 / std::sqrt(2.0);
            family.push_back(ent * ent.adjoint());
        }
        for (int k = 1; k < family_size; ++k) {
            const CVector v = random_pure(4, rng);
            family.push_back(v * v.adjoint());
        }

        CompositionTrial trial;
        trial.seed = trial_seed;
        for (const auto& eta : family) {
            trial.epsilon = std::max(trial.epsilon, output_gap(real1, ideal1, eta));
            trial.epsilon_prime = std::max(trial.epsilon_prime, output_gap(real2, ideal2, eta));
            // the second construction is also exercised at the simulator image
            trial.epsilon_prime =
                std::max(trial.epsilon_prime, output_gap(real2, ideal2, sigma_emb.apply_matrix(eta)));
            trial.composed = std::max(trial.composed, output_gap(composed_real, composed_ideal, eta));
        }
        trial.pass = trial.composed <= trial.epsilon + trial.epsilon_prime + 1e-9;
        outcome.trials[static_cast<size_t>(t)] = trial;
    };
    for (int t = 0; t < trials; ++t) run_trial(t);
    for (const auto& trial : outcome.trials) {
        outcome.max_excess =
            std::max(outcome.max_excess, trial.composed - (trial.epsilon + trial.epsilon_prime));
        if (!trial.pass) ++outcome.failures;
    }
    return outcome;
}

CompositionOutcome parallel_composition_check(int trials, std::uint64_t seed, int family_size) {
    CompositionOutcome outcome;
    outcome.trials.resize(static_cast<size_t>(trials));
    auto run_trial = [&](int t) {
        const std::uint64_t trial_seed = util::split_seed(seed ^ 0x5bd1e995, static_cast<std::uint64_t>(t));
        std::mt19937_64 rng(trial_seed);

        const KrausChannel r1 = random_channel(rng), s1 = random_channel(rng);
        const KrausChannel pi1 = random_channel(rng), sg1 = random_channel(rng);
        const KrausChannel r2 = random_channel(rng), s2 = random_channel(rng);
        const KrausChannel pi2 = random_channel(rng), sg2 = random_channel(rng);

        // register: probe (slot 0), system 1 (slot 1), system 2 (slot 2)
        const KrausChannel realA = embed_1q(pi1.compose_after(r1), 3, 1);
        const KrausChannel idealA = embed_1q(s1.compose_after(sg1), 3, 1);
        const KrausChannel realB = embed_1q(pi2.compose_after(r2), 3, 2);
        const KrausChannel idealB = embed_1q(s2.compose_after(sg2), 3, 2);
        const KrausChannel composed_real = realB.compose_after(realA);
        const KrausChannel composed_ideal = idealB.compose_after(idealA);

        std::vector<CMatrix> family;
        {
            // probe maximally entangled with system 1, system 2 in |+>
            CVector ent = CVector::Zero(4);
            ent(0) = ent(3) = 1.0 / std::sqrt(2.0);
            CVector plus(2);
            plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
            CVector v = linalg::kron(ent, plus);
            // reorder [probe sys1 sys2] already correct
            family.push_back(v * v.adjoint());
        }
        for (int k = 1; k < family_size; ++k) {
            const CVector v = random_pure(8, rng);
            family.push_back(v * v.adjoint());
        }

        CompositionTrial trial;
        trial.seed = trial_seed;
        for (const auto& eta : family) {
            trial.epsilon = std::max(trial.epsilon, output_gap(realA, idealA, eta));
            trial.epsilon_prime = std::max(trial.epsilon_prime, output_gap(realB, idealB, eta));
            trial.epsilon_prime =
                std::max(trial.epsilon_prime, output_gap(realB, idealB, idealA.apply_matrix(eta)));
            trial.composed = std::max(trial.composed, output_gap(composed_real, composed_ideal, eta));
        }
        trial.pass = trial.composed <= trial.epsilon + trial.epsilon_prime + 1e-9;
        outcome.trials[static_cast<size_t>(t)] = trial;
    };
    for (int t = 0; t < trials; ++t) run_trial(t);
    for (const auto& trial : outcome.trials) {
        outcome.max_excess =
            std::max(outcome.max_excess, trial.composed - (trial.epsilon + trial.epsilon_prime));
        if (!trial.pass) ++outcome.failures;
    }
    return outcome;
}

} // namespace blindsim::security
