#pragma once

#include "blindsim/linalg/channel.hpp"
#include "blindsim/linalg/state.hpp"

#include <random>

namespace blindsim::testutil {

using linalg::CMatrix;
using linalg::Complex;
using linalg::CVector;

inline CVector random_state_vector(Eigen::Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CVector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(g(rng), g(rng));
    v.normalize();
    return v;
}

inline CMatrix random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMatrix a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
    Eigen::HouseholderQR<CMatrix> qr(a);
    CMatrix q = qr.householderQ();
    CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < dim; ++i) {
        const Complex d = r(i, i);
        if (std::abs(d) > 1e-14) q.col(i) *= d / std::abs(d);
    }
    return q;
}

inline linalg::DensityOperator random_density(int qubits, std::mt19937_64& rng, int rank = 0) {
    const Eigen::Index d = Eigen::Index{1} << qubits;
    if (rank <= 0) rank = static_cast<int>(d);
    CMatrix m = CMatrix::Zero(d, d);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    double total = 0;
    std::vector<double> w;
    for (int k = 0; k < rank; ++k) {
        w.push_back(u(rng));
        total += w.back();
    }
    for (int k = 0; k < rank; ++k) {
        const CVector v = random_state_vector(d, rng);
        m += (w[static_cast<size_t>(k)] / total) * (v * v.adjoint());
    }
    return linalg::DensityOperator(0.5 * (m + m.adjoint()));
}

// Random CPTP map via a Stinespring dilation with `env` environment levels.
inline linalg::KrausChannel random_channel(Eigen::Index dim, std::mt19937_64& rng, Eigen::Index env = 2) {
    const CMatrix u = random_unitary(dim * env, rng);
    std::vector<CMatrix> ops;
    for (Eigen::Index e = 0; e < env; ++e) {
        // K_e = (I (x) <e|) U (I (x) |0>), system most significant
        CMatrix k(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i)
            for (Eigen::Index j = 0; j < dim; ++j) k(i, j) = u(i * env + e, j * env + 0);
        ops.push_back(std::move(k));
    }
    return linalg::KrausChannel(std::move(ops));
}

} // namespace blindsim::testutil
