#include "blindsim/linalg/qubit_ops.hpp"

#include <stdexcept>

namespace blindsim::linalg {

std::uint64_t bit_mask(int n, int qubit) { return std::uint64_t{1} << (n - 1 - qubit); }

void apply_1q(CVector& psi, int n, int qubit, const CMatrix& u) {
    if (qubit < 0 || qubit >= n) throw std::invalid_argument("qubit out of range");
    const std::uint64_t mask = bit_mask(n, qubit);
    const Eigen::Index d = psi.size();
    for (Eigen::Index i = 0; i < d; ++i) {
        if (static_cast<std::uint64_t>(i) & mask) continue;
        const Eigen::Index j = static_cast<Eigen::Index>(static_cast<std::uint64_t>(i) | mask);
        const Complex a = psi(i), b = psi(j);
        psi(i) = u(0, 0) * a + u(0, 1) * b;
        psi(j) = u(1, 0) * a + u(1, 1) * b;
    }
}

void apply_2q(CVector& psi, int n, int a, int b, const CMatrix& u) {
    if (a == b || a < 0 || b < 0 || a >= n || b >= n) throw std::invalid_argument("bad qubit pair");
    const std::uint64_t ma = bit_mask(n, a), mb = bit_mask(n, b);
    const Eigen::Index d = psi.size();
    for (Eigen::Index i = 0; i < d; ++i) {
        const auto ui = static_cast<std::uint64_t>(i);
        if ((ui & ma) || (ui & mb)) continue;
        Eigen::Index idx[4] = {i, static_cast<Eigen::Index>(ui | mb), static_cast<Eigen::Index>(ui | ma),
                               static_cast<Eigen::Index>(ui | ma | mb)};
        Complex v[4];
        for (int k = 0; k < 4; ++k) v[k] = psi(idx[k]);
        for (int r = 0; r < 4; ++r) {
            Complex acc = 0;
            for (int c = 0; c < 4; ++c) acc += u(r, c) * v[c];
            psi(idx[r]) = acc;
        }
    }
}

void apply_cz(CVector& psi, int n, int a, int b) {
    const std::uint64_t ma = bit_mask(n, a), mb = bit_mask(n, b);
    const Eigen::Index d = psi.size();
    for (Eigen::Index i = 0; i < d; ++i) {
        const auto ui = static_cast<std::uint64_t>(i);
        if ((ui & ma) && (ui & mb)) psi(i) = -psi(i);
    }
}

void apply_1q(CMatrix& rho, int n, int qubit, const CMatrix& u) {
    const Eigen::Index d = rho.rows();
    CMatrix out = rho;
    // apply on rows (U rho), then on columns (.. U^dag)
    for (Eigen::Index col = 0; col < d; ++col) {
        CVector column = out.col(col);
        apply_1q(column, n, qubit, u);
        out.col(col) = column;
    }
    const CMatrix udag = u.adjoint();
    for (Eigen::Index row = 0; row < d; ++row) {
        CVector r = out.row(row).transpose();
        apply_1q(r, n, qubit, udag.transpose());
        out.row(row) = r.transpose();
    }
    rho = std::move(out);
}

void apply_2q(CMatrix& rho, int n, int a, int b, const CMatrix& u) {
    const Eigen::Index d = rho.rows();
    CMatrix out = rho;
    for (Eigen::Index col = 0; col < d; ++col) {
        CVector column = out.col(col);
        apply_2q(column, n, a, b, u);
        out.col(col) = column;
    }
    const CMatrix ut = u.adjoint().transpose();
    for (Eigen::Index row = 0; row < d; ++row) {
        CVector r = out.row(row).transpose();
        apply_2q(r, n, a, b, ut);
        out.row(row) = r.transpose();
    }
    rho = std::move(out);
}

CVector project_out_qubit(const CVector& psi, int n, int qubit, const CVector& ket) {
    if (ket.size() != 2) throw std::invalid_argument("ket must be a single-qubit state");
    const std::uint64_t mask = bit_mask(n, qubit);
    CVector out = CVector::Zero(psi.size() / 2);
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        const auto ui = static_cast<std::uint64_t>(i);
        const int bit = (ui & mask) ? 1 : 0;
        const std::uint64_t upper = (ui & ~((mask << 1) - 1)) >> 1;
        const std::uint64_t lower = ui & (mask - 1);
        const std::uint64_t j = upper | lower;
        out(static_cast<Eigen::Index>(j)) += std::conj(ket(bit)) * psi(i);
    }
    return out;
}

CVector project_out_qubit_pair(const CVector& psi, int n, int a, int b, const CVector& ket) {
    if (ket.size() != 4) throw std::invalid_argument("ket must be a two-qubit state");
    if (a == b) throw std::invalid_argument("bad qubit pair");
    const std::uint64_t ma = bit_mask(n, a), mb = bit_mask(n, b);
    CVector out = CVector::Zero(psi.size() / 4);
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        const auto ui = static_cast<std::uint64_t>(i);
        const int ba = (ui & ma) ? 1 : 0;
        const int bb = (ui & mb) ? 1 : 0;
        // Remove both bits, higher position first.
        const std::uint64_t mhi = std::max(ma, mb), mlo = std::min(ma, mb);
        std::uint64_t j = ui;
        j = ((j & ~((mhi << 1) - 1)) >> 1) | (j & (mhi - 1));
        j = ((j & ~((mlo << 1) - 1)) >> 1) | (j & (mlo - 1));
        out(static_cast<Eigen::Index>(j)) += std::conj(ket(2 * ba + bb)) * psi(i);
    }
    return out;
}

CVector insert_qubit(const CVector& psi, int n, int pos, const CVector& ket) {
    if (ket.size() != 2) throw std::invalid_argument("ket must be a single-qubit state");
    if (pos < 0 || pos > n) throw std::invalid_argument("bad insert position");
    const int m = n + 1;
    const std::uint64_t mask = bit_mask(m, pos);
    CVector out = CVector::Zero(psi.size() * 2);
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        const auto ui = static_cast<std::uint64_t>(i);
        const std::uint64_t upper = (ui & ~(mask - 1)) << 1;
        const std::uint64_t lower = ui & (mask - 1);
        const std::uint64_t base = upper | lower;
        out(static_cast<Eigen::Index>(base)) += ket(0) * psi(i);
        out(static_cast<Eigen::Index>(base | mask)) += ket(1) * psi(i);
    }
    return out;
}

namespace {

// Row-space transform helpers: treat columns of rho as vectors.
template <typename Fn>
CMatrix map_rows_and_cols(const CMatrix& rho, Eigen::Index out_dim, Fn&& transform_vector) {
    CMatrix half(out_dim, rho.cols());
    for (Eigen::Index c = 0; c < rho.cols(); ++c) half.col(c) = transform_vector(CVector(rho.col(c)));
    CMatrix out(out_dim, out_dim);
    const CMatrix half_adj = half.adjoint();
    for (Eigen::Index r = 0; r < out_dim; ++r) out.row(r) = transform_vector(CVector(half_adj.col(r))).adjoint();
    // out = transform applied to rows of half^adjoint, i.e. K rho K^dag
    return out;
}

} // namespace

CMatrix project_out_qubit(const CMatrix& rho, int n, int qubit, const CVector& ket) {
    return map_rows_and_cols(rho, rho.rows() / 2, [&](const CVector& v) {
        return project_out_qubit(v, n, qubit, ket);
    });
}

CMatrix project_out_qubit_pair(const CMatrix& rho, int n, int a, int b, const CVector& ket) {
    return map_rows_and_cols(rho, rho.rows() / 4, [&](const CVector& v) {
        return project_out_qubit_pair(v, n, a, b, ket);
    });
}

CMatrix insert_qubit(const CMatrix& rho, int n, int pos, const CVector& ket) {
    return map_rows_and_cols(rho, rho.rows() * 2, [&](const CVector& v) {
        return insert_qubit(v, n, pos, ket);
    });
}

CVector permute_qubits(const CVector& psi, int n, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("bad permutation size");
    CVector out = CVector::Zero(psi.size());
    for (Eigen::Index idx = 0; idx < psi.size(); ++idx) {
        std::uint64_t src = 0;
        for (int j = 0; j < n; ++j) {
            const int bit = static_cast<int>((static_cast<std::uint64_t>(idx) >> (n - 1 - j)) & 1);
            if (bit) src |= bit_mask(n, perm[static_cast<size_t>(j)]);
        }
        out(idx) = psi(static_cast<Eigen::Index>(src));
    }
    return out;
}

CMatrix permute_qubits(const CMatrix& rho, int n, const std::vector<int>& perm) {
    return map_rows_and_cols(rho, rho.rows(), [&](const CVector& v) { return permute_qubits(v, n, perm); });
}

} // namespace blindsim::linalg
