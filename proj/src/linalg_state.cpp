#include "blindsim/linalg/state.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace blindsim::linalg {

bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_dim(Eigen::Index n) {
    if (!is_power_of_two(n)) throw std::invalid_argument("dimension is not a power of two");
    int k = 0;
    while ((Eigen::Index{1} << k) < n) ++k;
    return k;
}

StateVector::StateVector(CVector amplitudes) : amps_(std::move(amplitudes)) {
    n_ = log2_dim(amps_.size());
    const double norm = amps_.norm();
    if (std::abs(norm - 1.0) > kStructuralTol)
        throw std::invalid_argument("state vector is not normalized");
}

StateVector StateVector::basis(int n, std::uint64_t index) {
    if (n < 0 || n > 24) throw std::invalid_argument("bad qubit count");
    CVector v = CVector::Zero(Eigen::Index{1} << n);
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(std::move(v));
}

StateVector StateVector::plus(int n) {
    const Eigen::Index d = Eigen::Index{1} << n;
    CVector v = CVector::Constant(d, Complex(1.0 / std::sqrt(static_cast<double>(d)), 0.0));
    return StateVector(std::move(v));
}

double StateVector::fidelity(const StateVector& other) const {
    if (dim() != other.dim()) throw std::invalid_argument("dimension mismatch");
    return std::norm(amps_.dot(other.amps_));
}

DensityOperator::DensityOperator(CMatrix matrix) : mat_(std::move(matrix)) {
    if (mat_.rows() != mat_.cols()) throw std::invalid_argument("density operator must be square");
    n_ = log2_dim(mat_.rows());
    if ((mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() > kStructuralTol)
        throw std::invalid_argument("density operator is not Hermitian");
    if (std::abs(mat_.trace().real() - 1.0) > kStructuralTol || std::abs(mat_.trace().imag()) > kStructuralTol)
        throw std::invalid_argument("density operator trace is not 1");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(mat_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < kPsdFloor)
        throw std::invalid_argument("density operator is not positive semidefinite");
}

DensityOperator DensityOperator::pure(const StateVector& psi) {
    return DensityOperator(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityOperator DensityOperator::maximally_mixed(int n) {
    const Eigen::Index d = Eigen::Index{1} << n;
    return DensityOperator(CMatrix::Identity(d, d) / static_cast<double>(d));
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

CVector kron(const CVector& a, const CVector& b) {
    CVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    return StateVector(kron(a.amplitudes(), b.amplitudes()));
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
    return DensityOperator(kron(a.matrix(), b.matrix()));
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<Eigen::Index>& dims,
                              const std::vector<int>& keep) {
    Eigen::Index total = 1;
    for (Eigen::Index d : dims) {
        if (d <= 0) throw std::invalid_argument("bad subsystem dimension");
        total *= d;
    }
    if (total != rho.dim()) throw std::invalid_argument("subsystem dims do not match operator dimension");
    std::vector<bool> kept(dims.size(), false);
    for (int k : keep) {
        if (k < 0 || k >= static_cast<int>(dims.size())) throw std::invalid_argument("keep index out of range");
        if (kept[static_cast<size_t>(k)]) throw std::invalid_argument("duplicate keep index");
        kept[static_cast<size_t>(k)] = true;
    }

    Eigen::Index keep_dim = 1, trace_dim = 1;
    for (size_t i = 0; i < dims.size(); ++i) (kept[i] ? keep_dim : trace_dim) *= dims[i];

    // Index decomposition: global index = sum over subsystems (mixed radix,
    // subsystem 0 most significant).
    const size_t m = dims.size();
    std::vector<Eigen::Index> stride(m);
    {
        Eigen::Index s = 1;
        for (size_t i = m; i-- > 0;) {
            stride[i] = s;
            s *= dims[i];
        }
    }
    std::vector<Eigen::Index> keep_stride(m, 0), trace_stride(m, 0);
    {
        Eigen::Index ks = 1, ts = 1;
        for (size_t i = m; i-- > 0;) {
            if (kept[i]) {
                keep_stride[i] = ks;
                ks *= dims[i];
            } else {
                trace_stride[i] = ts;
                ts *= dims[i];
            }
        }
    }

    CMatrix out = CMatrix::Zero(keep_dim, keep_dim);
    std::vector<Eigen::Index> digits(m);
    for (Eigen::Index row = 0; row < rho.dim(); ++row) {
        Eigen::Index r = row, row_keep = 0, row_trace = 0;
        for (size_t i = 0; i < m; ++i) {
            digits[i] = r / stride[i];
            r %= stride[i];
            row_keep += digits[i] * keep_stride[i];
            row_trace += digits[i] * trace_stride[i];
        }
        for (Eigen::Index col = 0; col < rho.dim(); ++col) {
            Eigen::Index c = col, col_keep = 0, col_trace = 0;
            for (size_t i = 0; i < m; ++i) {
                const Eigen::Index d = c / stride[i];
                c %= stride[i];
                col_keep += d * keep_stride[i];
                col_trace += d * trace_stride[i];
            }
            if (row_trace == col_trace) out(row_keep, col_keep) += rho.matrix()(row, col);
        }
    }
    return DensityOperator(std::move(out));
}

CMatrix partial_trace_qubits(const CMatrix& rho, int n, const std::vector<int>& keep) {
    std::vector<Eigen::Index> dims(static_cast<size_t>(n), 2);
    // Relax the DensityOperator invariants here: this overload is also used on
    // unnormalized branch matrices.
    const int k = static_cast<int>(keep.size());
    const Eigen::Index dk = Eigen::Index{1} << k;
    CMatrix out = CMatrix::Zero(dk, dk);
    const Eigen::Index d = rho.rows();
    std::vector<int> kept_sorted = keep;

    auto keep_bits = [&](Eigen::Index idx) {
        Eigen::Index v = 0;
        for (int i = 0; i < k; ++i) {
            const int q = kept_sorted[static_cast<size_t>(i)];
            const int bit = static_cast<int>((idx >> (n - 1 - q)) & 1);
            v |= static_cast<Eigen::Index>(bit) << (k - 1 - i);
        }
        return v;
    };
    auto trace_bits = [&](Eigen::Index idx) {
        Eigen::Index v = 0;
        for (int q = 0; q < n; ++q) {
            bool is_kept = false;
            for (int kk : kept_sorted) is_kept |= (kk == q);
            if (!is_kept) v = (v << 1) | ((idx >> (n - 1 - q)) & 1);
        }
        return v;
    };
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            if (trace_bits(i) == trace_bits(j)) out(keep_bits(i), keep_bits(j)) += rho(i, j);
    return out;
}

} // namespace blindsim::linalg
