#include "blindsim/linalg/channel.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace blindsim::linalg {

KrausChannel::KrausChannel(std::vector<CMatrix> kraus_ops, bool check_tp) : ops_(std::move(kraus_ops)) {
    if (ops_.empty()) throw std::invalid_argument("empty Kraus family");
    dim_out_ = ops_.front().rows();
    dim_in_ = ops_.front().cols();
    for (const auto& k : ops_)
        if (k.rows() != dim_out_ || k.cols() != dim_in_)
            throw std::invalid_argument("inconsistent Kraus operator shapes");
    if (check_tp) {
        CMatrix s = CMatrix::Zero(dim_in_, dim_in_);
        for (const auto& k : ops_) s += k.adjoint() * k;
        if ((s - CMatrix::Identity(dim_in_, dim_in_)).cwiseAbs().maxCoeff() > kChannelTpTol)
            throw std::invalid_argument("Kraus family is not trace preserving");
    }
}

KrausChannel KrausChannel::identity(Eigen::Index dim) {
    return KrausChannel({CMatrix::Identity(dim, dim)});
}

KrausChannel KrausChannel::from_unitary(const CMatrix& u) {
    if (u.rows() != u.cols()) throw std::invalid_argument("unitary must be square");
    return KrausChannel({u});
}

KrausChannel KrausChannel::from_choi(const CMatrix& choi, Eigen::Index dim_in, Eigen::Index dim_out,
                                     double eig_cutoff) {
    if (choi.rows() != dim_in * dim_out || choi.cols() != dim_in * dim_out)
        throw std::invalid_argument("Choi matrix has wrong dimension");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (choi + choi.adjoint()));
    std::vector<CMatrix> ops;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double lam = es.eigenvalues()(k);
        if (lam < -1e-8) throw std::invalid_argument("Choi matrix is not positive semidefinite");
        if (lam <= eig_cutoff) continue;
        // Choi basis |i>_in (x) C(|i><j|): eigenvector v reshapes to K with
        // K(o, i) = v(i * dim_out + o).
        CMatrix kmat(dim_out, dim_in);
        const CVector v = es.eigenvectors().col(k) * std::sqrt(lam);
        for (Eigen::Index i = 0; i < dim_in; ++i)
            for (Eigen::Index o = 0; o < dim_out; ++o) kmat(o, i) = v(i * dim_out + o);
        ops.push_back(std::move(kmat));
    }
    if (ops.empty()) throw std::invalid_argument("Choi matrix is numerically zero");
    return KrausChannel(std::move(ops));
}

CMatrix KrausChannel::apply_matrix(const CMatrix& rho) const {
    if (rho.rows() != dim_in_ || rho.cols() != dim_in_) throw std::invalid_argument("dimension mismatch");
    CMatrix out = CMatrix::Zero(dim_out_, dim_out_);
    for (const auto& k : ops_) out += k * rho * k.adjoint();
    return out;
}

CMatrix KrausChannel::choi() const {
    CMatrix j = CMatrix::Zero(dim_in_ * dim_out_, dim_in_ * dim_out_);
    for (const auto& k : ops_)
        for (Eigen::Index i = 0; i < dim_in_; ++i)
            for (Eigen::Index ip = 0; ip < dim_in_; ++ip)
                j.block(i * dim_out_, ip * dim_out_, dim_out_, dim_out_) += k.col(i) * k.col(ip).adjoint();
    return j;
}

KrausChannel KrausChannel::compose_after(const KrausChannel& other) const {
    if (other.dim_out_ != dim_in_) throw std::invalid_argument("composition dimension mismatch");
    std::vector<CMatrix> ops;
    ops.reserve(ops_.size() * other.ops_.size());
    for (const auto& a : ops_)
        for (const auto& b : other.ops_) ops.push_back(a * b);
    return KrausChannel(std::move(ops), false);
}

KrausChannel KrausChannel::tensor_with(const KrausChannel& other) const {
    std::vector<CMatrix> ops;
    ops.reserve(ops_.size() * other.ops_.size());
    for (const auto& a : ops_)
        for (const auto& b : other.ops_) ops.push_back(kron(a, b));
    return KrausChannel(std::move(ops), false);
}

KrausChannel KrausChannel::with_probe(Eigen::Index probe_dim) const {
    if (probe_dim < 1) throw std::invalid_argument("probe dimension must be positive");
    std::vector<CMatrix> ops;
    ops.reserve(ops_.size());
    const CMatrix ip = CMatrix::Identity(probe_dim, probe_dim);
    for (const auto& k : ops_) ops.push_back(kron(ip, k));
    return KrausChannel(std::move(ops), false);
}

DensityOperator apply_channel(const KrausChannel& ch, const DensityOperator& rho) {
    return DensityOperator(ch.apply_matrix(rho.matrix()));
}

} // namespace blindsim::linalg
