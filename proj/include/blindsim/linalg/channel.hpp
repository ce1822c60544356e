#pragma once

#include "blindsim/linalg/state.hpp"

#include <vector>

namespace blindsim::linalg {

// Completely positive trace-preserving map as a finite Kraus family.
class KrausChannel {
public:
    KrausChannel(std::vector<CMatrix> kraus_ops, bool check_tp = true);

    static KrausChannel identity(Eigen::Index dim);
    static KrausChannel from_unitary(const CMatrix& u);
    // Reconstructs a Kraus family from a Choi matrix J(C) = sum_ij |i><j| (x) C(|i><j|).
    static KrausChannel from_choi(const CMatrix& choi, Eigen::Index dim_in, Eigen::Index dim_out,
                                  double eig_cutoff = 1e-12);

    Eigen::Index dim_in() const { return dim_in_; }
    Eigen::Index dim_out() const { return dim_out_; }
    const std::vector<CMatrix>& kraus_ops() const { return ops_; }

    CMatrix apply_matrix(const CMatrix& rho) const;
    CMatrix choi() const;

    // this after other: (this ∘ other)(rho) = this(other(rho)).
    KrausChannel compose_after(const KrausChannel& other) const;
    KrausChannel tensor_with(const KrausChannel& other) const;
    // I_probe (x) this, probe on the most significant indices.
    KrausChannel with_probe(Eigen::Index probe_dim) const;

private:
    std::vector<CMatrix> ops_;
    Eigen::Index dim_in_ = 0;
    Eigen::Index dim_out_ = 0;
};

DensityOperator apply_channel(const KrausChannel& ch, const DensityOperator& rho);

} // namespace blindsim::linalg
