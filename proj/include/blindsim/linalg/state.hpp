#pragma once

#include "blindsim/linalg/types.hpp"

namespace blindsim::linalg {

// Pure state on n qubits. Qubit 0 is the most significant index bit, so
// tensor(a, b) puts a's qubits in front.
class StateVector {
public:
    explicit StateVector(CVector amplitudes);

    static StateVector basis(int n, std::uint64_t index);
    static StateVector zero(int n) { return basis(n, 0); }
    static StateVector plus(int n);

    int qubits() const { return n_; }
    Eigen::Index dim() const { return amps_.size(); }
    const CVector& amplitudes() const { return amps_; }
    Complex amp(std::uint64_t index) const { return amps_(static_cast<Eigen::Index>(index)); }

    double norm() const { return amps_.norm(); }
    double fidelity(const StateVector& other) const; // |<a|b>|^2

private:
    CVector amps_;
    int n_ = 0;
};

class DensityOperator {
public:
    explicit DensityOperator(CMatrix matrix);

    static DensityOperator pure(const StateVector& psi);
    static DensityOperator maximally_mixed(int n);

    int qubits() const { return n_; }
    Eigen::Index dim() const { return mat_.rows(); }
    const CMatrix& matrix() const { return mat_; }

private:
    CMatrix mat_;
    int n_ = 0;
};

// Kronecker products; a's indices are most significant.
StateVector tensor(const StateVector& a, const StateVector& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);
CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(const CVector& a, const CVector& b);

// Reduced state on the kept subsystems (arbitrary subsystem dimensions; the
// kept subsystems stay in their original relative order).
DensityOperator partial_trace(const DensityOperator& rho, const std::vector<Eigen::Index>& dims,
                              const std::vector<int>& keep);
// Qubit-shaped convenience overload.
CMatrix partial_trace_qubits(const CMatrix& rho, int n, const std::vector<int>& keep);

} // namespace blindsim::linalg
