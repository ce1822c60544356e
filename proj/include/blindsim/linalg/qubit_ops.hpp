#pragma once

#include "blindsim/linalg/types.hpp"

#include <vector>

namespace blindsim::linalg {

// Register helpers for n-qubit state vectors and density matrices.
// Qubit 0 is the most significant index bit.

// In-place single-qubit gate on a state vector.
void apply_1q(CVector& psi, int n, int qubit, const CMatrix& u);
// In-place two-qubit gate (4x4, acting on (a,b) with a more significant).
void apply_2q(CVector& psi, int n, int a, int b, const CMatrix& u);
// Controlled-Z between two qubits (symmetric).
void apply_cz(CVector& psi, int n, int a, int b);

// Same gates on density matrices (U rho U^dag).
void apply_1q(CMatrix& rho, int n, int qubit, const CMatrix& u);
void apply_2q(CMatrix& rho, int n, int a, int b, const CMatrix& u);

// Projects qubit `qubit` onto the rank-1 state `ket` (2-vector) and removes it
// from the register. Returns the unnormalized result; its squared norm is the
// branch probability.
CVector project_out_qubit(const CVector& psi, int n, int qubit, const CVector& ket);
// Projects two qubits (a more significant) onto a 4-dim ket and removes both.
CVector project_out_qubit_pair(const CVector& psi, int n, int a, int b, const CVector& ket);

// Inserts a fresh qubit in state `ket` at position `pos` (0..n).
CVector insert_qubit(const CVector& psi, int n, int pos, const CVector& ket);

// Density-matrix versions: project both sides and drop the qubit(s).
CMatrix project_out_qubit(const CMatrix& rho, int n, int qubit, const CVector& ket);
CMatrix project_out_qubit_pair(const CMatrix& rho, int n, int a, int b, const CVector& ket);
CMatrix insert_qubit(const CMatrix& rho, int n, int pos, const CVector& ket);

// Reorders register qubits; perm[new_position] = old_position.
CVector permute_qubits(const CVector& psi, int n, const std::vector<int>& perm);
CMatrix permute_qubits(const CMatrix& rho, int n, const std::vector<int>& perm);

std::uint64_t bit_mask(int n, int qubit);

} // namespace blindsim::linalg
