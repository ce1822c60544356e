#pragma once

#include "blindsim/linalg/types.hpp"

namespace blindsim::linalg {

// 2x2 building blocks.
CMatrix pauli_i();
CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();
CMatrix hadamard();
CMatrix phase_gate(double phi); // diag(1, e^{i phi})
CMatrix cz_gate();              // 4x4

// X^x Z^z on one qubit.
CMatrix pauli_xz(int x, int z);

enum class Pauli : unsigned char { I = 0, X = 1, Y = 2, Z = 3 };
CMatrix pauli_matrix(Pauli p);
char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

} // namespace blindsim::linalg
