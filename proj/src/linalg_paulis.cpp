#include "blindsim/linalg/paulis.hpp"

#include <stdexcept>

namespace blindsim::linalg {

CMatrix pauli_i() { return CMatrix::Identity(2, 2); }

CMatrix pauli_x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

CMatrix pauli_y() {
    CMatrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

CMatrix pauli_z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

CMatrix hadamard() {
    CMatrix m(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
}

CMatrix phase_gate(double phi) {
    CMatrix m = CMatrix::Identity(2, 2);
    m(1, 1) = std::exp(Complex(0, phi));
    return m;
}

CMatrix cz_gate() {
    CMatrix m = CMatrix::Identity(4, 4);
    m(3, 3) = -1;
    return m;
}

CMatrix pauli_xz(int x, int z) {
    CMatrix m = CMatrix::Identity(2, 2);
    if (x) m = pauli_x() * m;
    if (z) m = m * pauli_z(); // X^x Z^z, Z applied first
    return m;
}

CMatrix pauli_matrix(Pauli p) {
    switch (p) {
        case Pauli::I: return pauli_i();
        case Pauli::X: return pauli_x();
        case Pauli::Y: return pauli_y();
        case Pauli::Z: return pauli_z();
    }
    throw std::invalid_argument("bad Pauli");
}

char pauli_char(Pauli p) {
    switch (p) {
        case Pauli::I: return 'I';
        case Pauli::X: return 'X';
        case Pauli::Y: return 'Y';
        case Pauli::Z: return 'Z';
    }
    return '?';
}

Pauli pauli_from_char(char c) {
    switch (c) {
        case 'I': return Pauli::I;
        case 'X': return Pauli::X;
        case 'Y': return Pauli::Y;
        case 'Z': return Pauli::Z;
    }
    throw std::invalid_argument("bad Pauli letter");
}

} // namespace blindsim::linalg
