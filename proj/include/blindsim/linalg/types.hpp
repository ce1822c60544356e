#pragma once

#include <Eigen/Dense>
#include <complex>

namespace blindsim::linalg {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

// Tolerance policy, used project-wide.
inline constexpr double kStructuralTol = 1e-12; // norms, hermiticity, traces
inline constexpr double kChannelTpTol = 1e-10;  // sum K^dag K == I
inline constexpr double kPsdFloor = -1e-10;     // min eigenvalue of a density operator
inline constexpr double kDerivedTol = 1e-9;     // derived equalities

bool is_power_of_two(Eigen::Index n);
int log2_dim(Eigen::Index n); // exact; throws if not a power of two

} // namespace blindsim::linalg
