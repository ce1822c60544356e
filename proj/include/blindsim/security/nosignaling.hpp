#pragma once

#include "blindsim/linalg/state.hpp"
#include "blindsim/mbqc/pattern.hpp"

#include <cstdint>
#include <vector>

namespace blindsim::security {

// Upper tail of the chi-square distribution with k degrees of freedom.
double chi_square_sf(double x, int dof);

struct NoSignalingCell {
    int y_setting = 0;
    double chi2 = 0.0;
    int dof = 0;
    double p_value = 1.0;
    bool rejected = false;
};

struct NoSignalingReport {
    std::vector<NoSignalingCell> cells;
    bool any_rejection = false;
    long long trials = 0;
};

// Samples local measurements on a shared two-qubit state and tests, for each
// of Bob's settings, whether his outcome distribution depends on Alice's
// setting (Pearson homogeneity test; columns with low expected counts merged).
NoSignalingReport nosignaling_test(const linalg::DensityOperator& shared,
                                   const std::vector<mbqc::MeasBasis>& x_settings,
                                   const std::vector<mbqc::MeasBasis>& y_settings, long long trials,
                                   double significance, std::uint64_t seed);

// Control with planted signaling: Bob's outcome bias follows Alice's setting
// by +-effect. Returns the same report shape.
NoSignalingReport nosignaling_planted(double effect, long long trials, double significance,
                                      std::uint64_t seed);

// Normal-approximation power of the planted-control test.
double planted_rejection_power(double effect, long long trials, double significance);

} // namespace blindsim::security
