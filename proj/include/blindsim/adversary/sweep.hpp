#pragma once

#include "blindsim/adversary/strategy.hpp"

#include <string>
#include <vector>

namespace blindsim::adversary {

struct SweepConfig {
    std::vector<int> n_values{9};
    std::vector<int> d_values{1, 3};
    std::string sites = "single"; // none | single | double
    long long trials = 100000;    // Monte Carlo trials per attack
    std::uint64_t seed = 0;
    int workers = 1; // results are worker-count independent
};

struct SweepRow {
    int n = 0;
    int d = 0;
    std::string strategy;
    double brute_force_p = 0.0;
    double mc_estimate = 0.0;
    double mc_stderr = 0.0;
    double bound = 0.0;

    bool within_bound() const { return brute_force_p <= bound + 1e-12; }
    double z_score() const {
        return std::abs(mc_estimate - brute_force_p) / std::max(mc_stderr, 3e-4);
    }
    bool mc_agrees() const { return z_score() <= 3.0; }
};

// Family-wise reading of the sweep: the bound must hold on every row, and the
// number of 3-sigma Monte Carlo excursions may not exceed what unbiased
// sampling produces at this family size.
struct SweepSummary {
    std::size_t rows = 0;
    int bound_violations = 0;
    int mc_outliers = 0; // |z| > 3
    double worst_z = 0.0;

    int allowed_outliers() const { return static_cast<int>(std::max<std::size_t>(3, rows / 150)); }
    bool pass() const { return bound_violations == 0 && mc_outliers <= allowed_outliers() && worst_z < 4.5; }
};

std::vector<SweepRow> bound_sweep(const SweepConfig& cfg);
SweepSummary summarize(const std::vector<SweepRow>& rows);
std::string bound_sweep_csv(const SweepConfig& cfg, const std::string& config_hash);

} // namespace blindsim::adversary
