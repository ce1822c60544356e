#include "blindsim/adversary/sweep.hpp"

#include "blindsim/security/report.hpp"
#include "blindsim/util/random.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace blindsim::adversary {

using linalg::Pauli;

std::vector<SweepRow> bound_sweep(const SweepConfig& cfg) {
    if (cfg.sites != "none" && cfg.sites != "single" && cfg.sites != "double")
        throw std::invalid_argument("sites must be none, single or double");

    struct Job {
        int n, d;
        std::map<int, Pauli> attack;
        std::string name;
    };
    std::vector<Job> jobs;
    const Pauli paulis[] = {Pauli::X, Pauli::Y, Pauli::Z};
    for (int n : cfg.n_values) {
        if (n % 3 != 0 || n <= 0 || n > 12)
            throw std::invalid_argument("sweep positions must be positive multiples of 3, at most 12");
        for (int d : cfg.d_values) {
            if (d > n / 3) continue;
            if (cfg.sites == "none") continue;
            auto add = [&](std::map<int, Pauli> attack) {
                std::string name;
                for (const auto& [site, p] : attack)
                    name += std::string(name.empty() ? "" : "+") + linalg::pauli_char(p) + std::to_string(site);
                jobs.push_back({n, d, std::move(attack), std::move(name)});
            };
            for (int i = 0; i < n; ++i)
                for (auto p : paulis) add({{i, p}});
            if (cfg.sites == "double") {
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j)
                        for (auto p : paulis)
                            for (auto q : paulis) add({{i, p}, {j, q}});
            }
        }
    }

    std::vector<SweepRow> rows(jobs.size());
    auto work = [&](size_t idx) {
        const Job& job = jobs[idx];
        const auto code = CodeConfig::repetition(job.d, job.n / 3);
        SweepRow row;
        row.n = job.n;
        row.d = job.d;
        row.strategy = job.name;
        row.brute_force_p = undetected_error_prob_bruteforce(job.n, code, job.attack).value();
        const auto mc = undetected_error_prob_montecarlo(job.n, code, job.attack, cfg.trials,
                                                         util::split_seed(cfg.seed, idx));
        row.mc_estimate = mc.estimate;
        row.mc_stderr = mc.stderr_;
        row.bound = undetected_error_bound(job.d);
        rows[idx] = std::move(row);
    };

    const int workers = std::max(cfg.workers, 1);
    if (workers == 1) {
        for (size_t i = 0; i < jobs.size(); ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (size_t i = static_cast<size_t>(w); i < jobs.size(); i += static_cast<size_t>(workers))
                    work(i);
            });
        for (auto& t : pool) t.join();
    }
    return rows;
}

SweepSummary summarize(const std::vector<SweepRow>& rows) {
    SweepSummary s;
    s.rows = rows.size();
    for (const auto& r : rows) {
        if (!r.within_bound()) ++s.bound_violations;
        if (!r.mc_agrees()) ++s.mc_outliers;
        s.worst_z = std::max(s.worst_z, r.z_score());
    }
    return s;
}

std::string bound_sweep_csv(const SweepConfig& cfg, const std::string& config_hash) {
    const auto rows = bound_sweep(cfg);
    auto fmt = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    std::ostringstream csv;
    csv << "# " << security::kToolVersion << " config=" << config_hash << " seed=" << cfg.seed << "\n";
    csv << "N,d,strategy,brute_force_p,mc_estimate,mc_stderr,bound\n";
    for (const auto& r : rows)
        csv << r.n << "," << r.d << "," << r.strategy << "," << fmt(r.brute_force_p) << ","
            << fmt(r.mc_estimate) << "," << fmt(r.mc_stderr) << "," << fmt(r.bound) << "\n";
    return csv.str();
}

} // namespace blindsim::adversary
