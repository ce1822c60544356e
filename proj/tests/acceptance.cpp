// Acceptance suite: drives every certification target end to end and prints
// one pass/fail line per criterion.

#include "blindsim/adversary/sweep.hpp"
#include "blindsim/linalg/qubit_ops.hpp"
#include "blindsim/mbqc/engine.hpp"
#include "blindsim/proto/noverify.hpp"
#include "blindsim/proto/verify.hpp"
#include "blindsim/security/checks.hpp"
#include "blindsim/security/composition.hpp"
#include "blindsim/security/nosignaling.hpp"
#include "blindsim/security/report.hpp"
#include "blindsim/util/random.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace blindsim;
using linalg::CMatrix;
using linalg::CVector;
using linalg::StateVector;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("criterion %d [%s] %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
    if (!pass) ++failures;
}

double uniform_angle(std::mt19937_64& rng) { return -M_PI + 2.0 * M_PI * util::uniform01(rng); }

CVector random_pure(Eigen::Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CVector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = linalg::Complex(g(rng), g(rng));
    v.normalize();
    return v;
}

// --- criterion 1: byproduct-exact engine ------------------------------------

void criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(11);
    double worst = 1.0;
    int branches_checked = 0;
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> angles;
        for (int j = 0; j < 4; ++j) angles.push_back(uniform_angle(rng));
        const auto prog = mbqc::compile_rotation_chain(angles);
        const StateVector target = StateVector(prog.realized_unitary * StateVector::plus(1).amplitudes());
        for (int bits = 0; bits < 16; ++bits) {
            std::vector<int> forced;
            for (int j = 0; j < 4; ++j) forced.push_back((bits >> j) & 1);
            mbqc::ForcedOutcomeSource src(forced);
            const auto run = mbqc::run_pattern(prog.graph, prog.pattern, src);
            const auto corrected = mbqc::correct_byproduct(run.output_state, run.frame);
            worst = std::min(worst, corrected.fidelity(target));
            ++branches_checked;
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "mbqc engine: 100 random wires, %d branches, worst fidelity %.3e below 1, %.2f s",
                  branches_checked, 1.0 - worst, secs);
    report(1, worst >= 1.0 - 1e-9 && secs < 10.0, buf);
}

// --- criterion 2: composable correctness ------------------------------------

void criterion_2() {
    std::mt19937_64 rng(22);
    double worst = 0.0;
    int pairs = 0;

    // verify variant at N=6: 25 folded + 25 teleported (input, program) pairs
    for (int rep = 0; rep < 50; ++rep) {
        const bool teleport = rep % 2 == 1;
        const proto::WireProgram prog{{uniform_angle(rng)},
                                      teleport ? proto::InputMode::Teleport : proto::InputMode::Folded};
        const auto sys = proto::VerifySystem::make(6, prog);
        CMatrix joint;
        int d3 = 0;
        if (teleport) {
            d3 = 1;
            const CVector v = random_pure(4, rng);
            joint = v * v.adjoint();
        } else {
            joint = CMatrix::Identity(1, 1);
        }
        const auto out = proto::verify_apply(sys, proto::AttackModel::identity(),
                                             proto::DeviceBehavior::honest_device(), joint, d3);
        worst = std::max(worst, linalg::trace_norm_distance(out.real, out.ideal).half_trace_distance);
        ++pairs;
    }
    // three scripted device behaviors on the verify variant
    for (const auto* dev : {"always_accept", "always_reject", "noisy_honest"}) {
        const auto sys = proto::VerifySystem::make(6, proto::WireProgram{{0.4}, proto::InputMode::Folded});
        const auto res = security::check_correctness(sys, adversary::cheating_device(dev), 5, rng());
        worst = std::max(worst, std::max(res.worst_input_distance, res.channel_report.half_trace_distance));
    }
    // verification-free variant at N=6 (wire of six qubits)
    for (int rep = 0; rep < 50; ++rep) {
        const bool teleport = rep % 2 == 1;
        std::vector<double> angles;
        for (int j = 0; j < 5; ++j) angles.push_back(uniform_angle(rng));
        const auto sys = proto::NoVerifySystem::from_wire(
            angles, teleport ? proto::InputMode::Teleport : proto::InputMode::Folded);
        const StateVector cluster = mbqc::build_cluster(sys.graph);
        CMatrix joint;
        int d3 = 0;
        CMatrix ref_in = CMatrix::Identity(1, 1);
        if (teleport) {
            d3 = 1;
            const CVector v = random_pure(4, rng);
            ref_in = v * v.adjoint();
            joint = linalg::kron(ref_in, CMatrix(cluster.amplitudes() * cluster.amplitudes().adjoint()));
            std::vector<int> perm{0};
            for (int i = 0; i < sys.n(); ++i) perm.push_back(2 + i);
            perm.push_back(1);
            joint = linalg::permute_qubits(joint, 2 + sys.n(), perm);
        } else {
            joint = cluster.amplitudes() * cluster.amplitudes().adjoint();
        }
        const CMatrix real = proto::noverify_apply(sys, proto::DeviceBehavior::honest_device(), joint, d3);
        const CMatrix ideal = proto::noverify_ideal_reference(sys, ref_in, d3);
        worst = std::max(worst, linalg::trace_norm_distance(real, ideal).half_trace_distance);
        ++pairs;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "correctness: %d (input, program) pairs + 3 device scripts, worst %.3e",
                  pairs, worst);
    report(2, worst <= 1e-9, buf);
}

// --- criterion 3: device-independent blindness -------------------------------

void criterion_3() {
    const auto sys = proto::NoVerifySystem::from_wire({0.62, 1.7, -0.8, 2.2, 0.1}, proto::InputMode::Folded);
    const std::vector<proto::DeviceBehavior> devices{proto::DeviceBehavior::honest_device(),
                                                     adversary::cheating_device("always_accept"),
                                                     adversary::cheating_device("noisy_honest")};
    const auto res = security::check_blindness_noverify(sys, devices, 50, 33);

    // program-swap equality of the server view on 20 program pairs
    std::mt19937_64 rng(34);
    int equal_views = 0;
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> a, b;
        for (int j = 0; j < 3; ++j) {
            a.push_back(uniform_angle(rng));
            b.push_back(uniform_angle(rng));
        }
        const auto sys_a = proto::NoVerifySystem::from_wire(a, proto::InputMode::Folded);
        const auto sys_b = proto::NoVerifySystem::from_wire(b, proto::InputMode::Folded);
        const auto bob = proto::bob_honest_noverify(sys_a.graph);
        const auto run_a =
            proto::run_noverify(sys_a, bob, proto::DeviceBehavior::honest_device(), 100 + rep);
        const auto run_b =
            proto::run_noverify(sys_b, bob, proto::DeviceBehavior::honest_device(), 200 + rep);
        if (proto::bob_view(run_a.transcript) == proto::bob_view(run_b.transcript)) ++equal_views;
    }
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "blindness: %d adversarial states x 3 devices, worst %.3e; channel gap %.3e; "
                  "%d/20 program pairs give identical server views",
                  res.states_tested, res.worst_distance, res.channel_report.half_trace_distance,
                  equal_views);
    report(3, res.worst_distance <= 1e-9 && res.channel_report.half_trace_distance <= 1e-9 &&
                  equal_views == 20,
           buf);
}

// --- criterion 4: the verification bound -------------------------------------

void criterion_4() {
    const auto start = std::chrono::steady_clock::now();
    adversary::SweepConfig cfg;
    cfg.n_values = {3, 6, 9, 12};
    cfg.d_values = {1, 3};
    cfg.sites = "double"; // includes all single-site attacks as well
    cfg.trials = 100000;
    cfg.seed = 44;
    cfg.workers = 4;
    const auto rows = adversary::bound_sweep(cfg);
    const auto summary = adversary::summarize(rows);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "verification bound: %zu attack rows, bound violations %d, 3-sigma MC excursions "
                  "%d (allow %d, worst z %.2f), %.1f s",
                  summary.rows, summary.bound_violations, summary.mc_outliers,
                  summary.allowed_outliers(), summary.worst_z, secs);
    report(4, summary.pass() && secs < 120.0, buf);
}

// --- criterion 5: the 2-delta security bound ----------------------------------

void criterion_5() {
    bool pass = true;
    int rows_total = 0;
    double worst_margin = -1.0;
    const std::vector<proto::DeviceBehavior> devices{proto::DeviceBehavior::honest_device(),
                                                     adversary::cheating_device("always_accept"),
                                                     adversary::cheating_device("noisy_honest")};
    for (int n : {3, 6}) {
        const auto sys = n == 3
                             ? proto::VerifySystem::make(3, proto::WireProgram{{}, proto::InputMode::Folded})
                             : proto::VerifySystem::make(6, proto::WireProgram{{0.83}, proto::InputMode::Folded});
        const auto rows = security::check_security_verify(
            sys, adversary::AdversaryStrategy::library(n), devices, 3, 55 + static_cast<std::uint64_t>(n));
        for (const auto& row : rows) {
            pass &= row.pass;
            worst_margin = std::max(worst_margin, row.worst_distance - row.bound);
            ++rows_total;
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "security: %d strategy/device rows at N in {3,6}, worst distance-bound margin %.3e",
                  rows_total, worst_margin);
    report(5, pass, buf);
}

// --- criterion 6: flagged-output decomposition --------------------------------

void criterion_6() {
    const auto sys = proto::VerifySystem::make(3, proto::WireProgram{{}, proto::InputMode::Folded});
    const CMatrix joint = CMatrix::Identity(1, 1);
    const CMatrix ideal = proto::verify_ideal_reference(sys, joint, 0);
    double worst_recon = 0.0;
    bool honest_exact = false, pass = true;

    {
        const auto out = proto::verify_apply(sys, proto::AttackModel::identity(),
                                             proto::DeviceBehavior::honest_device(), joint, 0);
        const auto dec = security::decompose_flagged_output(out.real, ideal);
        honest_exact = dec.alpha <= 1e-12 && dec.delta <= 1e-12;
        worst_recon = std::max(worst_recon, dec.reconstruction_error);
    }
    const linalg::Pauli paulis[] = {linalg::Pauli::X, linalg::Pauli::Y, linalg::Pauli::Z};
    int runs = 1;
    for (int site = 0; site < 3; ++site)
        for (auto p : paulis) {
            std::vector<linalg::Pauli> vec(3, linalg::Pauli::I);
            vec[static_cast<size_t>(site)] = p;
            const auto out = proto::verify_apply(sys, proto::AttackModel::pauli(vec),
                                                 proto::DeviceBehavior::honest_device(), joint, 0);
            const auto dec = security::decompose_flagged_output(out.real, ideal);
            worst_recon = std::max(worst_recon, dec.reconstruction_error);
            pass &= dec.alpha >= -1e-12 && dec.delta >= -1e-12 && dec.alpha + dec.delta <= 1.0 + 1e-9;
            ++runs;
        }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "decomposition: %d runs, honest alpha=delta=0: %s, worst reconstruction error %.3e", runs,
                  honest_exact ? "yes" : "no", worst_recon);
    report(6, pass && honest_exact && worst_recon <= 1e-9, buf);
}

// --- criterion 7: composition theorems -----------------------------------------

void criterion_7() {
    const auto start = std::chrono::steady_clock::now();
    const auto serial = security::serial_composition_check(200, 77);
    const auto parallel = security::parallel_composition_check(200, 78);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "composition: 200 serial + 200 parallel instances, max excess %.3e / %.3e, %.1f s",
                  serial.max_excess, parallel.max_excess, secs);
    report(7, serial.all_pass() && parallel.all_pass() && secs < 60.0, buf);
}

// --- criterion 8: no-signaling ---------------------------------------------------

void criterion_8() {
    CVector bell(4);
    bell << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
    const linalg::DensityOperator shared(bell * bell.adjoint());
    const std::vector<mbqc::MeasBasis> settings{mbqc::MeasBasis::x(), mbqc::MeasBasis::z()};
    int rejections = 0;
    for (int batch = 0; batch < 50; ++batch) {
        const auto rep = security::nosignaling_test(shared, settings, settings, 100000, 0.01,
                                                    util::split_seed(88, static_cast<std::uint64_t>(batch)));
        if (rep.any_rejection) ++rejections;
    }
    int planted_detected = 0;
    for (int batch = 0; batch < 50; ++batch) {
        const auto rep = security::nosignaling_planted(0.05, 100000, 0.01,
                                                       util::split_seed(99, static_cast<std::uint64_t>(batch)));
        if (rep.any_rejection) ++planted_detected;
    }
    const double power = security::planted_rejection_power(0.05, 100000, 0.01);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "no-signaling: %d/50 honest batches rejected (allow 3); planted control %d/50, "
                  "analytic power %.6f",
                  rejections, planted_detected, power);
    report(8, rejections <= 3 && planted_detected >= 50.0 * 0.99 && power >= 0.99, buf);
}

// --- criterion 9: reproducibility -------------------------------------------------

void criterion_9() {
    bool pass = true;

    // transcripts
    const auto sys = proto::VerifySystem::make(6, proto::WireProgram{{0.5}, proto::InputMode::Folded});
    const auto r1 = proto::run_verify(sys, proto::AttackModel::identity(),
                                      proto::DeviceBehavior::honest_device(), 99);
    const auto r2 = proto::run_verify(sys, proto::AttackModel::identity(),
                                      proto::DeviceBehavior::honest_device(), 99);
    pass &= r1.transcript.to_jsonl() == r2.transcript.to_jsonl();

    // sweep CSVs across worker counts
    adversary::SweepConfig cfg;
    cfg.n_values = {6};
    cfg.d_values = {1};
    cfg.sites = "single";
    cfg.trials = 5000;
    cfg.seed = 13;
    cfg.workers = 1;
    const std::string csv1 = adversary::bound_sweep_csv(cfg, "hash");
    cfg.workers = 4;
    const std::string csv4 = adversary::bound_sweep_csv(cfg, "hash");
    pass &= csv1 == csv4;

    // certification reports
    const auto s1 = security::serial_composition_check(40, 5);
    const auto s2 = security::serial_composition_check(40, 5);
    pass &= s1.trials.size() == s2.trials.size();
    for (size_t i = 0; i < s1.trials.size(); ++i) {
        pass &= s1.trials[i].epsilon == s2.trials[i].epsilon &&
                s1.trials[i].composed == s2.trials[i].composed;
    }
    security::CheckResult cr{"repro", "h", 5, 0.0, 1.0, true};
    pass &= security::report_json("h", 5, {cr}) == security::report_json("h", 5, {cr});

    report(9, pass, "reproducibility: transcripts, sweep CSVs (1 vs 4 workers) and reports byte-identical");
}

} // namespace

int main() {
    std::printf("== acceptance suite (%s) ==\n", security::kToolVersion);
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (failures == 0) {
        std::printf("all 9 criteria passed\n");
        return 0;
    }
    std::printf("%d criteria FAILED\n", failures);
    return 1;
}
