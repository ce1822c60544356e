#include "blindsim/security/nosignaling.hpp"

#include "blindsim/linalg/qubit_ops.hpp"
#include "blindsim/mbqc/engine.hpp"
#include "blindsim/util/random.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace blindsim::security {

using linalg::CMatrix;
using linalg::CVector;

namespace {

// regularized incomplete gamma functions (series / continued fraction)
double gamma_p_series(double a, double x) {
    double sum = 1.0 / a, term = sum;
    for (int n = 1; n < 500; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace

double chi_square_sf(double x, int dof) {
    if (x <= 0) return 1.0;
    const double a = dof / 2.0, hx = x / 2.0;
    if (hx < a + 1.0) return 1.0 - gamma_p_series(a, hx);
    return gamma_q_contfrac(a, hx);
}

namespace {

CVector basis_ket_for(const mbqc::MeasBasis& b, int s) {
    if (b.kind == mbqc::BasisKind::PauliZ) {
        CVector v = CVector::Zero(2);
        v(s) = 1.0;
        return v;
    }
    const double angle = b.kind == mbqc::BasisKind::PauliX ? 0.0 : b.angle;
    return mbqc::xy_basis_ket(angle, s);
}

struct Table {
    // counts[x][b]
    std::vector<std::array<long long, 2>> counts;
};

NoSignalingCell test_homogeneity(const Table& table, int y, double significance) {
    // merge outcome columns whose pooled expected count is below 5
    const size_t rows = table.counts.size();
    std::array<long long, 2> col_tot{0, 0};
    long long grand = 0;
    for (const auto& r : table.counts) {
        col_tot[0] += r[0];
        col_tot[1] += r[1];
        grand += r[0] + r[1];
    }
    NoSignalingCell cell;
    cell.y_setting = y;
    long long min_row = grand;
    for (const auto& r : table.counts) min_row = std::min(min_row, r[0] + r[1]);
    const double min_expect =
        grand == 0 ? 0.0
                   : static_cast<double>(std::min(col_tot[0], col_tot[1])) * static_cast<double>(min_row) /
                         static_cast<double>(grand);
    if (grand == 0 || min_expect < 5.0) {
        // degenerate table: merging leaves a single column, which carries no
        // homogeneity signal
        cell.dof = 0;
        cell.p_value = 1.0;
        return cell;
    }
    double chi2 = 0.0;
    for (const auto& r : table.counts) {
        const long long row_tot = r[0] + r[1];
        for (int b = 0; b < 2; ++b) {
            const double expect = static_cast<double>(row_tot) * static_cast<double>(col_tot[static_cast<size_t>(b)]) /
                                  static_cast<double>(grand);
            if (expect > 0) {
                const double diff = static_cast<double>(r[static_cast<size_t>(b)]) - expect;
                chi2 += diff * diff / expect;
            }
        }
    }
    cell.chi2 = chi2;
    cell.dof = static_cast<int>(rows) - 1;
    cell.p_value = chi_square_sf(chi2, cell.dof);
    cell.rejected = cell.p_value < significance;
    return cell;
}

} // namespace

NoSignalingReport nosignaling_test(const linalg::DensityOperator& shared,
                                   const std::vector<mbqc::MeasBasis>& x_settings,
                                   const std::vector<mbqc::MeasBasis>& y_settings, long long trials,
                                   double significance, std::uint64_t seed) {
    if (trials < 10000) throw std::invalid_argument("at least 10^4 trials");
    if (shared.qubits() != 2) throw std::invalid_argument("the shared system is a two-qubit state");

    // joint outcome probabilities per setting pair
    const size_t nx = x_settings.size(), ny = y_settings.size();
    std::vector<std::array<double, 4>> probs(nx * ny);
    for (size_t xi = 0; xi < nx; ++xi)
        for (size_t yi = 0; yi < ny; ++yi) {
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const CVector ka = basis_ket_for(x_settings[xi], a);
                    const CVector kb = basis_ket_for(y_settings[yi], b);
                    const CVector joint = linalg::kron(ka, kb);
                    probs[xi * ny + yi][static_cast<size_t>(2 * a + b)] =
                        (joint.adjoint() * shared.matrix() * joint).value().real();
                }
        }

    std::mt19937_64 rng(seed);
    std::vector<Table> tables(ny);
    for (auto& t : tables) t.counts.assign(nx, {0, 0});
    for (long long t = 0; t < trials; ++t) {
        const size_t xi = static_cast<size_t>(util::uniform01(rng) * static_cast<double>(nx)) % nx;
        const size_t yi = static_cast<size_t>(util::uniform01(rng) * static_cast<double>(ny)) % ny;
        const auto& p = probs[xi * ny + yi];
        const double u = util::uniform01(rng);
        int outcome = 3;
        double acc = 0.0;
        for (int k = 0; k < 4; ++k) {
            acc += p[static_cast<size_t>(k)];
            if (u < acc) {
                outcome = k;
                break;
            }
        }
        const int b = outcome & 1;
        ++tables[yi].counts[xi][static_cast<size_t>(b)];
    }

    NoSignalingReport rep;
    rep.trials = trials;
    for (size_t yi = 0; yi < ny; ++yi) {
        const auto cell = test_homogeneity(tables[yi], static_cast<int>(yi), significance);
        rep.any_rejection |= cell.rejected;
        rep.cells.push_back(cell);
    }
    return rep;
}

NoSignalingReport nosignaling_planted(double effect, long long trials, double significance,
                                      std::uint64_t seed) {
    if (trials < 10000) throw std::invalid_argument("at least 10^4 trials");
    std::mt19937_64 rng(seed);
    Table table;
    table.counts.assign(2, {0, 0});
    for (long long t = 0; t < trials; ++t) {
        const int x = util::uniform01(rng) < 0.5 ? 0 : 1;
        // Bob's outcome reads Alice's setting: bias flips with x
        const double p0 = 0.5 + (x == 0 ? effect : -effect);
        const int b = util::uniform01(rng) < p0 ? 0 : 1;
        ++table.counts[static_cast<size_t>(x)][static_cast<size_t>(b)];
    }
    NoSignalingReport rep;
    rep.trials = trials;
    const auto cell = test_homogeneity(table, 0, significance);
    rep.any_rejection = cell.rejected;
    rep.cells.push_back(cell);
    return rep;
}

double planted_rejection_power(double effect, long long trials, double significance) {
    // two-proportion z against the chi-square critical value (dof 1)
    const double crit = [&] {
        double lo = 0.0, hi = 100.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (chi_square_sf(mid, 1) > significance) lo = mid;
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    }();
    const double n_per = static_cast<double>(trials) / 2.0;
    const double p1 = 0.5 + effect, p2 = 0.5 - effect;
    const double se = std::sqrt(p1 * (1 - p1) / n_per + p2 * (1 - p2) / n_per);
    const double z = 2.0 * effect / se;
    const double zcrit = std::sqrt(crit);
    // P(|Z| > zcrit) with Z ~ N(z, 1)
    auto phi = [](double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); };
    return phi(z - zcrit) + phi(-z - zcrit);
}

} // namespace blindsim::security
