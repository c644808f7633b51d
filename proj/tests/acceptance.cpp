// Acceptance suite: end-to-end checks against published reference values and
// the exact-diagonalization oracle.  Each criterion prints one PASS/FAIL line
// (plus indented detail); the exit code is the number of failed criteria.
//
// Two sub-checks are known-red and intentionally kept that way:
//   - criterion 2, fourth instant, Hilbert-Schmidt distance: the reference
//     0.0836728 is the distance at the reference's own published (suboptimal)
//     Bell mixture, not a minimum.  Evaluating the distance at that published
//     mixture against our density matrix reproduces 0.0836728 to 5e-8, and
//     the true real-mixture minimum is 0.0738; no minimization procedure
//     yields their number.
//   - criterion 5, 0.05 elementwise bound: the adiabatic approximation error
//     at delta/omega = 0.15 genuinely reaches 0.097 on this grid (the value
//     is truncation-converged; both sides validate independently).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "cavitynoon/dynamics.hpp"
#include "cavitynoon/entanglement.hpp"
#include "cavitynoon/model.hpp"
#include "cavitynoon/oracle.hpp"
#include "cavitynoon/states.hpp"

using namespace cavitynoon;
using linalg::cplx;
using linalg::Mat4;

namespace {

struct Criterion {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        notes.push_back(std::string(ok ? "  ok   " : "  FAIL ") + what);
    }
};

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, a, b, c);
    return buf;
}

const ModelParams kTable{1.0, 0.15, 0.1, 0.5};

Criterion criterion1() {
    Criterion c;
    const auto t0 = std::chrono::steady_clock::now();
    const ModelParams p{1.0, 0.0, 0.0, 0.5};
    struct Case {
        BlockIndex block;
        double lambda_ref;
    };
    for (const Case k : {Case{{5, 6}, 0.166901}, Case{{6, 9}, 0.137986}, Case{{8, 8}, 0.145894}}) {
        const auto found = degeneracy_couplings(p, k.block, 0.2);
        bool hit = false;
        double best = 1e9;
        for (double lam : found) {
            best = std::min(best, std::abs(lam - k.lambda_ref));
            if (std::abs(lam - k.lambda_ref) < 1e-5) hit = true;
        }
        c.require(hit, fmt("(%g,%g) coupling within 1e-5", k.block.n0, k.block.n1) +
                           fmt(" (nearest error %.2e)", best));
    }
    const double dt = elapsed_s(t0);
    c.require(dt < 1.0, fmt("runtime %.3f s < 1 s", dt));
    return c;
}

Criterion criterion2() {
    Criterion c;
    struct Row {
        int n;
        double t, c_ref, c_tol, d_ref;
        entanglement::BellLabel dom;
        double dom_min;
    };
    const Row rows[] = {
        {1, 592.0, 0.945267, 1e-3, 0.089865, entanglement::BellLabel::PhiPlus, 0.99},
        {1, 24152.0, 0.954379, 1e-3, 0.029438, entanglement::BellLabel::PhiMinus, 0.999},
        {2, 598.0, 0.865998, 2e-3, 0.110694, entanglement::BellLabel::PhiPlus, 0.0},
        {2, 24390.0, 0.917634, 2e-3, 0.0836728, entanglement::BellLabel::PhiMinus, 0.0},
    };
    for (const Row& r : rows) {
        const auto t0 = std::chrono::steady_clock::now();
        const InitialNoonState s{r.n, {0.0, 0.0}};
        const NoonSimulator sim(s, kTable, 1e-12);
        const auto rho = sim.reduced_density(r.t);
        const double conc = entanglement::concurrence(rho.rho);
        const auto fit = entanglement::bell_fit_real(rho.rho);
        const double dt = elapsed_s(t0);

        const std::string tag = fmt("n=%g wt=%g: ", r.n, r.t);
        c.require(sim.n_max() <= 32, tag + fmt("N_max %g <= 32", sim.n_max()));
        c.require(std::abs(conc - r.c_ref) < r.c_tol,
                  tag + fmt("C = %.6f vs %.6f (err %.1e)", conc, r.c_ref, conc - r.c_ref));
        c.require(std::abs(fit.distance - r.d_ref) < 5e-3,
                  tag + fmt("d_HS = %.6f vs %.6f (err %.1e)", fit.distance, r.d_ref,
                            fit.distance - r.d_ref));
        c.require(fit.dominant == r.dom, tag + "dominant component " + to_string(fit.dominant));
        if (r.dom_min > 0.0) {
            const double mag =
                r.dom == entanglement::BellLabel::PhiPlus ? std::abs(fit.alpha) : std::abs(fit.beta);
            c.require(mag >= r.dom_min, tag + fmt("dominant magnitude %.6f >= %.3f", mag, r.dom_min));
        }
        c.require(dt < 30.0, tag + fmt("runtime %.2f s < 30 s", dt));
    }
    return c;
}

Criterion criterion3() {
    Criterion c;
    const int steps = 4000;
    std::vector<double> grid(steps);
    for (int i = 0; i < steps; ++i) grid[i] = 40000.0 * i / (steps - 1.0);
    double previous = -1.0;
    for (int n : {4, 6, 10}) {
        const InitialNoonState s{n, {0.0, 1.0}};
        const auto trace = concurrence_trace(s, kTable, grid, 1e-10);
        const auto report = entanglement::detect_sudden_death(trace, 1e-6);
        c.require(!report.intervals.empty(),
                  fmt("n=%g: %g dead intervals (>= 3 samples each)", n,
                      static_cast<double>(report.intervals.size())));
        c.require(report.longest_duration > previous,
                  fmt("n=%g: longest duration %.1f strictly above previous %.1f", n,
                      report.longest_duration, previous));
        previous = report.longest_duration;
    }
    return c;
}

Criterion criterion4() {
    Criterion c;
    for (int mode = 0; mode < 2; ++mode) {
        const double omega_j = kTable.omega_mode(mode);
        const double x = 2.0 * kTable.lambda * kTable.lambda / (omega_j * omega_j);
        const auto grid = states::hypergeometric_identity_grid(3, x, 60);
        double worst_rel = 0.0, worst_abs = 0.0;
        for (const auto& r : grid) {
            if (r.rhs != 0.0)
                worst_rel = std::max(worst_rel, std::abs(r.lhs - r.rhs) / std::abs(r.rhs));
            else
                worst_abs = std::max(worst_abs, std::abs(r.lhs));
        }
        c.require(worst_rel < 1e-8,
                  fmt("mode %g (x=%.6f): diagonal relative error %.2e < 1e-8", mode, x, worst_rel));
        c.require(worst_abs < 1e-10,
                  fmt("mode %g: off-diagonal absolute error %.2e < 1e-10", mode, worst_abs));
    }
    return c;
}

Criterion criterion5() {
    Criterion c;
    const auto t0 = std::chrono::steady_clock::now();
    const InitialNoonState s{1, {0.0, 0.0}};
    const oracle::FockTruncation trunc{20};
    const oracle::ExactEvolution exact(s, kTable, trunc);
    const NoonSimulator sim(s, kTable, 1e-12);

    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double t = 100.0 * i / 49.0;
        const auto a = sim.reduced_density(t);
        const auto e = exact.reduced_density(t);
        for (int r = 0; r < 4; ++r)
            for (int col = 0; col < 4; ++col)
                worst = std::max(worst, std::abs(a.rho(r, col) - e.rho(r, col)));
    }
    c.require(worst <= 0.05, fmt("adiabatic vs exact elementwise max %.4f <= 0.05", worst));

    const double commutator = oracle::parity_commutator_norm(kTable, trunc);
    c.require(commutator < 1e-12, fmt("parity commutator norm %.2e < 1e-12", commutator));

    const double parity0 = exact.parity_expectation(0.0);
    double norm_drift = 0.0, parity_drift = 0.0;
    for (double t : {0.0, 25.0, 50.0, 75.0, 100.0}) {
        norm_drift = std::max(norm_drift, std::abs(exact.norm_at(t) - 1.0));
        parity_drift = std::max(parity_drift, std::abs(exact.parity_expectation(t) - parity0));
    }
    c.require(norm_drift < 1e-12, fmt("norm conservation drift %.2e < 1e-12", norm_drift));
    c.require(parity_drift < 1e-10, fmt("parity conservation drift %.2e < 1e-10", parity_drift));

    // energy conservation from the evolved vector against the raw matrix
    const auto h = oracle::build_hamiltonian(kTable, trunc);
    const std::size_t dim = static_cast<std::size_t>(trunc.dimension());
    const double e_ref = exact.energy_expectation();
    double energy_drift = 0.0;
    for (double t : {0.0, 50.0, 100.0}) {
        const auto psi = exact.state_at(t);
        cplx acc{};
        for (std::size_t i = 0; i < dim; ++i) {
            cplx row{};
            for (std::size_t j = 0; j < dim; ++j) row += h[i * dim + j] * psi[j];
            acc += std::conj(psi[i]) * row;
        }
        energy_drift = std::max(energy_drift, std::abs(acc.real() - e_ref));
    }
    c.require(energy_drift < 1e-10, fmt("energy conservation drift %.2e < 1e-10", energy_drift));

    const double dt = elapsed_s(t0);
    c.require(dt < 300.0, fmt("runtime %.1f s < 300 s", dt));
    return c;
}

Criterion criterion6() {
    Criterion c;
    std::mt19937 rng(20260808);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst_trace = 0.0, worst_herm = 0.0, worst_eig = 0.0, worst_c0 = 0.0;
    double worst_weight_gap = -1.0, worst_bell = 0.0, worst_lu = 0.0;
    bool c1_all_zero = true;
    const double epsilon = 1e-9;

    for (int trial = 0; trial < 100; ++trial) {
        const ModelParams p{1.0, 0.03 + 0.22 * u01(rng), 0.02 + 0.18 * u01(rng),
                            0.05 + 0.55 * u01(rng)};
        const InitialNoonState s{static_cast<int>(u01(rng) * 6.999),
                                 {3.0 * (u01(rng) - 0.5), 3.0 * (u01(rng) - 0.5)}};
        const NoonSimulator sim(s, p, epsilon);
        worst_weight_gap = std::max(worst_weight_gap, 1.0 - sim.captured_weight() - epsilon);

        const double t = 3000.0 * u01(rng);
        const auto rho = sim.reduced_density(t);
        worst_trace = std::max(worst_trace, std::abs(rho.trace_real() - 1.0));
        worst_herm = std::max(worst_herm, rho.hermiticity_error());
        worst_eig = std::max(worst_eig, -rho.min_eigenvalue());
        worst_c0 = std::max(worst_c0, entanglement::concurrence(sim.reduced_density(0.0).rho));

        // c1 selector: equal spin labels kill the mixed-spin eigenstate
        const int b0 = static_cast<int>(u01(rng) * 6.999);
        const int b1 = static_cast<int>(u01(rng) * 6.999);
        const auto coeffs = states::expansion_coeffs(s.n, -1, 0, -1, {b0, b1}, p);
        if (coeffs[1] != 0.0) c1_all_zero = false;

        // bell fit closed form against the spectral expression
        const auto fit = entanglement::bell_fit(rho.rho);
        const auto eig = linalg::hermitian_eigen(rho.rho);
        const double spectral =
            std::sqrt(std::max(rho.purity() + 1.0 - 2.0 * eig.values[3], 0.0));
        worst_bell = std::max(worst_bell, std::abs(fit.distance - spectral));

        // local-unitary invariance of the concurrence
        const auto u2 = [&]() {
            const double theta = M_PI * u01(rng);
            const double a = 2.0 * M_PI * u01(rng), b = 2.0 * M_PI * u01(rng);
            return std::array<cplx, 4>{std::polar(std::cos(theta), a),
                                       std::polar(std::sin(theta), b),
                                       -std::polar(std::sin(theta), -b),
                                       std::polar(std::cos(theta), -a)};
        };
        const auto u_a = u2();
        const auto u_b = u2();
        Mat4 u;
        for (int i1 = 0; i1 < 2; ++i1)
            for (int i2 = 0; i2 < 2; ++i2)
                for (int j1 = 0; j1 < 2; ++j1)
                    for (int j2 = 0; j2 < 2; ++j2)
                        u(2 * i1 + i2, 2 * j1 + j2) = u_a[2 * i1 + j1] * u_b[2 * i2 + j2];
        const Mat4 rotated = linalg::matmul(u, linalg::matmul(rho.rho, linalg::adjoint(u)));
        worst_lu = std::max(worst_lu, std::abs(entanglement::concurrence(rho.rho) -
                                               entanglement::concurrence(rotated)));
    }

    c.require(worst_trace < 1e-8, fmt("trace deviation %.2e < 1e-8", worst_trace));
    c.require(worst_herm < 1e-10, fmt("hermiticity error %.2e < 1e-10", worst_herm));
    c.require(worst_eig < 1e-8, fmt("negative eigenvalue excess %.2e < 1e-8", worst_eig));
    c.require(worst_c0 < 1e-9, fmt("C(0) max %.2e < 1e-9", worst_c0));
    c.require(worst_weight_gap <= 0.0,
              fmt("captured weight always >= 1 - epsilon (worst gap %.2e)", worst_weight_gap));
    c.require(c1_all_zero, "mixed-spin coefficient c1 identically zero");
    c.require(worst_bell < 1e-10, fmt("bell-fit closed form deviation %.2e < 1e-10", worst_bell));
    c.require(worst_lu < 1e-9, fmt("local-unitary concurrence deviation %.2e < 1e-9", worst_lu));
    return c;
}

Criterion criterion7() {
    Criterion c;
    const InitialNoonState s{1, {0.0, 0.0}};
    std::vector<double> samples;
    for (int i = 1; i <= 20; ++i) samples.push_back(24152.0 * i / 20.0);
    const auto report = crosscheck_formulas(s, kTable, samples, 1e-12);
    c.require(report.max_diagonal_deviation < 1e-8,
              fmt("diagonal elements agree to %.2e < 1e-8", report.max_diagonal_deviation));
    double worst_clean = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if ((i == 1 && j == 2) || (i == 2 && j == 1)) continue;
            worst_clean = std::max(worst_clean, report.elementwise[i][j]);
        }
    c.require(worst_clean < 1e-8,
              fmt("untainted off-diagonals agree to %.2e < 1e-8", worst_clean));
    // audited, not asserted: the transcribed rho_{-1,1;1,-1} formula carries
    // a cancelling-phase defect
    c.notes.push_back(fmt("  note  audited rho(-1,1;1,-1) deviation: %.4e (reported only)",
                          report.elementwise[1][2]));
    return c;
}

} // namespace

int main(int argc, char** argv) {
    const struct {
        const char* name;
        Criterion (*run)();
    } criteria[] = {
        {"Fig. 1 degeneracy couplings", criterion1},
        {"Table 1 reproduction", criterion2},
        {"sudden-death monotonicity", criterion3},
        {"hypergeometric identity", criterion4},
        {"oracle equivalence", criterion5},
        {"structural invariant suite", criterion6},
        {"crosscheck audit", criterion7},
    };
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);

    int failures = 0;
    for (int i = 0; i < 7; ++i) {
        if (only != 0 && only != i + 1) continue;
        const auto t0 = std::chrono::steady_clock::now();
        const Criterion result = criteria[i].run();
        std::printf("criterion %d: %s — %s (%.2f s)\n", i + 1, result.pass ? "PASS" : "FAIL",
                    criteria[i].name, elapsed_s(t0));
        for (const auto& note : result.notes) std::printf("%s\n", note.c_str());
        if (!result.pass) ++failures;
        std::fflush(stdout);
    }
    return failures;
}
