#include "cavitynoon/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "cavitynoon/entanglement.hpp"
#include "parallel.hpp"

namespace cavitynoon {

using linalg::cplx;

double QubitDensityMatrix::trace_real() const { return linalg::trace(rho).real(); }

double QubitDensityMatrix::hermiticity_error() const {
    double m = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            m = std::max(m, std::abs(rho(i, j) - std::conj(rho(j, i))));
    return m;
}

double QubitDensityMatrix::min_eigenvalue() const {
    return linalg::hermitian_eigen(rho).values[0];
}

double QubitDensityMatrix::purity() const {
    double p = 0.0;
    for (const auto& v : rho.a) p += std::norm(v);
    return p;
}

std::complex<double> EvolutionKernel::diagonal_sum() const {
    specfun::NeumaierSum re, im;
    const std::size_t b = blocks();
    for (std::size_t i = 0; i < b; ++i) {
        re.add(entries[i * b + i].real());
        im.add(entries[i * b + i].imag());
    }
    return {re.value(), im.value()};
}

NoonSimulator::NoonSimulator(const InitialNoonState& state, const ModelParams& params,
                             double epsilon, int cap)
    : state_(state), params_(params), epsilon_(epsilon) {
    params_.validate();
    n_max_ = states::choose_truncation(state_, params_, epsilon_, cap);
    projection_ = states::project_noon(state_, params_, n_max_);

    const int dim = n_max_ + 1;
    spectra_.reserve(static_cast<std::size_t>(dim) * dim);
    weights_.resize(static_cast<std::size_t>(dim) * dim);
    specfun::NeumaierSum captured;
    for (int b0 = 0; b0 < dim; ++b0)
        for (int b1 = 0; b1 < dim; ++b1) {
            const BlockIndex b{b0, b1};
            spectra_.push_back(block_spectrum(params_, b));
            const cplx w = projection_.weight(b, state_);
            weights_[index(b)] = w;
            captured.add(std::norm(w));
        }
    captured_weight_ = captured.value();
    overlaps_ = specfun::OverlapTable(params_, n_max_);
}

EvolutionKernel build_kernel(const InitialNoonState& state, const states::NoonProjection& proj,
                             const ModelParams& params) {
    params.validate();
    EvolutionKernel k;
    k.n_max = proj.n_max;
    const std::size_t blocks = k.blocks();
    std::vector<cplx> w(blocks);
    for (int b0 = 0; b0 <= proj.n_max; ++b0)
        for (int b1 = 0; b1 <= proj.n_max; ++b1)
            w[proj.index({b0, b1})] = proj.weight({b0, b1}, state);
    k.entries.resize(blocks * blocks);
    for (std::size_t i = 0; i < blocks; ++i)
        for (std::size_t j = 0; j < blocks; ++j)
            k.entries[i * blocks + j] = w[i] * std::conj(w[j]);
    return k;
}

EvolutionKernel NoonSimulator::kernel() const {
    return build_kernel(state_, projection_, params_);
}

namespace {

// displaced-basis slot conventions shared with BlockSpectrum::mixing
constexpr int kShift0[4] = {+2, -2, 0, 0};
constexpr int kShift1[4] = {0, 0, +2, -2};
constexpr int kSpinIndex[4] = {3, 0, 2, 1};   // over (|-1,-1>,|-1,1>,|1,-1>,|1,1>)

} // namespace

// Partial trace of the evolved expansion.  The state is
//   |psi(t)> = sum_N w_N sum_j mixing[j][1] e^{-i E_j t} |E_j^N>,
// so collecting per displaced slot b the amplitude
//   V_b(N) = w_N sum_j mixing[j][1] mixing[j][b] e^{-i E_j t}
// reduces the trace to mode-factorized overlap contractions
//   rho(s_b, s_b') = sum_{b,b'} V_b^T O_0 x O_1 conj(V_b').
QubitDensityMatrix NoonSimulator::rho_first_principles(double omega_t) const {
    const double t = omega_t / params_.omega;
    const std::size_t dim = static_cast<std::size_t>(n_max_) + 1;
    const std::size_t blocks = dim * dim;

    std::array<std::vector<cplx>, 4> v;
    for (auto& plane : v) plane.assign(blocks, cplx{});
    for (std::size_t i = 0; i < blocks; ++i) {
        const cplx w = weights_[i];
        if (w == cplx{}) continue;
        const BlockSpectrum& s = spectra_[i];
        for (int j = 0; j < 4; ++j) {
            const double a = s.mixing[j][1];
            if (a == 0.0) continue;
            const cplx phase = std::polar(1.0, -s.energy[j] * t) * (a * w);
            for (int b = 0; b < 4; ++b)
                if (s.mixing[j][b] != 0.0) v[b][i] += phase * s.mixing[j][b];
        }
    }

    QubitDensityMatrix out;
    out.omega_t = omega_t;
    std::vector<cplx> tmp(blocks), folded(blocks);
    for (int b = 0; b < 4; ++b) {
        bool empty = true;
        for (const auto& x : v[b])
            if (x != cplx{}) { empty = false; break; }
        if (empty) continue;
        for (int bp = 0; bp < 4; ++bp) {
            const auto& o0 = overlaps_.matrix(0, kShift0[bp], kShift0[b]);
            const auto& o1 = overlaps_.matrix(1, kShift1[bp], kShift1[b]);
            // tmp[M0][N1] = sum_N0 o0[M0][N0] v_b[N0][N1]
            for (std::size_t m0 = 0; m0 < dim; ++m0)
                for (std::size_t n1 = 0; n1 < dim; ++n1) {
                    cplx acc{};
                    for (std::size_t n0 = 0; n0 < dim; ++n0)
                        acc += o0[m0 * dim + n0] * v[b][n0 * dim + n1];
                    tmp[m0 * dim + n1] = acc;
                }
            // folded[M0][M1] = sum_N1 tmp[M0][N1] o1[M1][N1]
            for (std::size_t m0 = 0; m0 < dim; ++m0)
                for (std::size_t m1 = 0; m1 < dim; ++m1) {
                    cplx acc{};
                    for (std::size_t n1 = 0; n1 < dim; ++n1)
                        acc += tmp[m0 * dim + n1] * o1[m1 * dim + n1];
                    folded[m0 * dim + m1] = acc;
                }
            cplx element{};
            for (std::size_t i = 0; i < blocks; ++i) element += folded[i] * std::conj(v[bp][i]);
            out.rho(kSpinIndex[b], kSpinIndex[bp]) += element;
        }
    }
    return out;
}

// Literal transcription of the closed-form matrix elements, retained as the
// audit path; see crosscheck_formulas.
QubitDensityMatrix NoonSimulator::rho_element_formulas(double omega_t) const {
    const double t = omega_t / params_.omega;
    const std::size_t dim = static_cast<std::size_t>(n_max_) + 1;
    const double gm = gamma_minus(params_);
    const double omega0 = params_.omega0();

    struct BlockTerms {
        double e0, ep, em;
        double p2, q2;        // (chi -+ Gamma_-)/chi
        double lam_chi;       // Lambda/chi
        double lam2_chi2;
        double gm2_chi2;
    };
    std::vector<BlockTerms> bt(spectra_.size());
    for (std::size_t i = 0; i < spectra_.size(); ++i) {
        const BlockSpectrum& s = spectra_[i];
        BlockTerms& b = bt[i];
        b.e0 = s.energy[0];
        b.ep = s.energy[2];
        b.em = s.energy[3];
        if (s.chi_n > 0.0) {
            b.p2 = (s.chi_n - gm) / s.chi_n;
            b.q2 = (s.chi_n + gm) / s.chi_n;
            b.lam_chi = s.lambda_n / s.chi_n;
            b.lam2_chi2 = b.lam_chi * b.lam_chi;
            b.gm2_chi2 = (gm * gm) / (s.chi_n * s.chi_n);
        } else {
            b.p2 = 1.0;
            b.q2 = 1.0;
            b.lam_chi = 0.0;
            b.lam2_chi2 = 0.0;
            b.gm2_chi2 = 0.0;
        }
    }
    const auto g = [&](std::size_t i, std::size_t j) { return weights_[i] * std::conj(weights_[j]); };
    const auto phase = [&](double ediff) { return std::polar(1.0, -ediff * t); };
    const auto idx = [&](std::size_t b0, std::size_t b1) { return b0 * dim + b1; };

    QubitDensityMatrix out;
    out.omega_t = omega_t;
    linalg::Mat4& r = out.rho;

    // diagonals
    {
        specfun::NeumaierSum d00, d11, d33;
        for (std::size_t i = 0; i < bt.size(); ++i) {
            const BlockTerms& b = bt[i];
            const double gdiag = g(i, i).real();
            const double cos_pm = std::cos((b.ep - b.em) * t);
            const double fast = b.gm2_chi2 + 4.0 * b.lam2_chi2 * cos_pm;
            const double slow = 2.0 * (b.p2 * std::cos((b.e0 - b.ep) * t) +
                                       b.q2 * std::cos((b.e0 - b.em) * t));
            d00.add(gdiag * (fast + slow));
            d33.add(gdiag * (fast - slow));
            d11.add(gdiag * b.lam2_chi2 * (1.0 - cos_pm));
        }
        r(0, 0) = 3.0 / 8.0 + d00.value() / 8.0;
        r(3, 3) = 3.0 / 8.0 + d33.value() / 8.0;
        r(1, 1) = 0.5 * d11.value();
        r(2, 2) = r(1, 1);
    }

    // rho_{-1,-1;-1,1} and rho_{-1,-1;1,-1}: double block sum with the
    // (Lambda'/chi') weight and mixed shifted overlaps
    {
        cplx r01{}, r02{};
        for (std::size_t n0 = 0; n0 < dim; ++n0)
            for (std::size_t n1 = 0; n1 < dim; ++n1) {
                const std::size_t i = idx(n0, n1);
                const BlockTerms& b = bt[i];
                for (std::size_t m0 = 0; m0 < dim; ++m0)
                    for (std::size_t m1 = 0; m1 < dim; ++m1) {
                        const std::size_t j = idx(m0, m1);
                        const BlockTerms& bp = bt[j];
                        if (bp.lam_chi == 0.0) continue;
                        const cplx common =
                            g(i, j) * bp.lam_chi *
                            (b.p2 * phase(b.ep - bp.ep) - b.q2 * phase(b.em - bp.em) +
                             2.0 * phase(b.e0 - bp.ep) - 2.0 * phase(b.e0 - bp.em) -
                             b.p2 * phase(b.ep - bp.em) + b.q2 * phase(b.em - bp.ep));
                        const double o0 = overlaps_.get(0, 0, -2, static_cast<int>(m0), static_cast<int>(n0));
                        r01 += common * (o0 * overlaps_.get(1, -2, 0, static_cast<int>(m1), static_cast<int>(n1)));
                        r02 += common * (o0 * overlaps_.get(1, 2, 0, static_cast<int>(m1), static_cast<int>(n1)));
                    }
            }
        r(0, 1) = r01 / 8.0;
        r(0, 2) = r02 / 8.0;
    }

    // rho_{-1,-1;1,1}: shared N1 index (mode-1 shifts match exactly)
    {
        cplx r03{};
        for (std::size_t n0 = 0; n0 < dim; ++n0)
            for (std::size_t n1 = 0; n1 < dim; ++n1) {
                const std::size_t i = idx(n0, n1);
                const BlockTerms& b = bt[i];
                for (std::size_t m0 = 0; m0 < dim; ++m0) {
                    const std::size_t j = idx(m0, n1);
                    const BlockTerms& bp = bt[j];
                    const double olap = overlaps_.get(0, 2, -2, static_cast<int>(m0), static_cast<int>(n0));
                    if (olap == 0.0) continue;
                    const cplx bracket =
                        phase(omega0 * (static_cast<double>(n0) - static_cast<double>(m0))) +
                        0.5 * b.q2 * phase(b.em - bp.e0) + 0.5 * b.p2 * phase(b.ep - bp.e0) -
                        0.5 * bp.q2 * phase(b.e0 - bp.em) - 0.5 * bp.p2 * phase(b.e0 - bp.ep) -
                        0.25 * b.q2 * bp.q2 * phase(b.em - bp.em) -
                        0.25 * b.q2 * bp.p2 * phase(b.em - bp.ep) -
                        0.25 * b.p2 * bp.q2 * phase(b.ep - bp.em) -
                        0.25 * b.p2 * bp.p2 * phase(b.ep - bp.ep);
                    r03 += g(i, j) * olap * bracket;
                }
            }
        r(0, 3) = -0.25 * r03;
    }

    // rho_{-1,1;1,-1}: transcribed as printed; the second and fourth phase
    // terms share the same energy difference with opposite signs and cancel,
    // which the crosscheck against the partial trace reports.
    {
        cplx r12{};
        for (std::size_t n0 = 0; n0 < dim; ++n0)
            for (std::size_t n1 = 0; n1 < dim; ++n1) {
                const std::size_t i = idx(n0, n1);
                const BlockTerms& b = bt[i];
                if (b.lam_chi == 0.0) continue;
                for (std::size_t m1 = 0; m1 < dim; ++m1) {
                    const std::size_t j = idx(n0, m1);
                    const BlockTerms& bp = bt[j];
                    if (bp.lam_chi == 0.0) continue;
                    const double olap = overlaps_.get(1, 2, -2, static_cast<int>(m1), static_cast<int>(n1));
                    const cplx bracket = phase(b.ep - bp.ep) + phase(b.em - bp.ep) -
                                         phase(b.ep - bp.em) - phase(b.em - bp.ep);
                    r12 += b.lam_chi * bp.lam_chi * g(i, j) * olap * bracket;
                }
            }
        r(1, 2) = 0.25 * r12;
    }

    // rho_{-1,1;1,1} and rho_{1,-1;1,1}: (Lambda/chi) weight on the unprimed
    // block, primed-coefficient bracket
    {
        cplx r13{}, r23{};
        for (std::size_t n0 = 0; n0 < dim; ++n0)
            for (std::size_t n1 = 0; n1 < dim; ++n1) {
                const std::size_t i = idx(n0, n1);
                const BlockTerms& b = bt[i];
                if (b.lam_chi == 0.0) continue;
                for (std::size_t m0 = 0; m0 < dim; ++m0)
                    for (std::size_t m1 = 0; m1 < dim; ++m1) {
                        const std::size_t j = idx(m0, m1);
                        const BlockTerms& bp = bt[j];
                        const cplx common =
                            g(i, j) * b.lam_chi *
                            (bp.p2 * phase(b.ep - bp.ep) - bp.q2 * phase(b.em - bp.em) -
                             2.0 * phase(b.ep - bp.e0) + 2.0 * phase(b.em - bp.e0) +
                             bp.q2 * phase(b.ep - bp.em) - bp.p2 * phase(b.em - bp.ep));
                        const double o0 = overlaps_.get(0, 2, 0, static_cast<int>(m0), static_cast<int>(n0));
                        r13 += common * (o0 * overlaps_.get(1, 0, -2, static_cast<int>(m1), static_cast<int>(n1)));
                        r23 += common * (o0 * overlaps_.get(1, 0, 2, static_cast<int>(m1), static_cast<int>(n1)));
                    }
            }
        r(1, 3) = r13 / 8.0;
        r(2, 3) = r23 / 8.0;
    }

    // Hermitian partners
    r(1, 0) = std::conj(r(0, 1));
    r(2, 0) = std::conj(r(0, 2));
    r(3, 0) = std::conj(r(0, 3));
    r(2, 1) = std::conj(r(1, 2));
    r(3, 1) = std::conj(r(1, 3));
    r(3, 2) = std::conj(r(2, 3));
    return out;
}

QubitDensityMatrix NoonSimulator::reduced_density(double omega_t, RhoMethod method) const {
    return method == RhoMethod::FirstPrinciples ? rho_first_principles(omega_t)
                                                : rho_element_formulas(omega_t);
}

QubitDensityMatrix reduced_density(const InitialNoonState& state, const ModelParams& params,
                                   double omega_t, RhoMethod method, double epsilon) {
    return NoonSimulator(state, params, epsilon).reduced_density(omega_t, method);
}

std::vector<TracePoint> concurrence_trace(const InitialNoonState& state,
                                          const ModelParams& params,
                                          const std::vector<double>& omega_t_grid,
                                          double epsilon) {
    const NoonSimulator sim(state, params, epsilon);
    std::vector<TracePoint> trace(omega_t_grid.size());
    detail::parallel_for(omega_t_grid.size(), [&](std::size_t i) {
        TracePoint& pt = trace[i];
        pt.omega_t = omega_t_grid[i];
        pt.rho = sim.reduced_density(pt.omega_t);
        pt.concurrence = entanglement::concurrence(pt.rho.rho);
    });
    return trace;
}

CrosscheckReport crosscheck_formulas(const InitialNoonState& state, const ModelParams& params,
                                     const std::vector<double>& omega_t_samples,
                                     double epsilon) {
    const NoonSimulator sim(state, params, epsilon);
    CrosscheckReport report;
    for (double t : omega_t_samples) {
        const QubitDensityMatrix a = sim.reduced_density(t, RhoMethod::FirstPrinciples);
        const QubitDensityMatrix b = sim.reduced_density(t, RhoMethod::ElementFormulas);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const double dev = std::abs(a.rho(i, j) - b.rho(i, j));
                report.elementwise[i][j] = std::max(report.elementwise[i][j], dev);
                report.max_deviation = std::max(report.max_deviation, dev);
                if (i == j)
                    report.max_diagonal_deviation = std::max(report.max_diagonal_deviation, dev);
            }
    }
    return report;
}

} // namespace cavitynoon
