#include "cavitynoon/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cavitynoon::entanglement {

using linalg::cplx;
using linalg::Mat4;

Mat4 spin_flip(const Mat4& rho) {
    // (sigma_y x sigma_y) rho* (sigma_y x sigma_y) as an index/sign map:
    // rho~(i,j) = y_i y_j conj(rho(3-i, 3-j)) with y = (-1, 1, 1, -1).
    static constexpr double y[4] = {-1.0, 1.0, 1.0, -1.0};
    Mat4 out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out(i, j) = y[i] * y[j] * std::conj(rho(3 - i, 3 - j));
    return out;
}

namespace {

void require_density_matrix(const Mat4& rho) {
    double herm = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            herm = std::max(herm, std::abs(rho(i, j) - std::conj(rho(j, i))));
    if (herm > 1e-7)
        throw std::invalid_argument("concurrence: input is not Hermitian to tolerance");
    if (std::abs(linalg::trace(rho).real() - 1.0) > 1e-6 ||
        std::abs(linalg::trace(rho).imag()) > 1e-8)
        throw std::invalid_argument("concurrence: input trace is not 1 to tolerance");
}

Mat4 hermitize(const Mat4& rho) {
    Mat4 h;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            h(i, j) = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
    return h;
}

} // namespace

double concurrence(const Mat4& rho) {
    require_density_matrix(rho);
    const Mat4 h = hermitize(rho);
    const Mat4 flipped = spin_flip(h);

    // rho rho~ is similar to the Hermitian PSD matrix sqrt(rho) rho~ sqrt(rho),
    // whose spectrum the Jacobi solver delivers with guaranteed real output.
    const Mat4 root = linalg::sqrt_psd(h);
    const Mat4 m = linalg::matmul(root, linalg::matmul(flipped, root));
    const auto eig = linalg::hermitian_eigen(m);

    std::array<double, 4> lam = eig.values;   // ascending
    for (double& l : lam) {
        if (l < -1e-10)
            throw std::invalid_argument("concurrence: spectrum of rho*rho~ is negative beyond tolerance");
        l = std::max(l, 0.0);
    }
    const double c = std::sqrt(lam[3]) - std::sqrt(lam[2]) - std::sqrt(lam[1]) - std::sqrt(lam[0]);
    return std::max(0.0, c);
}

std::string to_string(BellLabel label) {
    switch (label) {
        case BellLabel::PhiPlus: return "phi_plus";
        case BellLabel::PhiMinus: return "phi_minus";
        case BellLabel::PsiPlus: return "psi_plus";
        case BellLabel::PsiMinus: return "psi_minus";
    }
    return "unknown";
}

BellFit bell_fit(const Mat4& rho) {
    const Mat4 h = hermitize(rho);
    const auto eig = linalg::hermitian_eigen(h);

    BellFit fit;
    fit.degenerate_top = (eig.values[3] - eig.values[2]) < 1e-10;

    // dominant eigenvector
    std::array<cplx, 4> v{eig.vectors(0, 3), eig.vectors(1, 3), eig.vectors(2, 3),
                          eig.vectors(3, 3)};

    // components over (phi+, phi-, psi+, psi-); basis states are
    // (e3 +- i e0)/sqrt2 and (e2 +- i e1)/sqrt2
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::array<cplx, 4> coeff{
        (v[3] - cplx{0.0, 1.0} * v[0]) * inv_sqrt2,
        (v[3] + cplx{0.0, 1.0} * v[0]) * inv_sqrt2,
        (v[2] - cplx{0.0, 1.0} * v[1]) * inv_sqrt2,
        (v[2] + cplx{0.0, 1.0} * v[1]) * inv_sqrt2,
    };

    int dominant = 0;
    for (int i = 1; i < 4; ++i)
        if (std::abs(coeff[i]) > std::abs(coeff[dominant])) dominant = i;
    if (std::abs(coeff[dominant]) > 0.0) {
        const cplx rotate = std::abs(coeff[dominant]) / coeff[dominant];
        for (auto& c : coeff) c *= rotate;
    }

    fit.alpha = coeff[0];
    fit.beta = coeff[1];
    fit.gamma = coeff[2];
    fit.delta = coeff[3];
    fit.dominant = static_cast<BellLabel>(dominant);

    double purity = 0.0;
    for (const auto& x : h.a) purity += std::norm(x);
    fit.distance = std::sqrt(std::max(purity + 1.0 - 2.0 * eig.values[3], 0.0));
    return fit;
}

BellFit bell_fit_real(const Mat4& rho) {
    const Mat4 h = hermitize(rho);
    // generalized Bell states as columns over (|-1,-1>,|-1,1>,|1,-1>,|1,1>)
    const double is2 = 1.0 / std::sqrt(2.0);
    const cplx i_is2{0.0, is2};
    const cplx basis[4][4] = {
        {i_is2, 0.0, 0.0, is2},     // phi+
        {-i_is2, 0.0, 0.0, is2},    // phi-
        {0.0, i_is2, is2, 0.0},     // psi+
        {0.0, -i_is2, is2, 0.0},    // psi-
    };
    // real part of rho in the Bell basis: the quadratic form a real
    // coefficient vector sees
    Mat4 m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            cplx acc{};
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    acc += std::conj(basis[i][a]) * h(a, b) * basis[j][b];
            m(i, j) = acc.real();
        }
    const auto eig = linalg::hermitian_eigen(m);

    BellFit fit;
    fit.degenerate_top = (eig.values[3] - eig.values[2]) < 1e-10;
    std::array<double, 4> coeff{};
    for (int i = 0; i < 4; ++i) coeff[i] = eig.vectors(i, 3).real();
    double nn = 0.0;
    for (double ci : coeff) nn += ci * ci;
    for (double& ci : coeff) ci /= std::sqrt(nn);

    int dominant = 0;
    for (int i = 1; i < 4; ++i)
        if (std::abs(coeff[i]) > std::abs(coeff[dominant])) dominant = i;
    if (coeff[dominant] < 0.0)
        for (double& ci : coeff) ci = -ci;

    fit.alpha = coeff[0];
    fit.beta = coeff[1];
    fit.gamma = coeff[2];
    fit.delta = coeff[3];
    fit.dominant = static_cast<BellLabel>(dominant);

    double purity = 0.0;
    for (const auto& x : h.a) purity += std::norm(x);
    fit.distance = std::sqrt(std::max(purity + 1.0 - 2.0 * eig.values[3], 0.0));
    return fit;
}

SuddenDeathReport detect_sudden_death(const std::vector<TracePoint>& trace, double zero_tol,
                                      const std::optional<std::function<double(double)>>& refine) {
    SuddenDeathReport report;
    const std::size_t n = trace.size();
    std::size_t i = 0;
    while (i < n) {
        if (trace[i].concurrence > zero_tol) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && trace[j + 1].concurrence <= zero_tol) ++j;
        if (j - i + 1 >= 3) {
            SuddenDeathReport::Interval iv{trace[i].omega_t, trace[j].omega_t};
            if (refine) {
                const auto bisect = [&](double lo, double hi, bool dead_at_hi) {
                    for (int it = 0; it < 60; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        const bool dead = (*refine)(mid) <= zero_tol;
                        if (dead == dead_at_hi)
                            hi = mid;
                        else
                            lo = mid;
                    }
                    return 0.5 * (lo + hi);
                };
                if (i > 0) iv.t_start = bisect(trace[i - 1].omega_t, trace[i].omega_t, true);
                if (j + 1 < n) iv.t_end = bisect(trace[j + 1].omega_t, trace[j].omega_t, true);
            }
            report.intervals.push_back(iv);
            report.longest_duration = std::max(report.longest_duration, iv.duration());
        }
        i = j + 1;
    }
    return report;
}

} // namespace cavitynoon::entanglement
